#include "slr/viz.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "slr/common.hpp"
#include "slr/image_io.hpp"

namespace fs = std::filesystem;

namespace slr {

namespace {

std::string frame_name(size_t t) {
    std::string s = std::to_string(t);
    while (s.size() < 6) s = "0" + s;
    return "overlay_" + s + ".png";
}

// Piecewise-linear jet-style colormap, s in [0,1] -> RGB in [0,255].
void heat_color(double s, double& r, double& g, double& b) {
    r = 255.0 * std::clamp(std::min(4.0 * s - 1.5, -4.0 * s + 4.5), 0.0, 1.0);
    g = 255.0 * std::clamp(std::min(4.0 * s - 0.5, -4.0 * s + 3.5), 0.0, 1.0);
    b = 255.0 * std::clamp(std::min(4.0 * s + 0.5, -4.0 * s + 2.5), 0.0, 1.0);
}

void fill_rect(Tensor& img, int y0, int x0, int y1, int x1, double r, double g,
               double b) {
    const int h = static_cast<int>(img.dim(0)), w = static_cast<int>(img.dim(1));
    y0 = std::clamp(y0, 0, h);
    y1 = std::clamp(y1, 0, h);
    x0 = std::clamp(x0, 0, w);
    x1 = std::clamp(x1, 0, w);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            img.at(y, x, 0) = r;
            img.at(y, x, 1) = g;
            img.at(y, x, 2) = b;
        }
}

void draw_rect_border(Tensor& img, int y0, int x0, int y1, int x1, double r,
                      double g, double b) {
    fill_rect(img, y0, x0, y0 + 1, x1, r, g, b);
    fill_rect(img, y1 - 1, x0, y1, x1, r, g, b);
    fill_rect(img, y0, x0, y1, x0 + 1, r, g, b);
    fill_rect(img, y0, x1 - 1, y1, x1, r, g, b);
}

}  // namespace

AttentionTimeline attention_timeline(Model& model, const ClipTensor& rgb,
                                     const ClipTensor* depth) {
    if (!variant_has_attention(model.cfg.variant))
        fail_invalid("variant ", variant_name(model.cfg.variant),
                     " has no attention module");
    auto res = model.forward(rgb, depth, Model::Mode::inference);

    AttentionTimeline tl;
    tl.weights = res.attention->weights;
    const size_t t_len = tl.weights.size();
    const double uniform = 1.0 / static_cast<double>(t_len);
    tl.attended.assign(t_len, false);
    bool any = false;
    size_t arg = 0;
    for (size_t t = 0; t < t_len; ++t) {
        if (tl.weights[t] >= uniform) {
            tl.attended[t] = true;
            any = true;
        }
        if (tl.weights[t] > tl.weights[arg]) arg = t;
    }
    if (!any) tl.attended[arg] = true;  // rounding can push every weight below
    return tl;
}

void render_overlay(const ClipTensor& raw_rgb, const SaliencyClip& saliency,
                    const AttentionTimeline* timeline,
                    const std::string& out_dir) {
    const size_t t_len = raw_rgb.frames();
    if (saliency.maps.dim(0) != t_len || saliency.maps.dim(1) != raw_rgb.height() ||
        saliency.maps.dim(2) != raw_rgb.width())
        fail_invalid("saliency shape does not match the clip");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail_runtime("cannot create ", out_dir, ": ", ec.message());

    const size_t h = raw_rgb.height(), w = raw_rgb.width();
    constexpr double kAlpha = 0.6;
    for (size_t t = 0; t < t_len; ++t) {
        Tensor frame({h, w, 3});
        for (size_t y = 0; y < h; ++y)
            for (size_t x = 0; x < w; ++x) {
                const double s = saliency.maps.at(t, y, x);
                double hr, hg, hb;
                heat_color(s, hr, hg, hb);
                const double a = kAlpha * s;  // zero saliency keeps the frame
                for (size_t c = 0; c < 3; ++c) {
                    const double base = raw_rgb.data.at(t, y, x, c);
                    const double heat = c == 0 ? hr : (c == 1 ? hg : hb);
                    frame.at(y, x, c) = base + (heat - base) * a;
                }
            }
        write_image_rgb(frame, (fs::path(out_dir) / frame_name(t)).string());
    }

    if (!timeline) return;
    const size_t n = timeline->weights.size();
    const int bar_w = 14, gap = 4, margin = 24;
    const int plot_h = 160;
    const int width =
        std::max<int>(320, margin * 2 + static_cast<int>(n) * (bar_w + gap));
    const int height = plot_h + 2 * margin;
    Tensor img({static_cast<size_t>(height), static_cast<size_t>(width), 3});
    fill_rect(img, 0, 0, height, width, 255, 255, 255);
    // Axis.
    fill_rect(img, height - margin, margin / 2, height - margin + 1,
              width - margin / 2, 40, 40, 40);

    double wmax = 0.0;
    for (size_t t = 0; t < n; ++t) wmax = std::max(wmax, timeline->weights[t]);
    for (size_t t = 0; t < n; ++t) {
        const int x0 = margin + static_cast<int>(t) * (bar_w + gap);
        const double frac = wmax > 0.0 ? timeline->weights[t] / wmax : 0.0;
        const int bh = static_cast<int>(std::lround(frac * (plot_h - 2)));
        const int y1 = height - margin;
        fill_rect(img, y1 - bh, x0, y1, x0 + bar_w, 120, 140, 200);
        if (timeline->attended[t])
            draw_rect_border(img, margin - 4, x0 - 2, y1 + 4, x0 + bar_w + 2,
                             220, 30, 30);
    }
    write_image_rgb(img, (fs::path(out_dir) / "timeline.png").string());
}

}  // namespace slr
