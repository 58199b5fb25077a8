#include "slr/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "slr/common.hpp"
#include "slr/image_io.hpp"
#include "slr/kernels.hpp"

namespace fs = std::filesystem;

namespace slr {

namespace {

long parse_long(const std::string& s, const std::string& ctx) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        fail_runtime(ctx, ": not an integer: '", s, "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

SkeletonTrack load_skeleton_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_runtime("cannot open skeleton file: ", path);

    struct Row {
        long frame, joint;
        double x, y;
    };
    std::vector<Row> rows;
    long max_frame = -1, max_joint = -1;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("frame", 0) == 0) continue;  // header
        auto f = split_csv(line);
        if (f.size() != 4)
            fail_runtime("skeleton ", path, " line ", lineno,
                         ": expected 4 fields");
        const std::string ctx = format_msg("skeleton ", path, " line ", lineno);
        Row r;
        r.frame = parse_long(f[0], ctx);
        r.joint = parse_long(f[1], ctx);
        r.x = std::stod(f[2]);
        r.y = std::stod(f[3]);
        if (!std::isfinite(r.x) || !std::isfinite(r.y))
            fail_runtime(ctx, ": non-finite coordinate");
        max_frame = std::max(max_frame, r.frame);
        max_joint = std::max(max_joint, r.joint);
        rows.push_back(r);
    }
    if (rows.empty()) fail_runtime("skeleton file has no rows: ", path);

    SkeletonTrack track;
    track.joints = Tensor({static_cast<size_t>(max_frame + 1),
                           static_cast<size_t>(max_joint + 1), 2});
    std::vector<char> seen(track.joints.size() / 2, 0);
    for (const auto& r : rows) {
        track.joints.at(r.frame, r.joint, 0) = r.x;
        track.joints.at(r.frame, r.joint, 1) = r.y;
        seen[r.frame * (max_joint + 1) + r.joint] = 1;
    }
    for (size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            fail_runtime("skeleton ", path, ": missing frame ",
                         i / (max_joint + 1), " joint ", i % (max_joint + 1));
    return track;
}

ClipTensor decode_clip(const SampleRecord& record, Modality modality,
                       const std::string& base_dir) {
    std::string rel =
        modality == Modality::rgb ? record.rgb_path : record.depth_path;
    if (rel.empty())
        fail_runtime("sample ", record.sample_id, " has no ",
                     modality == Modality::rgb ? "rgb" : "depth", " path");
    std::string path = rel;
    if (!base_dir.empty() && !fs::path(rel).is_absolute())
        path = (fs::path(base_dir) / rel).string();

    ClipTensor clip;
    clip.modality = modality;

    if (is_directory(path)) {
        auto files = list_frame_files(path);
        if (files.empty()) fail_runtime("frame directory is empty: ", path);
        for (size_t t = 0; t < files.size(); ++t) {
            Image img;
            try {
                img = modality == Modality::rgb ? read_image_rgb(files[t])
                                                : read_image_gray(files[t]);
            } catch (const std::exception& e) {
                fail_runtime("sample ", record.sample_id, " frame ", t, ": ",
                             e.what());
            }
            if (t == 0) {
                clip.data = Tensor({files.size(), img.data.dim(0),
                                    img.data.dim(1), img.data.dim(2)});
                clip.range_max = img.max_value;
            } else if (img.data.dim(0) != clip.height() ||
                       img.data.dim(1) != clip.width()) {
                fail_runtime("sample ", record.sample_id, " frame ", t,
                             ": size differs from frame 0");
            }
            std::copy(img.data.data(), img.data.data() + img.data.size(),
                      clip.data.data() + t * img.data.size());
        }
    } else if (fs::is_regular_file(path)) {
        auto frames = read_video_frames(path, modality == Modality::depth);
        clip.data = Tensor({frames.size(), frames[0].dim(0), frames[0].dim(1),
                            frames[0].dim(2)});
        clip.range_max = 255.0;
        for (size_t t = 0; t < frames.size(); ++t)
            std::copy(frames[t].data(), frames[t].data() + frames[t].size(),
                      clip.data.data() + t * frames[t].size());
    } else {
        fail_runtime("clip path does not exist: ", path);
    }
    return clip;
}

ClipTensor resize_frames(const ClipTensor& clip, int side) {
    if (side < 8) fail_invalid("resize side must be >= 8, got ", side);
    const size_t t = clip.frames(), c = clip.channels();
    ClipTensor out;
    out.modality = clip.modality;
    out.range_min = clip.range_min;
    out.range_max = clip.range_max;
    out.data = Tensor({t, static_cast<size_t>(side), static_cast<size_t>(side), c});
    const size_t in_stride = clip.height() * clip.width() * c;
    const size_t out_stride = static_cast<size_t>(side) * side * c;
    for (size_t i = 0; i < t; ++i)
        kernels::bilinear_resize(clip.data.data() + i * in_stride,
                                 static_cast<int>(clip.height()),
                                 static_cast<int>(clip.width()),
                                 static_cast<int>(c),
                                 out.data.data() + i * out_stride, side, side);
    return out;
}

ClipTensor replicate_depth_channels(const ClipTensor& clip) {
    if (clip.channels() != 1)
        fail_invalid("replicate_depth_channels expects C=1, got C=",
                     clip.channels());
    ClipTensor out;
    out.modality = clip.modality;
    out.range_min = clip.range_min;
    out.range_max = clip.range_max;
    out.data = Tensor({clip.frames(), clip.height(), clip.width(), 3});
    const double* in = clip.data.data();
    double* op = out.data.data();
    for (size_t i = 0; i < clip.data.size(); ++i) {
        op[0] = op[1] = op[2] = in[i];
        op += 3;
    }
    return out;
}

ClipTensor scale_depth_unit_range(const ClipTensor& clip) {
    if (clip.modality != Modality::depth)
        fail_invalid("scale_depth_unit_range expects a depth clip");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t i = 0; i < clip.data.size(); ++i) {
        lo = std::min(lo, clip.data[i]);
        hi = std::max(hi, clip.data[i]);
    }
    ClipTensor out = clip;
    const double span = hi - lo;
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = span > 0.0 ? (out.data[i] - lo) / span : 0.0;
    out.range_min = 0.0;
    out.range_max = 1.0;
    return out;
}

ClipTensor crop_about_joint(const ClipTensor& clip, const SkeletonTrack& track,
                            int joint_index, int crop_size) {
    if (joint_index < 0 ||
        static_cast<size_t>(joint_index) >= track.num_joints())
        fail_invalid("joint index ", joint_index, " out of range (J=",
                     track.num_joints(), ")");
    const int h = static_cast<int>(clip.height());
    const int w = static_cast<int>(clip.width());
    if (crop_size < 1 || crop_size > std::min(h, w))
        fail_invalid("crop_size ", crop_size, " exceeds frame ", h, "x", w);
    if (track.frames() < clip.frames())
        fail_invalid("skeleton track has ", track.frames(), " frames, clip has ",
                     clip.frames());

    bool any_nonzero = false;
    for (size_t t = 0; t < clip.frames() && !any_nonzero; ++t)
        any_nonzero = track.x(t, joint_index) != 0.0 ||
                      track.y(t, joint_index) != 0.0;
    if (!any_nonzero)
        fail_invalid("degenerate skeleton track: joint ", joint_index,
                     " is zero in every frame");

    const size_t c = clip.channels();
    ClipTensor out;
    out.modality = clip.modality;
    out.range_min = clip.range_min;
    out.range_max = clip.range_max;
    out.data = Tensor({clip.frames(), static_cast<size_t>(crop_size),
                       static_cast<size_t>(crop_size), c});

    for (size_t t = 0; t < clip.frames(); ++t) {
        // Window centered on the joint's x, anchored to the frame top.
        long x0 = std::lround(track.x(t, joint_index)) - crop_size / 2;
        x0 = std::clamp<long>(x0, 0, w - crop_size);
        const long y0 = 0;
        for (int y = 0; y < crop_size; ++y) {
            const double* src =
                clip.data.data() +
                ((t * h + (y0 + y)) * w + x0) * c;
            double* dst = out.data.data() +
                          ((t * crop_size + y) * crop_size) * c;
            std::copy(src, src + static_cast<size_t>(crop_size) * c, dst);
        }
    }
    return out;
}

ClipTensor resample_frames(const ClipTensor& clip, int target_t) {
    if (target_t < 1) fail_invalid("target_t must be >= 1, got ", target_t);
    if (clip.frames() == 0) fail_invalid("cannot resample an empty clip");
    const size_t t_in = clip.frames();
    const size_t frame_sz = clip.height() * clip.width() * clip.channels();

    ClipTensor out;
    out.modality = clip.modality;
    out.range_min = clip.range_min;
    out.range_max = clip.range_max;
    out.data = Tensor({static_cast<size_t>(target_t), clip.height(),
                       clip.width(), clip.channels()});
    for (int j = 0; j < target_t; ++j) {
        size_t src;
        if (target_t == 1) {
            src = 0;
        } else {
            src = static_cast<size_t>(std::lround(
                static_cast<double>(j) * static_cast<double>(t_in - 1) /
                static_cast<double>(target_t - 1)));
        }
        std::copy(clip.data.data() + src * frame_sz,
                  clip.data.data() + (src + 1) * frame_sz,
                  out.data.data() + static_cast<size_t>(j) * frame_sz);
    }
    return out;
}

ClipTensor normalize(const ClipTensor& clip, const std::vector<double>& mean,
                     const std::vector<double>& stddev) {
    const size_t c = clip.channels();
    if (mean.size() != c || stddev.size() != c)
        fail_invalid("normalize: expected ", c, " mean/std values");
    for (double s : stddev)
        if (!(s > 0.0)) fail_invalid("normalize: std must be positive");

    ClipTensor out = clip;
    const double inv_range = 1.0 / clip.range_max;
    double* p = out.data.data();
    const size_t n = out.data.size();
    for (size_t i = 0; i < n; i += c)
        for (size_t ch = 0; ch < c; ++ch)
            p[i + ch] = (p[i + ch] * inv_range - mean[ch]) / stddev[ch];

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t ch = 0; ch < c; ++ch) {
        lo = std::min(lo, (clip.range_min * inv_range - mean[ch]) / stddev[ch]);
        hi = std::max(hi, (1.0 - mean[ch]) / stddev[ch]);
    }
    out.range_min = lo;
    out.range_max = hi;
    return out;
}

}  // namespace slr
