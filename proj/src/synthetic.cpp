#include "slr/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "slr/common.hpp"
#include "slr/image_io.hpp"
#include "slr/rng.hpp"

namespace fs = std::filesystem;

namespace slr {

namespace {

constexpr int kNumBackgrounds = 4;

struct Rgb {
    double r, g, b;
};

const Rgb kHandColors[] = {
    {230, 60, 60},  {60, 180, 75},  {65, 105, 225}, {240, 160, 30},
    {170, 60, 200}, {40, 200, 200}, {210, 90, 150}, {150, 160, 40},
};

const Rgb kBackgroundBase[kNumBackgrounds] = {
    {190, 195, 205},
    {150, 170, 150},
    {205, 185, 160},
    {120, 130, 160},
};

struct Disc {
    double cx, cy, radius;
    Rgb color;
    double depth;  // 0..255, larger = closer
};

struct EllipseShape {
    double cx, cy, rx, ry;
    Rgb color;
    double depth;
};

double disc_coverage(double px, double py, const Disc& d) {
    const double dist = std::hypot(px - d.cx, py - d.cy);
    return std::clamp(d.radius - dist + 0.5, 0.0, 1.0);
}

double ellipse_coverage(double px, double py, const EllipseShape& e) {
    const double nx = (px - e.cx) / e.rx, ny = (py - e.cy) / e.ry;
    const double f = std::sqrt(nx * nx + ny * ny);
    const double d = (f - 1.0) * std::min(e.rx, e.ry);
    return std::clamp(0.5 - d, 0.0, 1.0);
}

void blend(double* px, const Rgb& c, double a) {
    px[0] += (c.r - px[0]) * a;
    px[1] += (c.g - px[1]) * a;
    px[2] += (c.b - px[2]) * a;
}

std::string two_digits(int v) {
    std::string s = std::to_string(v);
    return s.size() < 2 ? "0" + s : s;
}

std::string three_digits(int v) {
    std::string s = std::to_string(v);
    while (s.size() < 3) s = "0" + s;
    return s;
}

std::string frame_name(int t) {
    std::string s = std::to_string(t);
    while (s.size() < 6) s = "0" + s;
    return s + ".png";
}

}  // namespace

void SyntheticCorpusConfig::validate() const {
    if (num_signs < 1 || num_signers < 1 || samples_per_signer_per_sign < 1)
        fail_invalid("synthetic corpus counts must be >= 1");
    if (frame_size < 16) fail_invalid("frame_size must be >= 16");
    if (frames_min < 2 || frames_min > frames_max)
        fail_invalid("need 2 <= frames_min <= frames_max");
}

int trajectory_shape(int sign_id) { return sign_id / 2; }

int trajectory_repetitions(int sign_id) { return 1 + sign_id % 2; }

void loop_point(int shape, double u, double& x, double& y) {
    u -= std::floor(u);
    switch (shape) {
        case 0:
            x = std::cos(2.0 * M_PI * u);
            y = std::sin(2.0 * M_PI * u);
            return;
        case 1:
            x = std::cos(2.0 * M_PI * u);
            y = 0.45 * std::sin(2.0 * M_PI * u);
            return;
        case 2:
            x = 0.45 * std::cos(2.0 * M_PI * u);
            y = std::sin(2.0 * M_PI * u);
            return;
        case 3:
        case 4: {
            // Piecewise-linear loops: diamond, then square.
            static const double diamond[4][2] = {
                {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            static const double square[4][2] = {
                {0.85, 0.85}, {-0.85, 0.85}, {-0.85, -0.85}, {0.85, -0.85}};
            const auto& v = shape == 3 ? diamond : square;
            const double s = 4.0 * u;
            const int seg = std::min(3, static_cast<int>(s));
            const double f = s - seg;
            x = (1.0 - f) * v[seg][0] + f * v[(seg + 1) % 4][0];
            y = (1.0 - f) * v[seg][1] + f * v[(seg + 1) % 4][1];
            return;
        }
        default: {
            // Ellipses rotated by a shape-dependent angle.
            const double a = 0.6 * (shape - 4);
            const double ex = std::cos(2.0 * M_PI * u);
            const double ey = 0.55 * std::sin(2.0 * M_PI * u);
            x = ex * std::cos(a) - ey * std::sin(a);
            y = ex * std::sin(a) + ey * std::cos(a);
            return;
        }
    }
}

Tensor gesture_trajectory(int sign_id, int num_frames, double center_x,
                          double center_y, double radius, double phase) {
    if (num_frames < 2) fail_invalid("trajectory needs >= 2 frames");
    const int shape = trajectory_shape(sign_id);
    const int reps = trajectory_repetitions(sign_id);
    Tensor traj({static_cast<size_t>(num_frames), 2});
    for (int t = 0; t < num_frames; ++t) {
        const double u =
            phase + static_cast<double>(reps) * t / (num_frames - 1);
        double x, y;
        loop_point(shape, u, x, y);
        traj.at(t, 0) = center_x + radius * x;
        traj.at(t, 1) = center_y + radius * y;
    }
    return traj;
}

Manifest generate_synthetic_corpus(const SyntheticCorpusConfig& config,
                                   const std::string& out_dir) {
    config.validate();
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "samples", ec);
    if (ec) fail_runtime("cannot create output directory ", out_dir, ": ",
                         ec.message());

    const int side = config.frame_size;
    Manifest manifest;
    manifest.base_dir = out_dir;
    manifest.num_signs = config.num_signs;
    for (int s = 0; s < config.num_signs; ++s)
        manifest.sign_names.push_back("sign_" + three_digits(s));

    Rng root(static_cast<uint64_t>(config.seed));

    for (int signer = 0; signer < config.num_signers; ++signer) {
        for (int sign = 0; sign < config.num_signs; ++sign) {
            for (int take = 0; take < config.samples_per_signer_per_sign;
                 ++take) {
                const std::string id = "signer" + two_digits(signer) + "_sign" +
                                       three_digits(sign) + "_t" +
                                       two_digits(take);
                Rng rng = root.substream(id);

                const int num_frames =
                    config.frames_min +
                    static_cast<int>(rng.uniform_index(
                        config.frames_max - config.frames_min + 1));
                const int bg =
                    static_cast<int>(rng.uniform_index(kNumBackgrounds));

                // Signer-specific appearance plus a little per-take jitter.
                const Rgb hand = kHandColors[signer % 8];
                const double hand_radius =
                    side * (0.055 + 0.012 * (signer % 3));
                const double cx = side * 0.5 + side * 0.01 * ((signer * 37) % 11 - 5) +
                                  rng.uniform(-2.0, 2.0);
                const double cy = side * 0.42 + side * 0.01 * ((signer * 53) % 9 - 4) +
                                  rng.uniform(-2.0, 2.0);
                const double radius = side * (0.24 + 0.015 * (signer % 4));
                const double phase = rng.uniform(0.0, 0.05);

                Tensor traj = gesture_trajectory(sign, num_frames, cx, cy,
                                                 radius, phase);

                const fs::path sample_dir = fs::path(out_dir) / "samples" / id;
                fs::create_directories(sample_dir / "rgb", ec);
                fs::create_directories(sample_dir / "depth", ec);
                if (ec)
                    fail_runtime("cannot create sample directory ",
                                 sample_dir.string(), ": ", ec.message());

                const EllipseShape body{side * 0.5, side * 0.82, side * 0.24,
                                        side * 0.26, {70, 80, 110}, 130};
                const Disc head{side * 0.5, side * 0.47, side * 0.085,
                                {220, 190, 165}, 140};

                for (int t = 0; t < num_frames; ++t) {
                    Tensor rgb({static_cast<size_t>(side),
                                static_cast<size_t>(side), 3});
                    Tensor depth({static_cast<size_t>(side),
                                  static_cast<size_t>(side), 1});
                    const Disc handd{traj.at(t, 0), traj.at(t, 1), hand_radius,
                                     hand, 230};
                    for (int y = 0; y < side; ++y) {
                        for (int x = 0; x < side; ++x) {
                            double* px = rgb.data() + (y * side + x) * 3;
                            const Rgb& base = kBackgroundBase[bg];
                            const double grad =
                                (bg % 2 ? x : y) * 30.0 / side - 15.0;
                            px[0] = base.r + grad;
                            px[1] = base.g + grad;
                            px[2] = base.b + grad;
                            // One background block to break uniformity.
                            if (x > side * (0.1 + 0.15 * bg) &&
                                x < side * (0.25 + 0.15 * bg) && y < side / 3) {
                                px[0] -= 25;
                                px[1] -= 15;
                                px[2] -= 5;
                            }
                            double d = 40.0;
                            double a = ellipse_coverage(x, y, body);
                            if (a > 0) {
                                blend(px, body.color, a);
                                d = std::max(d, body.depth * a);
                            }
                            a = disc_coverage(x, y, head);
                            if (a > 0) {
                                blend(px, head.color, a);
                                d = std::max(d, head.depth * a);
                            }
                            a = disc_coverage(x, y, handd);
                            if (a > 0) {
                                blend(px, handd.color, a);
                                d = std::max(d, handd.depth * a);
                            }
                            depth.at(y, x, 0) = d;
                        }
                    }
                    write_image_rgb(rgb, (sample_dir / "rgb" / frame_name(t)).string());
                    write_image_gray(depth,
                                     (sample_dir / "depth" / frame_name(t)).string());
                }

                {
                    std::ofstream sk(sample_dir / "skeleton.csv");
                    if (!sk)
                        fail_runtime("cannot write skeleton for ", id);
                    sk << "frame,joint,x,y\n";
                    for (int t = 0; t < num_frames; ++t) {
                        sk << t << ",0," << traj.at(t, 0) << ',' << traj.at(t, 1)
                           << "\n";
                        sk << t << ",1," << head.cx << ',' << head.cy << "\n";
                        sk << t << ",2," << body.cx << ',' << body.cy << "\n";
                    }
                }

                SampleRecord rec;
                rec.sample_id = id;
                rec.signer_id = "signer" + two_digits(signer);
                rec.sign_id = sign;
                rec.background_id = "bg" + two_digits(bg);
                rec.rgb_path = "samples/" + id + "/rgb";
                rec.depth_path = "samples/" + id + "/depth";
                rec.skeleton_path = "samples/" + id + "/skeleton.csv";
                rec.num_frames = num_frames;
                manifest.records.push_back(std::move(rec));
            }
        }
    }

    save_manifest(manifest, (fs::path(out_dir) / "manifest.csv").string());
    manifest.validate();
    return manifest;
}

SyntheticCorpusConfig synthetic_config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_runtime("cannot open synthetic config: ", path);
    nlohmann::json j = nlohmann::json::parse(in);
    SyntheticCorpusConfig c;
    c.num_signs = j.value("num_signs", c.num_signs);
    c.num_signers = j.value("num_signers", c.num_signers);
    c.samples_per_signer_per_sign =
        j.value("samples_per_signer_per_sign", c.samples_per_signer_per_sign);
    c.frame_size = j.value("frame_size", c.frame_size);
    c.frames_min = j.value("frames_min", c.frames_min);
    c.frames_max = j.value("frames_max", c.frames_max);
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

}  // namespace slr
