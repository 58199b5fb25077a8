#if defined(__GNUC__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-enum-enum-conversion"
#endif
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/videoio.hpp>
#if defined(__GNUC__)
#pragma GCC diagnostic pop
#endif

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "slr/common.hpp"
#include "slr/image_io.hpp"

namespace fs = std::filesystem;

namespace slr {

namespace {

bool has_image_ext(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), ::tolower);
    return e == ".png" || e == ".jpg" || e == ".jpeg" || e == ".bmp";
}

uint8_t to_u8(double v) {
    return static_cast<uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

}  // namespace

Image read_image_rgb(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_COLOR);
    if (m.empty()) fail_runtime("cannot decode image: ", path);
    Image img;
    img.max_value = 255.0;
    img.data = Tensor({static_cast<size_t>(m.rows), static_cast<size_t>(m.cols), 3});
    double* out = img.data.data();
    for (int y = 0; y < m.rows; ++y) {
        const uint8_t* row = m.ptr<uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            out[0] = row[3 * x + 2];  // BGR -> RGB
            out[1] = row[3 * x + 1];
            out[2] = row[3 * x + 0];
            out += 3;
        }
    }
    return img;
}

Image read_image_gray(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED);
    if (m.empty()) fail_runtime("cannot decode image: ", path);
    if (m.channels() != 1)
        m = [&] {
            cv::Mat g;
            cv::Mat ch[4];
            cv::split(m, ch);
            // Plain average; depth sources are single-channel in practice.
            g = (m.channels() >= 3) ? (ch[0] + ch[1] + ch[2]) / 3 : ch[0];
            return g;
        }();
    Image img;
    img.data = Tensor({static_cast<size_t>(m.rows), static_cast<size_t>(m.cols), 1});
    double* out = img.data.data();
    if (m.depth() == CV_16U) {
        img.max_value = 65535.0;
        for (int y = 0; y < m.rows; ++y) {
            const uint16_t* row = m.ptr<uint16_t>(y);
            for (int x = 0; x < m.cols; ++x) *out++ = row[x];
        }
    } else if (m.depth() == CV_8U) {
        img.max_value = 255.0;
        for (int y = 0; y < m.rows; ++y) {
            const uint8_t* row = m.ptr<uint8_t>(y);
            for (int x = 0; x < m.cols; ++x) *out++ = row[x];
        }
    } else {
        fail_runtime("unsupported pixel depth in ", path);
    }
    return img;
}

void write_image_rgb(const Tensor& hwc, const std::string& path) {
    if (hwc.rank() != 3 || hwc.dim(2) != 3)
        fail_invalid("write_image_rgb expects h x w x 3");
    const int h = static_cast<int>(hwc.dim(0)), w = static_cast<int>(hwc.dim(1));
    cv::Mat m(h, w, CV_8UC3);
    const double* in = hwc.data();
    for (int y = 0; y < h; ++y) {
        uint8_t* row = m.ptr<uint8_t>(y);
        for (int x = 0; x < w; ++x) {
            row[3 * x + 2] = to_u8(in[0]);
            row[3 * x + 1] = to_u8(in[1]);
            row[3 * x + 0] = to_u8(in[2]);
            in += 3;
        }
    }
    if (!cv::imwrite(path, m)) fail_runtime("cannot write image: ", path);
}

void write_image_gray(const Tensor& hw1, const std::string& path) {
    if (hw1.rank() != 3 || hw1.dim(2) != 1)
        fail_invalid("write_image_gray expects h x w x 1");
    const int h = static_cast<int>(hw1.dim(0)), w = static_cast<int>(hw1.dim(1));
    cv::Mat m(h, w, CV_8UC1);
    const double* in = hw1.data();
    for (int y = 0; y < h; ++y) {
        uint8_t* row = m.ptr<uint8_t>(y);
        for (int x = 0; x < w; ++x) row[x] = to_u8(*in++);
    }
    if (!cv::imwrite(path, m)) fail_runtime("cannot write image: ", path);
}

std::vector<std::string> list_frame_files(const std::string& dir) {
    if (!fs::is_directory(dir)) fail_runtime("not a frame directory: ", dir);
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && has_image_ext(e.path()))
            files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<Tensor> read_video_frames(const std::string& path, bool gray) {
    cv::VideoCapture cap(path);
    if (!cap.isOpened()) fail_runtime("cannot open video: ", path);
    std::vector<Tensor> frames;
    cv::Mat m;
    while (cap.read(m)) {
        const int h = m.rows, w = m.cols;
        if (gray) {
            Tensor f({static_cast<size_t>(h), static_cast<size_t>(w), 1});
            double* out = f.data();
            for (int y = 0; y < h; ++y) {
                const uint8_t* row = m.ptr<uint8_t>(y);
                for (int x = 0; x < w; ++x)
                    *out++ = (row[3 * x] + row[3 * x + 1] + row[3 * x + 2]) / 3.0;
            }
            frames.push_back(std::move(f));
        } else {
            Tensor f({static_cast<size_t>(h), static_cast<size_t>(w), 3});
            double* out = f.data();
            for (int y = 0; y < h; ++y) {
                const uint8_t* row = m.ptr<uint8_t>(y);
                for (int x = 0; x < w; ++x) {
                    out[0] = row[3 * x + 2];
                    out[1] = row[3 * x + 1];
                    out[2] = row[3 * x + 0];
                    out += 3;
                }
            }
            frames.push_back(std::move(f));
        }
    }
    if (frames.empty()) fail_runtime("video has no frames: ", path);
    return frames;
}

bool is_directory(const std::string& path) { return fs::is_directory(path); }

}  // namespace slr
