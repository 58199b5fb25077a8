#pragma once

#include <string>
#include <vector>

#include "slr/tensor.hpp"

namespace slr {

// Thin wrapper over the OpenCV codecs. Values come back as doubles in
// [0, max_value]; RGB channel order (OpenCV's BGR is swapped on the way in
// and out).
struct Image {
    Tensor data;  // h x w x c
    double max_value = 255.0;
};

Image read_image_rgb(const std::string& path);
Image read_image_gray(const std::string& path);  // 16-bit sources keep depth

// Expects values in [0, 255]; rounds and clamps.
void write_image_rgb(const Tensor& hwc, const std::string& path);
void write_image_gray(const Tensor& hw1, const std::string& path);

// Image files in `dir`, sorted by name (frames use zero-padded names, so
// lexicographic order is temporal order).
std::vector<std::string> list_frame_files(const std::string& dir);

// Decodes a video file into frames (RGB or single-channel gray).
std::vector<Tensor> read_video_frames(const std::string& path, bool gray);

bool is_directory(const std::string& path);

}  // namespace slr
