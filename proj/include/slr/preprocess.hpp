#pragma once

#include <string>
#include <vector>

#include "slr/manifest.hpp"
#include "slr/tensor.hpp"

namespace slr {

enum class Modality { rgb, depth };

// A decoded video clip: T x H x W x C with a declared value range.
// Depth clips are single-channel until replicate_depth_channels.
struct ClipTensor {
    Tensor data;  // t x h x w x c
    Modality modality = Modality::rgb;
    double range_min = 0.0;
    double range_max = 255.0;

    size_t frames() const { return data.dim(0); }
    size_t height() const { return data.dim(1); }
    size_t width() const { return data.dim(2); }
    size_t channels() const { return data.dim(3); }
};

// Pixel coordinates of tracked joints, T x J x 2 as (x, y).
struct SkeletonTrack {
    Tensor joints;

    size_t frames() const { return joints.dim(0); }
    size_t num_joints() const { return joints.dim(1); }
    double x(size_t t, size_t j) const { return joints.at(t, j, 0); }
    double y(size_t t, size_t j) const { return joints.at(t, j, 1); }
};

// CSV rows `frame,joint,x,y` (header optional). Frames/joints must form a
// dense grid starting at 0.
SkeletonTrack load_skeleton_csv(const std::string& path);

// Decodes a frame directory (sorted image files) or a single video file.
// Paths in `record` are resolved against `base_dir` when relative.
ClipTensor decode_clip(const SampleRecord& record, Modality modality,
                       const std::string& base_dir = "");

// Bilinear square resize of every frame.
ClipTensor resize_frames(const ClipTensor& clip, int side);

// Copies the single depth channel into three identical channels.
ClipTensor replicate_depth_channels(const ClipTensor& clip);

// Min-max scales a depth clip into [0, 1] (flat clips map to 0).
ClipTensor scale_depth_unit_range(const ClipTensor& clip);

// Square crop: horizontally centered on the chosen joint's x coordinate,
// vertically anchored to the top of the frame, clamped to image bounds.
ClipTensor crop_about_joint(const ClipTensor& clip, const SkeletonTrack& track,
                            int joint_index, int crop_size);

// Uniform index resampling to target_t frames:
//   out[j] = in[round(j * (T-1) / (target_t-1))]   (target_t > 1)
// target_t == 1 keeps frame 0.
ClipTensor resample_frames(const ClipTensor& clip, int target_t);

// out = (in / range_max - mean[c]) / std[c], declared range updated.
ClipTensor normalize(const ClipTensor& clip, const std::vector<double>& mean,
                     const std::vector<double>& stddev);

}  // namespace slr
