#pragma once

#include <string>
#include <vector>

#include "slr/model.hpp"

namespace slr {

// Per-frame spatial saliency, upsampled to frame resolution, in [0, 1].
struct SaliencyClip {
    Tensor maps;  // T x H x W
    std::string source_layer;
};

FeatureLayer feature_layer_from_name(const std::string& name);
const char* feature_layer_name(FeatureLayer layer);

// Gradient-weighted class activation map on the RGB branch: per frame, the
// channel mean of (positive global-average gradient x activation), rectified
// and max-normalized across the clip. Targets the raw logit of
// target_class, so only that logit's gradient path contributes.
SaliencyClip gradcam_map(Model& model, const ClipTensor& rgb,
                         const ClipTensor* depth, int target_class,
                         FeatureLayer layer);

}  // namespace slr
