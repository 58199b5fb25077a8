#pragma once

#include <string>
#include <vector>

#include "slr/gradcam.hpp"
#include "slr/model.hpp"

namespace slr {

// Attention weights of a forward pass plus the frames considered attended:
// weight at or above the uniform level 1/T (always at least the argmax).
struct AttentionTimeline {
    Tensor weights;              // T
    std::vector<bool> attended;  // T
};

AttentionTimeline attention_timeline(Model& model, const ClipTensor& rgb,
                                     const ClipTensor* depth);

// Writes overlay_%06d.png (saliency alpha-blended over the raw frames) and,
// when a timeline is given, timeline.png (weight-vs-frame bars with attended
// frames boxed in red). File contents depend only on the inputs.
void render_overlay(const ClipTensor& raw_rgb, const SaliencyClip& saliency,
                    const AttentionTimeline* timeline,
                    const std::string& out_dir);

}  // namespace slr
