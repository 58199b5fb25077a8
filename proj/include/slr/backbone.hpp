#pragma once

#include <string>
#include <vector>

#include "slr/layers.hpp"
#include "slr/tensor.hpp"

namespace slr {

// Convolutional stack: stages of 3x3/pad-1 conv+relu, with a 2x2/stride-2
// max pool after every stage except the last. Five stages halve the side
// four times, so a side x side frame maps to side/16 x side/16 features.
// "vgg16" is the standard 13-conv layout; "stand_in" is a small random-init
// stack with the same shape contract for desk-scale work.
struct BackboneConfig {
    std::vector<std::vector<int>> stages;

    static BackboneConfig vgg16();
    static BackboneConfig stand_in();

    int out_channels() const;
    int num_convs() const;
    int downsample() const;  // 2^(stages-1)
    void validate() const;
};

struct Backbone {
    BackboneConfig cfg;
    std::vector<Conv2d> convs;
    int first_trainable = 0;  // convs below this index are frozen

    struct Op {
        enum class Kind { conv, relu, pool } kind;
        int conv = -1;  // index into convs for Kind::conv
    };
    std::vector<Op> ops;

    // Per-frame cache; only the segment from the first trainable conv on is
    // stored (nothing below it ever needs gradients).
    struct FrameCache {
        std::vector<Tensor> conv_inputs;           // per op (sparse)
        std::vector<Tensor> relu_outputs;          // per op (sparse)
        std::vector<std::vector<int32_t>> argmax;  // per op (sparse)
        std::vector<std::pair<size_t, size_t>> pool_in_dims;
    };

    static Backbone make(const BackboneConfig& cfg, int finetune_last_k_conv);
    void init(Rng& rng);

    // frame is side x side x 3, side a multiple of 32.
    Tensor forward(const Tensor& frame, FrameCache* cache) const;

    // Accumulates gradients for the trainable tail; stops below it.
    void backward(const Tensor& dout, const FrameCache& cache);

    void zero_grads();
};

}  // namespace slr
