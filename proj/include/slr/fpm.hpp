#pragma once

#include <vector>

#include "slr/layers.hpp"
#include "slr/tensor.hpp"

namespace slr {

// Feature pooling module: four parallel branches over one feature map,
// concatenated along channels with spatial size preserved.
//   (a) 2x2 max pool, dilation 2, stride 1 -> 1x1 conv
//   (b) 3x3 conv
//   (c) 3x3 conv, dilation 2
//   (d) 3x3 conv, dilation 4
// Each branch emits branch_channels planes, so the output has
// 4 * branch_channels channels (512 in x 128 -> 512 out at default sizes).
struct Fpm {
    int in_c = 0, branch_c = 0;
    Conv2d pool_proj;  // 1x1 on pooled input
    Conv2d conv3;      // 3x3, pad 1
    Conv2d conv3_d2;   // 3x3, dilation 2, pad 2
    Conv2d conv3_d4;   // 3x3, dilation 4, pad 4

    struct Cache {
        Tensor input;
        Tensor pooled;
        std::vector<int32_t> argmax;
    };

    static Fpm make(int in_c, int branch_c);
    void init(Rng& rng);

    int out_channels() const { return 4 * branch_c; }

    Tensor forward(const Tensor& fm, Cache* cache) const;
    // Returns gradient on the input feature map.
    Tensor backward(const Cache& cache, const Tensor& dy);
    void zero_grads();
    void set_trainable(bool t);
};

}  // namespace slr
