#pragma once

#include <cstdint>
#include <vector>

#include "slr/kernels.hpp"
#include "slr/rng.hpp"
#include "slr/tensor.hpp"

namespace slr {

// Dense-layer init used across the library: uniform(-s, s), s = 1/sqrt(fan_in).
void init_uniform_fanin(Tensor& t, size_t fan_in, Rng& rng);

// 2D convolution over h x w x c frames, stride 1. Gradients accumulate into
// gw/gb until zero_grads(); frozen layers skip the accumulation entirely.
struct Conv2d {
    int in_c = 0, out_c = 0;
    kernels::ConvSpec spec;
    bool trainable = true;
    Tensor w;  // [k][k][in_c][out_c]
    Tensor b;  // [out_c]
    Tensor gw, gb;

    static Conv2d make(int in_c, int out_c, int kernel, int dilation, int pad);
    void init(Rng& rng);
    Tensor forward(const Tensor& x) const;
    // x is the forward input; returns dx when want_dx (else an empty tensor).
    Tensor backward(const Tensor& x, const Tensor& dy, bool want_dx);
    void zero_grads();
};

struct Linear {
    int in_dim = 0, out_dim = 0;
    bool trainable = true;
    Tensor w;  // [out][in]
    Tensor b;  // [out]
    Tensor gw, gb;

    static Linear make(int in_dim, int out_dim);
    void init(Rng& rng);
    Tensor forward(const Tensor& x) const;
    Tensor backward(const Tensor& x, const Tensor& dy, bool want_dx);
    void zero_grads();
};

Tensor relu(const Tensor& x);
// y is the forward output.
Tensor relu_grad(const Tensor& dy, const Tensor& y);

// h x w x c -> [c]
Tensor global_average_pool(const Tensor& fm);
Tensor global_average_pool_grad(const Tensor& dvec, size_t h, size_t w);

// Concatenation, first argument first.
Tensor late_fuse(const Tensor& a, const Tensor& b);
void late_fuse_backward(const Tensor& dy, size_t split, Tensor& da, Tensor& db);

// Inverted dropout: mask elements are 0 or 1/(1-rate); eval is the identity.
struct Dropout {
    double rate = 0.0;
    Tensor forward_train(const Tensor& x, Rng& rng, Tensor& mask) const;
    static Tensor backward(const Tensor& dy, const Tensor& mask);
};

struct MaxPool2x2 {  // stride 2, downsampling
    static Tensor forward(const Tensor& x, std::vector<int32_t>* argmax);
    static Tensor backward(const Tensor& dy, const std::vector<int32_t>& argmax,
                           size_t h, size_t w);
};

struct MaxPoolDil2 {  // 2x2 window, dilation 2, stride 1, size-preserving
    static Tensor forward(const Tensor& x, std::vector<int32_t>* argmax);
    static Tensor backward(const Tensor& dy, const std::vector<int32_t>& argmax);
};

}  // namespace slr
