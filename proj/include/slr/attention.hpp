#pragma once

#include "slr/rng.hpp"
#include "slr/tensor.hpp"

namespace slr {

// Temporal attention over hidden states:
//   e_i = v^T tanh(W h_i + b),  alpha = softmax(e),  context = sum_i alpha_i h_i
struct AttentionOutput {
    Tensor context;  // [d]
    Tensor weights;  // [T], nonnegative, sums to 1
    Tensor scores;   // [T], raw e_i
};

struct Attention {
    int dim = 0;
    bool trainable = true;
    Tensor v;  // [d]
    Tensor w;  // [d][d]
    Tensor b;  // [d]
    Tensor gv, gw, gb;

    struct Cache {
        Tensor u;  // T x d, tanh(W h_i + b)
    };

    static Attention make(int dim);
    void init(Rng& rng);

    AttentionOutput forward(const Tensor& states, Cache* cache) const;

    // dcontext is [d]; returns dstates T x d and accumulates parameter grads.
    Tensor backward(const Tensor& states, const Cache& cache,
                    const AttentionOutput& out, const Tensor& dcontext);

    void zero_grads();
};

// Numerically stable softmax of a vector.
Tensor softmax_vec(const Tensor& scores);

}  // namespace slr
