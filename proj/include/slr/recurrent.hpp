#pragma once

#include <vector>

#include "slr/rng.hpp"
#include "slr/tensor.hpp"

namespace slr {

// LSTM over a T x in_dim sequence; returns all T hidden states. Gate layout
// in the stacked 4H rows is [input, forget, cell, output]. Initial hidden
// and cell states are buffers drawn once at init and never updated.
struct Lstm {
    int in_dim = 0, hidden = 0;
    bool trainable = true;
    Tensor wx;  // [4H][in_dim]
    Tensor wh;  // [4H][hidden]
    Tensor b;   // [4H]
    Tensor h0, c0;  // [hidden]
    Tensor gwx, gwh, gb;

    struct Cache {
        Tensor xs;                       // T x in_dim
        std::vector<Tensor> gates;       // per step, [4H] post-activation
        std::vector<Tensor> cells;       // c_t
        std::vector<Tensor> tanh_cells;  // tanh(c_t)
        Tensor states;                   // T x hidden
    };

    static Lstm make(int in_dim, int hidden);
    void init(Rng& rng, double state_std);

    // Rejects non-finite inputs. cache may be nullptr for inference.
    Tensor forward(const Tensor& xs, Cache* cache) const;

    // dstates is T x hidden (gradient on every hidden state). Returns the
    // input gradient T x in_dim and accumulates parameter gradients.
    Tensor backward(const Cache& cache, const Tensor& dstates);

    void zero_grads();
};

Tensor reverse_rows(const Tensor& m);

// Bidirectional encoding: state i is [forward_i ; backward_i] where the
// backward stream runs the reversed sequence. Output is T x 2*hidden.
Tensor blstm_forward(const Lstm& fwd, const Lstm& bwd, const Tensor& xs,
                     Lstm::Cache* cache_fwd, Lstm::Cache* cache_bwd);
Tensor blstm_backward(Lstm& fwd, Lstm& bwd, const Lstm::Cache& cache_fwd,
                      const Lstm::Cache& cache_bwd, const Tensor& dstates);

}  // namespace slr
