#include "slr/attention.hpp"

#include <cmath>

#include "slr/common.hpp"
#include "slr/kernels.hpp"
#include "slr/layers.hpp"

namespace slr {

Attention Attention::make(int dim) {
    Attention a;
    a.dim = dim;
    const auto d = static_cast<size_t>(dim);
    a.v = Tensor({d});
    a.w = Tensor({d, d});
    a.b = Tensor({d});
    a.gv = Tensor(a.v.shape());
    a.gw = Tensor(a.w.shape());
    a.gb = Tensor(a.b.shape());
    return a;
}

void Attention::init(Rng& rng) {
    init_uniform_fanin(w, static_cast<size_t>(dim), rng);
    init_uniform_fanin(b, static_cast<size_t>(dim), rng);
    init_uniform_fanin(v, static_cast<size_t>(dim), rng);
}

Tensor softmax_vec(const Tensor& scores) {
    const size_t n = scores.size();
    double mx = scores[0];
    for (size_t i = 1; i < n; ++i) mx = std::max(mx, scores[i]);
    Tensor out({n});
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        out[i] = std::exp(scores[i] - mx);
        sum += out[i];
    }
    for (size_t i = 0; i < n; ++i) out[i] /= sum;
    return out;
}

AttentionOutput Attention::forward(const Tensor& states, Cache* cache) const {
    if (states.rank() != 2 || static_cast<int>(states.dim(1)) != dim)
        fail_invalid("attention: expected T x ", dim, " states");
    const size_t t_len = states.dim(0);
    const size_t d = static_cast<size_t>(dim);

    Tensor u({t_len, d});
    Tensor scores({t_len});
    for (size_t t = 0; t < t_len; ++t) {
        kernels::matvec(w.data(), dim, dim, states.data() + t * d, b.data(),
                        u.data() + t * d);
        double e = 0.0;
        for (size_t j = 0; j < d; ++j) {
            u.at(t, j) = std::tanh(u.at(t, j));
            e += v[j] * u.at(t, j);
        }
        scores[t] = e;
    }

    AttentionOutput out;
    out.scores = scores;
    out.weights = softmax_vec(scores);
    out.context = Tensor({d});
    for (size_t t = 0; t < t_len; ++t) {
        const double a = out.weights[t];
        const double* h = states.data() + t * d;
        for (size_t j = 0; j < d; ++j) out.context[j] += a * h[j];
    }
    if (cache) cache->u = std::move(u);
    return out;
}

Tensor Attention::backward(const Tensor& states, const Cache& cache,
                           const AttentionOutput& out, const Tensor& dcontext) {
    const size_t t_len = states.dim(0);
    const size_t d = static_cast<size_t>(dim);

    // context = sum_t alpha_t h_t
    Tensor dalpha({t_len});
    Tensor dstates({t_len, d});
    for (size_t t = 0; t < t_len; ++t) {
        const double* h = states.data() + t * d;
        double acc = 0.0;
        for (size_t j = 0; j < d; ++j) {
            acc += dcontext[j] * h[j];
            dstates.at(t, j) = out.weights[t] * dcontext[j];
        }
        dalpha[t] = acc;
    }

    // softmax backward: de_t = alpha_t (dalpha_t - sum_k alpha_k dalpha_k)
    double dot = 0.0;
    for (size_t t = 0; t < t_len; ++t) dot += out.weights[t] * dalpha[t];
    Tensor de({t_len});
    for (size_t t = 0; t < t_len; ++t)
        de[t] = out.weights[t] * (dalpha[t] - dot);

    // e_t = v . u_t, u_t = tanh(W h_t + b)
    Tensor dz({d});
    for (size_t t = 0; t < t_len; ++t) {
        const double* u = cache.u.data() + t * d;
        const double* h = states.data() + t * d;
        for (size_t j = 0; j < d; ++j) {
            const double du = de[t] * v[j];
            dz[j] = du * (1.0 - u[j] * u[j]);
        }
        if (trainable) {
            for (size_t j = 0; j < d; ++j) {
                gv[j] += de[t] * u[j];
                gb[j] += dz[j];
            }
            kernels::add_outer(dz.data(), dim, h, dim, gw.data());
        }
        Tensor dh({d});
        kernels::matvec_t(w.data(), dim, dim, dz.data(), dh.data());
        for (size_t j = 0; j < d; ++j) dstates.at(t, j) += dh[j];
    }
    return dstates;
}

void Attention::zero_grads() {
    gv.zero();
    gw.zero();
    gb.zero();
}

}  // namespace slr
