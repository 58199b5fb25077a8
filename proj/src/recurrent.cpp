#include "slr/recurrent.hpp"

#include <cmath>

#include "slr/common.hpp"
#include "slr/kernels.hpp"
#include "slr/layers.hpp"

namespace slr {

namespace {
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}

Lstm Lstm::make(int in_dim, int hidden) {
    Lstm l;
    l.in_dim = in_dim;
    l.hidden = hidden;
    const auto h4 = static_cast<size_t>(4 * hidden);
    l.wx = Tensor({h4, static_cast<size_t>(in_dim)});
    l.wh = Tensor({h4, static_cast<size_t>(hidden)});
    l.b = Tensor({h4});
    l.h0 = Tensor({static_cast<size_t>(hidden)});
    l.c0 = Tensor({static_cast<size_t>(hidden)});
    l.gwx = Tensor(l.wx.shape());
    l.gwh = Tensor(l.wh.shape());
    l.gb = Tensor(l.b.shape());
    return l;
}

void Lstm::init(Rng& rng, double state_std) {
    init_uniform_fanin(wx, static_cast<size_t>(in_dim), rng);
    init_uniform_fanin(wh, static_cast<size_t>(hidden), rng);
    init_uniform_fanin(b, static_cast<size_t>(hidden), rng);
    for (size_t i = 0; i < h0.size(); ++i) h0[i] = rng.normal(0.0, state_std);
    for (size_t i = 0; i < c0.size(); ++i) c0[i] = rng.normal(0.0, state_std);
}

Tensor Lstm::forward(const Tensor& xs, Cache* cache) const {
    if (xs.rank() != 2 || static_cast<int>(xs.dim(1)) != in_dim)
        fail_invalid("lstm: expected T x ", in_dim, " input");
    const size_t t_len = xs.dim(0);
    if (t_len < 1) fail_invalid("lstm: empty sequence");
    for (size_t i = 0; i < xs.size(); ++i)
        if (!std::isfinite(xs[i]))
            fail_runtime("lstm: non-finite input at flat index ", i);

    const size_t hsz = static_cast<size_t>(hidden);
    Tensor states({t_len, hsz});
    Tensor h = h0, c = c0;
    Tensor z({4 * hsz});
    Tensor zh({4 * hsz});

    if (cache) {
        cache->xs = xs;
        cache->gates.assign(t_len, Tensor());
        cache->cells.assign(t_len, Tensor());
        cache->tanh_cells.assign(t_len, Tensor());
    }

    for (size_t t = 0; t < t_len; ++t) {
        kernels::matvec(wx.data(), 4 * hidden, in_dim, xs.data() + t * in_dim,
                        b.data(), z.data());
        kernels::matvec(wh.data(), 4 * hidden, hidden, h.data(), nullptr,
                        zh.data());
        Tensor gates({4 * hsz});
        for (size_t j = 0; j < hsz; ++j) {
            const double zi = z[j] + zh[j];
            const double zf = z[hsz + j] + zh[hsz + j];
            const double zg = z[2 * hsz + j] + zh[2 * hsz + j];
            const double zo = z[3 * hsz + j] + zh[3 * hsz + j];
            gates[j] = sigmoid(zi);
            gates[hsz + j] = sigmoid(zf);
            gates[2 * hsz + j] = std::tanh(zg);
            gates[3 * hsz + j] = sigmoid(zo);
        }
        Tensor c_new({hsz}), tanh_c({hsz});
        for (size_t j = 0; j < hsz; ++j) {
            c_new[j] = gates[hsz + j] * c[j] + gates[j] * gates[2 * hsz + j];
            tanh_c[j] = std::tanh(c_new[j]);
            const double h_new = gates[3 * hsz + j] * tanh_c[j];
            states.at(t, j) = h_new;
            h[j] = h_new;
        }
        c = c_new;
        if (cache) {
            cache->gates[t] = std::move(gates);
            cache->cells[t] = c;
            cache->tanh_cells[t] = std::move(tanh_c);
        }
    }
    if (cache) cache->states = states;
    return states;
}

Tensor Lstm::backward(const Cache& cache, const Tensor& dstates) {
    const size_t t_len = cache.xs.dim(0);
    const size_t hsz = static_cast<size_t>(hidden);
    if (dstates.dim(0) != t_len || dstates.dim(1) != hsz)
        fail_invalid("lstm backward: dstates shape mismatch");

    Tensor dxs({t_len, static_cast<size_t>(in_dim)});
    Tensor dh_next({hsz}), dc_next({hsz});
    Tensor dz({4 * hsz});

    for (size_t t = t_len; t-- > 0;) {
        const Tensor& gates = cache.gates[t];
        const Tensor& tanh_c = cache.tanh_cells[t];
        const double* c_prev =
            t == 0 ? c0.data() : cache.cells[t - 1].data();
        for (size_t j = 0; j < hsz; ++j) {
            const double gi = gates[j];
            const double gf = gates[hsz + j];
            const double gg = gates[2 * hsz + j];
            const double go = gates[3 * hsz + j];
            const double dh = dstates.at(t, j) + dh_next[j];
            const double dtc = dh * go;
            const double dc = dc_next[j] + dtc * (1.0 - tanh_c[j] * tanh_c[j]);
            const double d_go = dh * tanh_c[j];
            const double d_gi = dc * gg;
            const double d_gg = dc * gi;
            const double d_gf = dc * c_prev[j];
            dz[j] = d_gi * gi * (1.0 - gi);
            dz[hsz + j] = d_gf * gf * (1.0 - gf);
            dz[2 * hsz + j] = d_gg * (1.0 - gg * gg);
            dz[3 * hsz + j] = d_go * go * (1.0 - go);
            dc_next[j] = dc * gf;
        }
        const double* x_t = cache.xs.data() + t * in_dim;
        const double* h_prev =
            t == 0 ? h0.data() : cache.states.data() + (t - 1) * hsz;
        if (trainable) {
            kernels::add_outer(dz.data(), 4 * hidden, x_t, in_dim, gwx.data());
            kernels::add_outer(dz.data(), 4 * hidden, h_prev, hidden,
                               gwh.data());
            for (size_t j = 0; j < 4 * hsz; ++j) gb[j] += dz[j];
        }
        kernels::matvec_t(wx.data(), 4 * hidden, in_dim, dz.data(),
                          dxs.data() + t * in_dim);
        kernels::matvec_t(wh.data(), 4 * hidden, hidden, dz.data(),
                          dh_next.data());
    }
    return dxs;
}

void Lstm::zero_grads() {
    gwx.zero();
    gwh.zero();
    gb.zero();
}

Tensor reverse_rows(const Tensor& m) {
    const size_t rows = m.dim(0), cols = m.dim(1);
    Tensor out({rows, cols});
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c)
            out.at(r, c) = m.at(rows - 1 - r, c);
    return out;
}

Tensor blstm_forward(const Lstm& fwd, const Lstm& bwd, const Tensor& xs,
                     Lstm::Cache* cache_fwd, Lstm::Cache* cache_bwd) {
    const size_t t_len = xs.dim(0);
    const size_t hsz = static_cast<size_t>(fwd.hidden);
    Tensor sf = fwd.forward(xs, cache_fwd);
    Tensor sb = bwd.forward(reverse_rows(xs), cache_bwd);
    Tensor states({t_len, 2 * hsz});
    for (size_t t = 0; t < t_len; ++t) {
        for (size_t j = 0; j < hsz; ++j) {
            states.at(t, j) = sf.at(t, j);
            states.at(t, hsz + j) = sb.at(t_len - 1 - t, j);
        }
    }
    return states;
}

Tensor blstm_backward(Lstm& fwd, Lstm& bwd, const Lstm::Cache& cache_fwd,
                      const Lstm::Cache& cache_bwd, const Tensor& dstates) {
    const size_t t_len = dstates.dim(0);
    const size_t hsz = static_cast<size_t>(fwd.hidden);
    Tensor dsf({t_len, hsz}), dsb({t_len, hsz});
    for (size_t t = 0; t < t_len; ++t) {
        for (size_t j = 0; j < hsz; ++j) {
            dsf.at(t, j) = dstates.at(t, j);
            dsb.at(t_len - 1 - t, j) = dstates.at(t, hsz + j);
        }
    }
    Tensor dxs = fwd.backward(cache_fwd, dsf);
    Tensor dxs_rev = bwd.backward(cache_bwd, dsb);
    for (size_t t = 0; t < t_len; ++t)
        for (size_t j = 0; j < dxs.dim(1); ++j)
            dxs.at(t, j) += dxs_rev.at(t_len - 1 - t, j);
    return dxs;
}

}  // namespace slr
