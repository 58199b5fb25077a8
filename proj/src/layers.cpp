#include "slr/layers.hpp"

#include <cmath>

#include "slr/common.hpp"

namespace slr {

void init_uniform_fanin(Tensor& t, size_t fan_in, Rng& rng) {
    const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-s, s);
}

Conv2d Conv2d::make(int in_c, int out_c, int kernel, int dilation, int pad) {
    Conv2d c;
    c.in_c = in_c;
    c.out_c = out_c;
    c.spec = {kernel, dilation, pad};
    const auto k = static_cast<size_t>(kernel);
    c.w = Tensor({k, k, static_cast<size_t>(in_c), static_cast<size_t>(out_c)});
    c.b = Tensor({static_cast<size_t>(out_c)});
    c.gw = Tensor(c.w.shape());
    c.gb = Tensor(c.b.shape());
    return c;
}

void Conv2d::init(Rng& rng) {
    init_uniform_fanin(w, static_cast<size_t>(spec.kernel) * spec.kernel * in_c,
                       rng);
    b.zero();
}

Tensor Conv2d::forward(const Tensor& x) const {
    if (x.rank() != 3 || static_cast<int>(x.dim(2)) != in_c)
        fail_invalid("conv: expected h x w x ", in_c, " input, got C=",
                     x.rank() == 3 ? static_cast<int>(x.dim(2)) : -1);
    const int h = static_cast<int>(x.dim(0)), wd = static_cast<int>(x.dim(1));
    const int oh = kernels::conv_out_dim(h, spec);
    const int ow = kernels::conv_out_dim(wd, spec);
    if (oh < 1 || ow < 1)
        fail_invalid("conv: input ", h, "x", wd, " too small for kernel");
    Tensor y({static_cast<size_t>(oh), static_cast<size_t>(ow),
              static_cast<size_t>(out_c)});
    kernels::conv2d_forward(x.data(), h, wd, in_c, w.data(), b.data(), out_c,
                            spec, y.data());
    return y;
}

Tensor Conv2d::backward(const Tensor& x, const Tensor& dy, bool want_dx) {
    const int h = static_cast<int>(x.dim(0)), wd = static_cast<int>(x.dim(1));
    const int oh = static_cast<int>(dy.dim(0)), ow = static_cast<int>(dy.dim(1));
    if (trainable)
        kernels::conv2d_backward_params(x.data(), h, wd, in_c, dy.data(), oh,
                                        ow, out_c, spec, gw.data(), gb.data());
    if (!want_dx) return {};
    Tensor dx(x.shape());
    kernels::conv2d_backward_input(dy.data(), oh, ow, out_c, w.data(), in_c, h,
                                   wd, spec, dx.data());
    return dx;
}

void Conv2d::zero_grads() {
    gw.zero();
    gb.zero();
}

Linear Linear::make(int in_dim, int out_dim) {
    Linear l;
    l.in_dim = in_dim;
    l.out_dim = out_dim;
    l.w = Tensor({static_cast<size_t>(out_dim), static_cast<size_t>(in_dim)});
    l.b = Tensor({static_cast<size_t>(out_dim)});
    l.gw = Tensor(l.w.shape());
    l.gb = Tensor(l.b.shape());
    return l;
}

void Linear::init(Rng& rng) {
    init_uniform_fanin(w, static_cast<size_t>(in_dim), rng);
    init_uniform_fanin(b, static_cast<size_t>(in_dim), rng);
}

Tensor Linear::forward(const Tensor& x) const {
    if (x.size() != static_cast<size_t>(in_dim))
        fail_invalid("linear: expected input of length ", in_dim, ", got ",
                     x.size());
    Tensor y({static_cast<size_t>(out_dim)});
    kernels::matvec(w.data(), out_dim, in_dim, x.data(), b.data(), y.data());
    return y;
}

Tensor Linear::backward(const Tensor& x, const Tensor& dy, bool want_dx) {
    if (trainable) {
        kernels::add_outer(dy.data(), out_dim, x.data(), in_dim, gw.data());
        for (int i = 0; i < out_dim; ++i) gb[i] += dy[i];
    }
    if (!want_dx) return {};
    Tensor dx({static_cast<size_t>(in_dim)});
    kernels::matvec_t(w.data(), out_dim, in_dim, dy.data(), dx.data());
    return dx;
}

void Linear::zero_grads() {
    gw.zero();
    gb.zero();
}

Tensor relu(const Tensor& x) {
    Tensor y(x.shape());
    kernels::relu_forward(x.data(), x.size(), y.data());
    return y;
}

Tensor relu_grad(const Tensor& dy, const Tensor& y) {
    Tensor dx(dy.shape());
    kernels::relu_backward(dy.data(), y.data(), dy.size(), dx.data());
    return dx;
}

Tensor global_average_pool(const Tensor& fm) {
    if (fm.rank() != 3) fail_invalid("global_average_pool expects h x w x c");
    Tensor out({fm.dim(2)});
    kernels::global_avg_pool(fm.data(), static_cast<int>(fm.dim(0)),
                             static_cast<int>(fm.dim(1)),
                             static_cast<int>(fm.dim(2)), out.data());
    return out;
}

Tensor global_average_pool_grad(const Tensor& dvec, size_t h, size_t w) {
    Tensor din({h, w, dvec.size()});
    kernels::global_avg_pool_backward(dvec.data(), static_cast<int>(h),
                                      static_cast<int>(w),
                                      static_cast<int>(dvec.size()),
                                      din.data());
    return din;
}

Tensor late_fuse(const Tensor& a, const Tensor& b) {
    if (a.size() != b.size())
        fail_invalid("late_fuse: length mismatch, ", a.size(), " vs ",
                     b.size());
    Tensor out({a.size() + b.size()});
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) out[a.size() + i] = b[i];
    return out;
}

void late_fuse_backward(const Tensor& dy, size_t split, Tensor& da,
                        Tensor& db) {
    da = Tensor({split});
    db = Tensor({dy.size() - split});
    for (size_t i = 0; i < split; ++i) da[i] = dy[i];
    for (size_t i = split; i < dy.size(); ++i) db[i - split] = dy[i];
}

Tensor Dropout::forward_train(const Tensor& x, Rng& rng, Tensor& mask) const {
    mask = Tensor(x.shape());
    if (rate <= 0.0) {
        mask.fill(1.0);
        return x;
    }
    const double keep = 1.0 - rate;
    const double scale = 1.0 / keep;
    Tensor y(x.shape());
    for (size_t i = 0; i < x.size(); ++i) {
        mask[i] = rng.uniform() < keep ? scale : 0.0;
        y[i] = x[i] * mask[i];
    }
    return y;
}

Tensor Dropout::backward(const Tensor& dy, const Tensor& mask) {
    Tensor dx(dy.shape());
    for (size_t i = 0; i < dy.size(); ++i) dx[i] = dy[i] * mask[i];
    return dx;
}

Tensor MaxPool2x2::forward(const Tensor& x, std::vector<int32_t>* argmax) {
    const size_t h = x.dim(0), w = x.dim(1), c = x.dim(2);
    if (h % 2 || w % 2) fail_invalid("maxpool 2x2/2 needs even sides");
    Tensor y({h / 2, w / 2, c});
    if (argmax) argmax->assign(y.size(), -1);
    kernels::maxpool2x2s2_forward(x.data(), static_cast<int>(h),
                                  static_cast<int>(w), static_cast<int>(c),
                                  y.data(), argmax ? argmax->data() : nullptr);
    return y;
}

Tensor MaxPool2x2::backward(const Tensor& dy, const std::vector<int32_t>& argmax,
                            size_t h, size_t w) {
    const size_t c = dy.dim(2);
    Tensor dx({h, w, c});
    kernels::maxpool2x2s2_backward(dy.data(), static_cast<int>(dy.dim(0)),
                                   static_cast<int>(dy.dim(1)),
                                   static_cast<int>(c), argmax.data(),
                                   static_cast<int>(h), static_cast<int>(w),
                                   dx.data());
    return dx;
}

Tensor MaxPoolDil2::forward(const Tensor& x, std::vector<int32_t>* argmax) {
    const size_t h = x.dim(0), w = x.dim(1), c = x.dim(2);
    Tensor y({h, w, c});
    if (argmax) argmax->assign(y.size(), -1);
    kernels::maxpool2x2d2_forward(x.data(), static_cast<int>(h),
                                  static_cast<int>(w), static_cast<int>(c),
                                  y.data(), argmax ? argmax->data() : nullptr);
    return y;
}

Tensor MaxPoolDil2::backward(const Tensor& dy,
                             const std::vector<int32_t>& argmax) {
    Tensor dx(dy.shape());
    kernels::maxpool2x2d2_backward(dy.data(), argmax.data(),
                                   static_cast<int>(dy.dim(0)),
                                   static_cast<int>(dy.dim(1)),
                                   static_cast<int>(dy.dim(2)), dx.data());
    return dx;
}

}  // namespace slr
