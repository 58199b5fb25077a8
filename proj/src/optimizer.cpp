#include "slr/optimizer.hpp"

#include <cmath>

namespace slr {

Adam::Adam(std::vector<ParamRef> params, Hyper hyper)
    : params_(std::move(params)), hyper_(hyper) {
    slots_.reserve(params_.size());
    for (const auto& p : params_) {
        Slot s;
        if (p.trainable && p.grad) {
            s.m = Tensor(p.value->shape());
            s.v = Tensor(p.value->shape());
        }
        slots_.push_back(std::move(s));
    }
}

void Adam::step(double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(hyper_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(hyper_.beta2, static_cast<double>(t_));
    for (size_t i = 0; i < params_.size(); ++i) {
        const auto& p = params_[i];
        if (!p.trainable || !p.grad) continue;
        Slot& s = slots_[i];
        double* w = p.value->data();
        const double* g = p.grad->data();
        double* m = s.m.data();
        double* v = s.v.data();
        const size_t n = p.value->size();
        for (size_t j = 0; j < n; ++j) {
            m[j] = hyper_.beta1 * m[j] + (1.0 - hyper_.beta1) * g[j];
            v[j] = hyper_.beta2 * v[j] + (1.0 - hyper_.beta2) * g[j] * g[j];
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            w[j] -= lr * mhat / (std::sqrt(vhat) + hyper_.eps);
        }
    }
}

void Adam::zero_grads() {
    for (const auto& p : params_)
        if (p.grad) p.grad->zero();
}

}  // namespace slr
