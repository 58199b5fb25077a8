#include "slr/loss.hpp"

#include <cmath>

#include "slr/common.hpp"

namespace slr {

namespace {
void check_class(const Tensor& logits, int true_class) {
    if (true_class < 0 || static_cast<size_t>(true_class) >= logits.size())
        fail_invalid("true_class ", true_class, " outside [0, ", logits.size(),
                     ")");
}
}

double cross_entropy(const Tensor& logits, int true_class) {
    check_class(logits, true_class);
    double mx = logits[0];
    for (size_t i = 1; i < logits.size(); ++i) mx = std::max(mx, logits[i]);
    double sum = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) sum += std::exp(logits[i] - mx);
    return std::log(sum) - (logits[true_class] - mx);
}

Tensor cross_entropy_grad(const Tensor& logits, int true_class) {
    check_class(logits, true_class);
    double mx = logits[0];
    for (size_t i = 1; i < logits.size(); ++i) mx = std::max(mx, logits[i]);
    Tensor g(logits.shape());
    double sum = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        g[i] = std::exp(logits[i] - mx);
        sum += g[i];
    }
    for (size_t i = 0; i < logits.size(); ++i) g[i] /= sum;
    g[true_class] -= 1.0;
    return g;
}

}  // namespace slr
