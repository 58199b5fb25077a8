#pragma once

#include "slr/tensor.hpp"

namespace slr {

// Multi-class cross entropy on raw logits: -log softmax(logits)[true_class].
double cross_entropy(const Tensor& logits, int true_class);

// d(loss)/d(logits) = softmax(logits) - onehot(true_class).
Tensor cross_entropy_grad(const Tensor& logits, int true_class);

}  // namespace slr
