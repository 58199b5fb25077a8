#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slr/common.hpp"

namespace slr {

// Dense row-major tensor of doubles, rank 1..4. Value semantics; all the
// heavy lifting happens in the kernels which work on raw pointers.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<size_t> shape) : shape_(std::move(shape)) {
        size_t n = 1;
        for (size_t d : shape_) n *= d;
        data_.assign(n, 0.0);
    }

    static Tensor zeros(std::vector<size_t> shape) {
        return Tensor(std::move(shape));
    }

    size_t rank() const { return shape_.size(); }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    size_t dim(size_t i) const { return shape_[i]; }
    const std::vector<size_t>& shape() const { return shape_; }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& operator[](size_t i) { return data_[i]; }
    double operator[](size_t i) const { return data_[i]; }

    double& at(size_t i) { return data_[i]; }
    double at(size_t i) const { return data_[i]; }
    double& at(size_t i, size_t j) { return data_[i * shape_[1] + j]; }
    double at(size_t i, size_t j) const { return data_[i * shape_[1] + j]; }
    double& at(size_t i, size_t j, size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double at(size_t i, size_t j, size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double& at(size_t i, size_t j, size_t k, size_t l) {
        return data_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
    }
    double at(size_t i, size_t j, size_t k, size_t l) const {
        return data_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
    }

    void fill(double v) { data_.assign(data_.size(), v); }

    void zero() { fill(0.0); }

    bool operator==(const Tensor& o) const {
        return shape_ == o.shape_ && data_ == o.data_;
    }

private:
    std::vector<size_t> shape_;
    std::vector<double> data_;
};

}  // namespace slr
