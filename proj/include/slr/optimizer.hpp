#pragma once

#include <cstdint>
#include <vector>

#include "slr/model.hpp"

namespace slr {

// Adam with the standard published defaults. Frozen parameters and buffers
// are skipped entirely, so their values never change.
class Adam {
public:
    struct Hyper {
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8;
    };

    explicit Adam(std::vector<ParamRef> params, Hyper hyper = Hyper{});

    // One update from the currently accumulated gradients.
    void step(double lr);
    void zero_grads();

private:
    struct Slot {
        Tensor m, v;
    };
    std::vector<ParamRef> params_;
    std::vector<Slot> slots_;
    Hyper hyper_;
    int64_t t_ = 0;
};

}  // namespace slr
