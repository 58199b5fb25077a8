#include "slr/backbone.hpp"

#include <algorithm>

#include "slr/common.hpp"

namespace slr {

BackboneConfig BackboneConfig::vgg16() {
    return {{{64, 64},
             {128, 128},
             {256, 256, 256},
             {512, 512, 512},
             {512, 512, 512}}};
}

BackboneConfig BackboneConfig::stand_in() {
    return {{{8}, {16}, {32}, {32}, {32}}};
}

int BackboneConfig::out_channels() const { return stages.back().back(); }

int BackboneConfig::num_convs() const {
    int n = 0;
    for (const auto& s : stages) n += static_cast<int>(s.size());
    return n;
}

int BackboneConfig::downsample() const {
    return 1 << (static_cast<int>(stages.size()) - 1);
}

void BackboneConfig::validate() const {
    if (stages.empty()) fail_invalid("backbone: no stages");
    for (const auto& s : stages) {
        if (s.empty()) fail_invalid("backbone: empty stage");
        for (int c : s)
            if (c < 1) fail_invalid("backbone: channel counts must be >= 1");
    }
}

Backbone Backbone::make(const BackboneConfig& cfg, int finetune_last_k_conv) {
    cfg.validate();
    Backbone bb;
    bb.cfg = cfg;
    const int n_convs = cfg.num_convs();
    bb.first_trainable =
        std::max(0, n_convs - std::max(0, finetune_last_k_conv));

    int in_c = 3;
    for (size_t si = 0; si < cfg.stages.size(); ++si) {
        for (int out_c : cfg.stages[si]) {
            const int ci = static_cast<int>(bb.convs.size());
            bb.convs.push_back(Conv2d::make(in_c, out_c, 3, 1, 1));
            bb.convs.back().trainable = ci >= bb.first_trainable;
            bb.ops.push_back({Op::Kind::conv, ci});
            bb.ops.push_back({Op::Kind::relu, -1});
            in_c = out_c;
        }
        if (si + 1 < cfg.stages.size()) bb.ops.push_back({Op::Kind::pool, -1});
    }
    return bb;
}

void Backbone::init(Rng& rng) {
    for (auto& c : convs) c.init(rng);
}

Tensor Backbone::forward(const Tensor& frame, FrameCache* cache) const {
    if (frame.rank() != 3 || frame.dim(2) != 3)
        fail_invalid("backbone: expected side x side x 3 input");
    const size_t side = frame.dim(0);
    if (frame.dim(1) != side) fail_invalid("backbone: frame must be square");
    if (side % 32 != 0)
        fail_invalid("backbone: side must be a multiple of 32, got ", side);

    // Ops from here on need their inputs kept for the backward pass.
    int cache_from = static_cast<int>(ops.size());
    for (size_t i = 0; i < ops.size(); ++i)
        if (ops[i].kind == Op::Kind::conv && ops[i].conv == first_trainable) {
            cache_from = static_cast<int>(i);
            break;
        }
    if (cache) {
        cache->conv_inputs.assign(ops.size(), Tensor());
        cache->relu_outputs.assign(ops.size(), Tensor());
        cache->argmax.assign(ops.size(), {});
        cache->pool_in_dims.assign(ops.size(), {0, 0});
    }

    Tensor cur = frame;
    for (size_t i = 0; i < ops.size(); ++i) {
        const bool keep = cache && static_cast<int>(i) >= cache_from;
        switch (ops[i].kind) {
            case Op::Kind::conv: {
                if (keep) cache->conv_inputs[i] = cur;
                cur = convs[ops[i].conv].forward(cur);
                break;
            }
            case Op::Kind::relu: {
                cur = relu(cur);
                if (keep) cache->relu_outputs[i] = cur;
                break;
            }
            case Op::Kind::pool: {
                if (keep) cache->pool_in_dims[i] = {cur.dim(0), cur.dim(1)};
                cur = MaxPool2x2::forward(cur, keep ? &cache->argmax[i] : nullptr);
                break;
            }
        }
    }
    return cur;
}

void Backbone::backward(const Tensor& dout, const FrameCache& cache) {
    Tensor dy = dout;
    for (size_t i = ops.size(); i-- > 0;) {
        switch (ops[i].kind) {
            case Op::Kind::conv: {
                Conv2d& c = convs[ops[i].conv];
                if (!c.trainable) return;  // frozen region below
                const bool want_dx = ops[i].conv > first_trainable;
                Tensor dx = c.backward(cache.conv_inputs[i], dy, want_dx);
                if (!want_dx) return;
                dy = std::move(dx);
                break;
            }
            case Op::Kind::relu: {
                if (cache.relu_outputs[i].empty()) return;
                dy = relu_grad(dy, cache.relu_outputs[i]);
                break;
            }
            case Op::Kind::pool: {
                if (cache.argmax[i].empty()) return;
                dy = MaxPool2x2::backward(dy, cache.argmax[i],
                                          cache.pool_in_dims[i].first,
                                          cache.pool_in_dims[i].second);
                break;
            }
        }
    }
}

void Backbone::zero_grads() {
    for (auto& c : convs) c.zero_grads();
}

}  // namespace slr
