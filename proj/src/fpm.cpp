#include "slr/fpm.hpp"

#include "slr/common.hpp"

namespace slr {

Fpm Fpm::make(int in_c, int branch_c) {
    Fpm f;
    f.in_c = in_c;
    f.branch_c = branch_c;
    f.pool_proj = Conv2d::make(in_c, branch_c, 1, 1, 0);
    f.conv3 = Conv2d::make(in_c, branch_c, 3, 1, 1);
    f.conv3_d2 = Conv2d::make(in_c, branch_c, 3, 2, 2);
    f.conv3_d4 = Conv2d::make(in_c, branch_c, 3, 4, 4);
    return f;
}

void Fpm::init(Rng& rng) {
    pool_proj.init(rng);
    conv3.init(rng);
    conv3_d2.init(rng);
    conv3_d4.init(rng);
}

Tensor Fpm::forward(const Tensor& fm, Cache* cache) const {
    if (fm.rank() != 3 || static_cast<int>(fm.dim(2)) != in_c)
        fail_invalid("fpm: expected h x w x ", in_c, " input, got C=",
                     fm.rank() == 3 ? static_cast<int>(fm.dim(2)) : -1);
    const size_t h = fm.dim(0), w = fm.dim(1);

    std::vector<int32_t> local_argmax;
    std::vector<int32_t>* am = cache ? &cache->argmax : &local_argmax;
    Tensor pooled = MaxPoolDil2::forward(fm, am);

    Tensor a = pool_proj.forward(pooled);
    Tensor bb = conv3.forward(fm);
    Tensor cc = conv3_d2.forward(fm);
    Tensor dd = conv3_d4.forward(fm);

    const size_t f = static_cast<size_t>(branch_c);
    Tensor out({h, w, 4 * f});
    const Tensor* branches[4] = {&a, &bb, &cc, &dd};
    for (size_t y = 0; y < h; ++y)
        for (size_t x = 0; x < w; ++x) {
            double* op = out.data() + (y * w + x) * 4 * f;
            for (int br = 0; br < 4; ++br) {
                const double* bp = branches[br]->data() + (y * w + x) * f;
                for (size_t ch = 0; ch < f; ++ch) op[br * f + ch] = bp[ch];
            }
        }

    if (cache) {
        cache->input = fm;
        cache->pooled = std::move(pooled);
    }
    return out;
}

Tensor Fpm::backward(const Cache& cache, const Tensor& dy) {
    const size_t h = dy.dim(0), w = dy.dim(1);
    const size_t f = static_cast<size_t>(branch_c);
    if (dy.dim(2) != 4 * f) fail_invalid("fpm backward: channel mismatch");

    Tensor d_branch[4];
    for (auto& t : d_branch) t = Tensor({h, w, f});
    for (size_t y = 0; y < h; ++y)
        for (size_t x = 0; x < w; ++x) {
            const double* dp = dy.data() + (y * w + x) * 4 * f;
            for (int br = 0; br < 4; ++br) {
                double* bp = d_branch[br].data() + (y * w + x) * f;
                for (size_t ch = 0; ch < f; ++ch) bp[ch] = dp[br * f + ch];
            }
        }

    Tensor dpooled = pool_proj.backward(cache.pooled, d_branch[0], true);
    Tensor din = MaxPoolDil2::backward(dpooled, cache.argmax);

    Tensor d1 = conv3.backward(cache.input, d_branch[1], true);
    Tensor d2 = conv3_d2.backward(cache.input, d_branch[2], true);
    Tensor d3 = conv3_d4.backward(cache.input, d_branch[3], true);
    for (size_t i = 0; i < din.size(); ++i) din[i] += d1[i] + d2[i] + d3[i];
    return din;
}

void Fpm::zero_grads() {
    pool_proj.zero_grads();
    conv3.zero_grads();
    conv3_d2.zero_grads();
    conv3_d4.zero_grads();
}

void Fpm::set_trainable(bool t) {
    pool_proj.trainable = t;
    conv3.trainable = t;
    conv3_d2.trainable = t;
    conv3_d4.trainable = t;
}

}  // namespace slr
