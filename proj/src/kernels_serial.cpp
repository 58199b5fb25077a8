#include <algorithm>
#include <cstring>

#include "slr/kernels.hpp"

// Reference kernels: straight transcriptions of the definitions, one output
// element at a time. The parallel build in kernels.cpp is checked against
// these, and tools/bench_kernels times the two side by side.

namespace slr::kernels::serial {

void conv2d_forward(const double* in, int h, int w, int in_c,
                    const double* weight, const double* bias, int out_c,
                    const ConvSpec& spec, double* out) {
    const int k = spec.kernel, dil = spec.dilation, pad = spec.pad;
    const int oh = conv_out_dim(h, spec), ow = conv_out_dim(w, spec);
    for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
            for (int oc = 0; oc < out_c; ++oc) {
                double acc = bias ? bias[oc] : 0.0;
                for (int ky = 0; ky < k; ++ky) {
                    const int iy = oy - pad + ky * dil;
                    if (iy < 0 || iy >= h) continue;
                    for (int kx = 0; kx < k; ++kx) {
                        const int ix = ox - pad + kx * dil;
                        if (ix < 0 || ix >= w) continue;
                        const double* ip = in + (iy * w + ix) * in_c;
                        const double* wp =
                            weight + ((ky * k + kx) * in_c) * out_c + oc;
                        for (int ic = 0; ic < in_c; ++ic)
                            acc += ip[ic] * wp[ic * out_c];
                    }
                }
                out[(oy * ow + ox) * out_c + oc] = acc;
            }
        }
    }
}

void conv2d_backward_input(const double* dout, int oh, int ow, int out_c,
                           const double* weight, int in_c, int h, int w,
                           const ConvSpec& spec, double* din) {
    const int k = spec.kernel, dil = spec.dilation, pad = spec.pad;
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            for (int ic = 0; ic < in_c; ++ic) {
                double acc = 0.0;
                for (int ky = 0; ky < k; ++ky) {
                    const int oy = iy + pad - ky * dil;
                    if (oy < 0 || oy >= oh) continue;
                    for (int kx = 0; kx < k; ++kx) {
                        const int ox = ix + pad - kx * dil;
                        if (ox < 0 || ox >= ow) continue;
                        const double* dp = dout + (oy * ow + ox) * out_c;
                        const double* wp =
                            weight + ((ky * k + kx) * in_c + ic) * out_c;
                        for (int oc = 0; oc < out_c; ++oc)
                            acc += dp[oc] * wp[oc];
                    }
                }
                din[(iy * w + ix) * in_c + ic] = acc;
            }
        }
    }
}

void conv2d_backward_params(const double* in, int h, int w, int in_c,
                            const double* dout, int oh, int ow, int out_c,
                            const ConvSpec& spec, double* dweight,
                            double* dbias) {
    const int k = spec.kernel, dil = spec.dilation, pad = spec.pad;
    for (int ky = 0; ky < k; ++ky) {
        for (int kx = 0; kx < k; ++kx) {
            for (int ic = 0; ic < in_c; ++ic) {
                double* gw = dweight + ((ky * k + kx) * in_c + ic) * out_c;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy - pad + ky * dil;
                    if (iy < 0 || iy >= h) continue;
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox - pad + kx * dil;
                        if (ix < 0 || ix >= w) continue;
                        const double iv = in[(iy * w + ix) * in_c + ic];
                        const double* dp = dout + (oy * ow + ox) * out_c;
                        for (int oc = 0; oc < out_c; ++oc)
                            gw[oc] += iv * dp[oc];
                    }
                }
            }
        }
    }
    if (dbias) {
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                const double* dp = dout + (oy * ow + ox) * out_c;
                for (int oc = 0; oc < out_c; ++oc) dbias[oc] += dp[oc];
            }
    }
}

void maxpool2x2s2_forward(const double* in, int h, int w, int c, double* out,
                          int32_t* argmax) {
    const int oh = h / 2, ow = w / 2;
    for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
            for (int ch = 0; ch < c; ++ch) {
                double best = 0.0;
                int32_t best_idx = -1;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const int iy = 2 * oy + dy, ix = 2 * ox + dx;
                        const int32_t idx =
                            static_cast<int32_t>((iy * w + ix) * c + ch);
                        const double v = in[idx];
                        if (best_idx < 0 || v > best) {
                            best = v;
                            best_idx = idx;
                        }
                    }
                out[(oy * ow + ox) * c + ch] = best;
                if (argmax) argmax[(oy * ow + ox) * c + ch] = best_idx;
            }
        }
    }
}

void maxpool2x2s2_backward(const double* dout, int oh, int ow, int c,
                           const int32_t* argmax, int h, int w, double* din) {
    // Windows are disjoint: each input belongs to exactly one output.
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            const int oy = iy / 2, ox = ix / 2;
            for (int ch = 0; ch < c; ++ch) {
                const int32_t idx = static_cast<int32_t>((iy * w + ix) * c + ch);
                const size_t o = (static_cast<size_t>(oy) * ow + ox) * c + ch;
                din[idx] = (oy < oh && ox < ow && argmax[o] == idx) ? dout[o] : 0.0;
            }
        }
    }
}

void maxpool2x2d2_forward(const double* in, int h, int w, int c, double* out,
                          int32_t* argmax) {
    static const int offs[2] = {-1, 1};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int ch = 0; ch < c; ++ch) {
                double best = 0.0;
                int32_t best_idx = -1;
                for (int dy : offs) {
                    const int iy = y + dy;
                    if (iy < 0 || iy >= h) continue;
                    for (int dx : offs) {
                        const int ix = x + dx;
                        if (ix < 0 || ix >= w) continue;
                        const int32_t idx =
                            static_cast<int32_t>((iy * w + ix) * c + ch);
                        const double v = in[idx];
                        if (best_idx < 0 || v > best) {
                            best = v;
                            best_idx = idx;
                        }
                    }
                }
                out[(y * w + x) * c + ch] = best;
                if (argmax) argmax[(y * w + x) * c + ch] = best_idx;
            }
        }
    }
}

void maxpool2x2d2_backward(const double* dout, const int32_t* argmax, int h,
                           int w, int c, double* din) {
    static const int offs[2] = {-1, 1};
    // Gather: input (y,x) can be the argmax of up to four windows.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int ch = 0; ch < c; ++ch) {
                const int32_t idx = static_cast<int32_t>((y * w + x) * c + ch);
                double acc = 0.0;
                for (int dy : offs) {
                    const int wy = y + dy;
                    if (wy < 0 || wy >= h) continue;
                    for (int dx : offs) {
                        const int wx = x + dx;
                        if (wx < 0 || wx >= w) continue;
                        const size_t o =
                            (static_cast<size_t>(wy) * w + wx) * c + ch;
                        if (argmax[o] == idx) acc += dout[o];
                    }
                }
                din[idx] = acc;
            }
        }
    }
}

void relu_forward(const double* in, size_t n, double* out) {
    for (size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

void relu_backward(const double* dout, const double* out, size_t n,
                   double* din) {
    for (size_t i = 0; i < n; ++i) din[i] = out[i] > 0.0 ? dout[i] : 0.0;
}

void matvec(const double* m, int rows, int cols, const double* v,
            const double* bias, double* y) {
    for (int r = 0; r < rows; ++r) {
        double acc = bias ? bias[r] : 0.0;
        const double* mp = m + static_cast<size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += mp[c] * v[c];
        y[r] = acc;
    }
}

void matvec_t(const double* m, int rows, int cols, const double* v,
              double* y) {
    for (int c = 0; c < cols; ++c) {
        double acc = 0.0;
        for (int r = 0; r < rows; ++r)
            acc += m[static_cast<size_t>(r) * cols + c] * v[r];
        y[c] = acc;
    }
}

void add_outer(const double* a, int n, const double* b, int m, double* g) {
    for (int i = 0; i < n; ++i) {
        double* gp = g + static_cast<size_t>(i) * m;
        const double ai = a[i];
        for (int j = 0; j < m; ++j) gp[j] += ai * b[j];
    }
}

void global_avg_pool(const double* in, int h, int w, int c, double* out) {
    const double inv = 1.0 / (static_cast<double>(h) * w);
    for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) acc += in[(y * w + x) * c + ch];
        out[ch] = acc * inv;
    }
}

void global_avg_pool_backward(const double* dout, int h, int w, int c,
                              double* din) {
    const double inv = 1.0 / (static_cast<double>(h) * w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int ch = 0; ch < c; ++ch)
                din[(y * w + x) * c + ch] = dout[ch] * inv;
}

void bilinear_resize(const double* in, int h, int w, int c, double* out,
                     int oh, int ow) {
    const double sy = static_cast<double>(h) / oh;
    const double sx = static_cast<double>(w) / ow;
    for (int oy = 0; oy < oh; ++oy) {
        double fy = (oy + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(h - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, h - 1);
        const double wy = fy - y0;
        for (int ox = 0; ox < ow; ++ox) {
            double fx = (ox + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(w - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, w - 1);
            const double wx = fx - x0;
            const double* p00 = in + (y0 * w + x0) * c;
            const double* p01 = in + (y0 * w + x1) * c;
            const double* p10 = in + (y1 * w + x0) * c;
            const double* p11 = in + (y1 * w + x1) * c;
            double* op = out + (oy * ow + ox) * c;
            for (int ch = 0; ch < c; ++ch) {
                const double top = p00[ch] + (p01[ch] - p00[ch]) * wx;
                const double bot = p10[ch] + (p11[ch] - p10[ch]) * wx;
                op[ch] = top + (bot - top) * wy;
            }
        }
    }
}

}  // namespace slr::kernels::serial
