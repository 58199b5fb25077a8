#pragma once

#include <cstddef>
#include <cstdint>

// Low-level numeric kernels. Every kernel comes in two builds:
//
//   slr::kernels::*         OpenMP-parallel, vectorization-friendly loops.
//   slr::kernels::serial::* plain reference loops, kept for testing and as
//                           the baseline of tools/bench_kernels.
//
// Layout conventions, used everywhere in the library:
//   frames / feature maps   [h][w][c]        row-major, channel innermost
//   conv weights            [kh][kw][in_c][out_c]
//   matrices                [rows][cols]
//
// Both builds accumulate each output element in the same index order, so
// results agree to rounding (and exactly, modulo FP contraction choices the
// compiler makes per loop shape). Parallelism is only ever across output
// elements; repeated runs of either build are bit-identical.

namespace slr::kernels {

struct ConvSpec {
    int kernel = 3;    // square kernel side
    int dilation = 1;
    int pad = 0;       // symmetric zero padding
};

// Output spatial side for stride-1 convolution.
inline int conv_out_dim(int in_dim, const ConvSpec& s) {
    return in_dim + 2 * s.pad - s.dilation * (s.kernel - 1);
}

void conv2d_forward(const double* in, int h, int w, int in_c,
                    const double* weight, const double* bias, int out_c,
                    const ConvSpec& spec, double* out);

// din is fully overwritten.
void conv2d_backward_input(const double* dout, int oh, int ow, int out_c,
                           const double* weight, int in_c, int h, int w,
                           const ConvSpec& spec, double* din);

// Accumulates into dweight/dbias (callers zero them once per batch).
void conv2d_backward_params(const double* in, int h, int w, int in_c,
                            const double* dout, int oh, int ow, int out_c,
                            const ConvSpec& spec, double* dweight,
                            double* dbias);

// 2x2 window, stride 2. h and w must be even. argmax (optional, may be
// nullptr) records the flat input index feeding each output element.
void maxpool2x2s2_forward(const double* in, int h, int w, int c, double* out,
                          int32_t* argmax);
void maxpool2x2s2_backward(const double* dout, int oh, int ow, int c,
                           const int32_t* argmax, int h, int w, double* din);

// 2x2 window with dilation 2 and stride 1: taps at offsets {-1,+1} on each
// axis, out-of-bounds taps skipped, spatial size preserved.
void maxpool2x2d2_forward(const double* in, int h, int w, int c, double* out,
                          int32_t* argmax);
void maxpool2x2d2_backward(const double* dout, const int32_t* argmax, int h,
                           int w, int c, double* din);

void relu_forward(const double* in, size_t n, double* out);
// `out` is the forward output (mask is out > 0).
void relu_backward(const double* dout, const double* out, size_t n,
                   double* din);

// y = M v (+ bias if non-null), M is rows x cols.
void matvec(const double* m, int rows, int cols, const double* v,
            const double* bias, double* y);
// y = M^T v, M is rows x cols, v has length rows, y has length cols.
void matvec_t(const double* m, int rows, int cols, const double* v, double* y);
// G += a b^T, G is n x m.
void add_outer(const double* a, int n, const double* b, int m, double* g);

void global_avg_pool(const double* in, int h, int w, int c, double* out);
void global_avg_pool_backward(const double* dout, int h, int w, int c,
                              double* din);

// Bilinear with half-pixel centers: src = (dst + 0.5) * scale - 0.5,
// clamped to the frame. Identity when oh == h and ow == w.
void bilinear_resize(const double* in, int h, int w, int c, double* out,
                     int oh, int ow);

namespace serial {
void conv2d_forward(const double* in, int h, int w, int in_c,
                    const double* weight, const double* bias, int out_c,
                    const ConvSpec& spec, double* out);
void conv2d_backward_input(const double* dout, int oh, int ow, int out_c,
                           const double* weight, int in_c, int h, int w,
                           const ConvSpec& spec, double* din);
void conv2d_backward_params(const double* in, int h, int w, int in_c,
                            const double* dout, int oh, int ow, int out_c,
                            const ConvSpec& spec, double* dweight,
                            double* dbias);
void maxpool2x2s2_forward(const double* in, int h, int w, int c, double* out,
                          int32_t* argmax);
void maxpool2x2s2_backward(const double* dout, int oh, int ow, int c,
                           const int32_t* argmax, int h, int w, double* din);
void maxpool2x2d2_forward(const double* in, int h, int w, int c, double* out,
                          int32_t* argmax);
void maxpool2x2d2_backward(const double* dout, const int32_t* argmax, int h,
                           int w, int c, double* din);
void relu_forward(const double* in, size_t n, double* out);
void relu_backward(const double* dout, const double* out, size_t n,
                   double* din);
void matvec(const double* m, int rows, int cols, const double* v,
            const double* bias, double* y);
void matvec_t(const double* m, int rows, int cols, const double* v, double* y);
void add_outer(const double* a, int n, const double* b, int m, double* g);
void global_avg_pool(const double* in, int h, int w, int c, double* out);
void global_avg_pool_backward(const double* dout, int h, int w, int c,
                              double* din);
void bilinear_resize(const double* in, int h, int w, int c, double* out,
                     int oh, int ow);
}  // namespace serial

}  // namespace slr::kernels
