#pragma once

#include <cstdint>

namespace srforge {

// Single-item spatial convolutions, stride 1, zero padding chosen so the
// output keeps the input's spatial size. Kernels must be odd. Layouts:
//   x, y:      [channels][h][w]
//   weights:   [out_channels][in_channels][k][k]   (forward convolution)
//   u:         [in_channels][filters][k][k]        (transposed convolution)
//   bias:      [out_channels], may be null
//
// All reductions run in a fixed order; outputs are bit-stable across thread
// counts.

template <typename T>
void conv2d_forward(const T* x, uint32_t cin, uint32_t h, uint32_t w,
                    const T* weights, const T* bias, uint32_t cout, uint32_t k, T* y);

// grad_x, grad_w, grad_b may individually be null to skip that output.
template <typename T>
void conv2d_backward(const T* x, uint32_t cin, uint32_t h, uint32_t w,
                     const T* weights, uint32_t cout, uint32_t k,
                     const T* grad_y, T* grad_x, T* grad_w, T* grad_b);

// Transposed convolution at stride 1 equals a forward convolution with the
// kernel rotated half a turn and the channel axes swapped; both directions
// below reuse the machinery above through that rewrite.
template <typename T>
void conv2d_transpose_forward(const T* x, uint32_t cin, uint32_t h, uint32_t w,
                              const T* u, const T* bias, uint32_t filters, uint32_t k, T* y);

template <typename T>
void conv2d_transpose_backward(const T* x, uint32_t cin, uint32_t h, uint32_t w,
                               const T* u, uint32_t filters, uint32_t k,
                               const T* grad_y, T* grad_x, T* grad_u, T* grad_b);

} // namespace srforge
