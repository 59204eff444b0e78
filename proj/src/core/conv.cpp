#include "core/conv.hpp"

#include "core/common.hpp"
#include "core/gemm.hpp"

#include <algorithm>
#include <vector>

namespace srforge {

namespace {

// Ceiling on the im2col scratch buffer, in values. Large inputs are processed
// in horizontal strips so inference memory stays flat regardless of image
// size.
constexpr std::size_t kColBudget = std::size_t(8) << 20;

void check_conv_args(uint32_t cin, uint32_t h, uint32_t w, uint32_t cout, uint32_t k) {
    if (cin == 0 || cout == 0 || h == 0 || w == 0) {
        fail(ErrorCode::InvalidArg, "convolution shapes must be positive");
    }
    if (k == 0 || k % 2 == 0) {
        fail(ErrorCode::InvalidArg, "convolution kernels must be odd");
    }
}

// Fills col (cin*k*k rows, (y1-y0)*w columns) with the receptive fields of
// output rows [y0, y1).
template <typename T>
void im2col_strip(const T* x, uint32_t cin, uint32_t h, uint32_t w, uint32_t k,
                  uint32_t y0, uint32_t y1, T* col) {
    const long pad = (static_cast<long>(k) - 1) / 2;
    const std::size_t strip_n = static_cast<std::size_t>(y1 - y0) * w;
    const std::size_t rows = static_cast<std::size_t>(cin) * k * k;
    parallel_for(rows, [&](std::size_t r) {
        const uint32_t kx = static_cast<uint32_t>(r % k);
        const uint32_t ky = static_cast<uint32_t>((r / k) % k);
        const uint32_t ci = static_cast<uint32_t>(r / (static_cast<std::size_t>(k) * k));
        T* dst = col + r * strip_n;
        for (uint32_t y = y0; y < y1; ++y, dst += w) {
            const long sy = static_cast<long>(y) + ky - pad;
            if (sy < 0 || sy >= static_cast<long>(h)) {
                std::fill(dst, dst + w, T(0));
                continue;
            }
            const T* src_row = x + (static_cast<std::size_t>(ci) * h + sy) * w;
            const long shift = static_cast<long>(kx) - pad; // sx = x + shift
            const long first = std::clamp<long>(-shift, 0, w);
            const long last = std::clamp<long>(static_cast<long>(w) - shift, first, w);
            std::fill(dst, dst + first, T(0));
            std::copy(src_row + first + shift, src_row + last + shift, dst + first);
            std::fill(dst + last, dst + w, T(0));
        }
    });
}

// Adjoint of im2col over the full image, written as a gather so each output
// value is produced once, by one worker, in a fixed kernel order.
template <typename T>
void col2im_gather(const T* col, uint32_t cin, uint32_t h, uint32_t w, uint32_t k, T* out) {
    const long pad = (static_cast<long>(k) - 1) / 2;
    const std::size_t n = static_cast<std::size_t>(h) * w;
    parallel_for(static_cast<std::size_t>(cin) * h, [&](std::size_t row) {
        const uint32_t ci = static_cast<uint32_t>(row / h);
        const uint32_t sy = static_cast<uint32_t>(row % h);
        T* dst = out + (static_cast<std::size_t>(ci) * h + sy) * w;
        for (uint32_t sx = 0; sx < w; ++sx) {
            T acc = T(0);
            for (uint32_t ky = 0; ky < k; ++ky) {
                const long oy = static_cast<long>(sy) - ky + pad;
                if (oy < 0 || oy >= static_cast<long>(h)) continue;
                for (uint32_t kx = 0; kx < k; ++kx) {
                    const long ox = static_cast<long>(sx) - kx + pad;
                    if (ox < 0 || ox >= static_cast<long>(w)) continue;
                    const std::size_t r = (static_cast<std::size_t>(ci) * k + ky) * k + kx;
                    acc += col[r * n + static_cast<std::size_t>(oy) * w + ox];
                }
            }
            dst[sx] = acc;
        }
    });
}

// weights [cout][cin][k][k] -> u layout [cin][cout][k][k] with the kernel
// rotated 180 degrees, and vice versa (the map is its own inverse up to the
// axis swap).
template <typename T>
void swap_and_rotate(const T* src, uint32_t outer, uint32_t inner, uint32_t k, T* dst) {
    const std::size_t kk = static_cast<std::size_t>(k) * k;
    for (uint32_t o = 0; o < outer; ++o) {
        for (uint32_t i = 0; i < inner; ++i) {
            const T* s = src + (static_cast<std::size_t>(o) * inner + i) * kk;
            T* d = dst + (static_cast<std::size_t>(i) * outer + o) * kk;
            for (std::size_t p = 0; p < kk; ++p) {
                d[kk - 1 - p] = s[p];
            }
        }
    }
}

} // namespace

template <typename T>
void conv2d_forward(const T* x, uint32_t cin, uint32_t h, uint32_t w,
                    const T* weights, const T* bias, uint32_t cout, uint32_t k, T* y) {
    check_conv_args(cin, h, w, cout, k);
    const std::size_t kcols = static_cast<std::size_t>(cin) * k * k;
    const std::size_t n = static_cast<std::size_t>(h) * w;

    const uint32_t strip_rows = static_cast<uint32_t>(
        std::clamp<std::size_t>(kColBudget / (kcols * w + 1), 1, h));
    std::vector<T> col(kcols * strip_rows * w);

    for (uint32_t y0 = 0; y0 < h; y0 += strip_rows) {
        const uint32_t y1 = std::min(y0 + strip_rows, h);
        const std::size_t strip_n = static_cast<std::size_t>(y1 - y0) * w;
        im2col_strip(x, cin, h, w, k, y0, y1, col.data());

        T* ystrip = y + static_cast<std::size_t>(y0) * w;
        if (bias) {
            for (uint32_t co = 0; co < cout; ++co) {
                std::fill(ystrip + co * n, ystrip + co * n + strip_n, bias[co]);
            }
        }
        gemm_nn<T>(cout, strip_n, kcols, weights, kcols, col.data(), strip_n, ystrip, n,
                   bias != nullptr);
    }
}

template <typename T>
void conv2d_backward(const T* x, uint32_t cin, uint32_t h, uint32_t w,
                     const T* weights, uint32_t cout, uint32_t k,
                     const T* grad_y, T* grad_x, T* grad_w, T* grad_b) {
    check_conv_args(cin, h, w, cout, k);
    const std::size_t kcols = static_cast<std::size_t>(cin) * k * k;
    const std::size_t n = static_cast<std::size_t>(h) * w;

    if (grad_b) {
        parallel_for(cout, [&](std::size_t co) {
            T acc = T(0);
            const T* g = grad_y + co * n;
            for (std::size_t i = 0; i < n; ++i) acc += g[i];
            grad_b[co] = acc;
        });
    }

    if (grad_w) {
        std::vector<T> col(kcols * n);
        im2col_strip(x, cin, h, w, k, 0, h, col.data());
        std::vector<T> col_t(n * kcols);
        transpose<T>(col.data(), kcols, n, col_t.data());
        gemm_nn<T>(cout, kcols, n, grad_y, n, col_t.data(), kcols, grad_w, kcols, false);
    }

    if (grad_x) {
        std::vector<T> w_t(kcols * cout);
        transpose<T>(weights, cout, kcols, w_t.data());
        std::vector<T> col_g(kcols * n);
        gemm_nn<T>(kcols, n, cout, w_t.data(), cout, grad_y, n, col_g.data(), n, false);
        col2im_gather<T>(col_g.data(), cin, h, w, k, grad_x);
    }
}

template <typename T>
void conv2d_transpose_forward(const T* x, uint32_t cin, uint32_t h, uint32_t w,
                              const T* u, const T* bias, uint32_t filters, uint32_t k, T* y) {
    check_conv_args(cin, h, w, filters, k);
    std::vector<T> flipped(static_cast<std::size_t>(filters) * cin * k * k);
    swap_and_rotate<T>(u, cin, filters, k, flipped.data());
    conv2d_forward<T>(x, cin, h, w, flipped.data(), bias, filters, k, y);
}

template <typename T>
void conv2d_transpose_backward(const T* x, uint32_t cin, uint32_t h, uint32_t w,
                               const T* u, uint32_t filters, uint32_t k,
                               const T* grad_y, T* grad_x, T* grad_u, T* grad_b) {
    check_conv_args(cin, h, w, filters, k);
    std::vector<T> flipped(static_cast<std::size_t>(filters) * cin * k * k);
    swap_and_rotate<T>(u, cin, filters, k, flipped.data());

    std::vector<T> grad_flipped;
    if (grad_u) grad_flipped.resize(flipped.size());
    conv2d_backward<T>(x, cin, h, w, flipped.data(), filters, k, grad_y, grad_x,
                       grad_u ? grad_flipped.data() : nullptr, grad_b);
    if (grad_u) {
        swap_and_rotate<T>(grad_flipped.data(), filters, cin, k, grad_u);
    }
}

#define SRFORGE_INSTANTIATE_CONV(T)                                                            \
    template void conv2d_forward<T>(const T*, uint32_t, uint32_t, uint32_t, const T*,          \
                                    const T*, uint32_t, uint32_t, T*);                         \
    template void conv2d_backward<T>(const T*, uint32_t, uint32_t, uint32_t, const T*,         \
                                     uint32_t, uint32_t, const T*, T*, T*, T*);                \
    template void conv2d_transpose_forward<T>(const T*, uint32_t, uint32_t, uint32_t,          \
                                              const T*, const T*, uint32_t, uint32_t, T*);     \
    template void conv2d_transpose_backward<T>(const T*, uint32_t, uint32_t, uint32_t,         \
                                               const T*, uint32_t, uint32_t, const T*, T*,     \
                                               T*, T*);

SRFORGE_INSTANTIATE_CONV(float)
SRFORGE_INSTANTIATE_CONV(double)

#undef SRFORGE_INSTANTIATE_CONV

} // namespace srforge
