#include "core/metrics.hpp"

#include "core/common.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace srforge {

namespace {

void check_same_shape(const RasterImage& a, const RasterImage& b) {
    if (!a.same_shape(b)) {
        fail(ErrorCode::DimensionMismatch, "metric inputs must have identical shape");
    }
    if (a.value_count() == 0) {
        fail(ErrorCode::EmptyInput, "metric inputs are empty");
    }
}

// Accumulated raw moments of one weighted window. Keeping raw sums (rather
// than centered ones) makes ssim(a, a) == 1.0 and ssim(a, b) == ssim(b, a)
// hold bitwise: swapping the inputs swaps sx/sy and sxx/syy, and sxy is
// computed as w * (av * bv) so the product order never changes.
struct WindowMoments {
    double sx = 0.0, sy = 0.0;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;

    void add(double w, double av, double bv) {
        sx += w * av;
        sy += w * bv;
        sxx += w * (av * av);
        syy += w * (bv * bv);
        sxy += w * (av * bv);
    }

    double score(double c1, double c2) const {
        const double mx = sx, my = sy;
        const double vx = sxx - mx * mx;
        const double vy = syy - my * my;
        const double cov = sxy - mx * my;
        const double num = (2.0 * (mx * my) + c1) * (2.0 * cov + c2);
        const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
        return num / den;
    }
};

// 2D Gaussian window, normalized so the weights sum to 1.
std::vector<double> gaussian_window(uint32_t size, double sigma) {
    std::vector<double> w(static_cast<std::size_t>(size) * size);
    const double half = (size - 1) / 2.0;
    double total = 0.0;
    for (uint32_t y = 0; y < size; ++y) {
        for (uint32_t x = 0; x < size; ++x) {
            const double dx = x - half;
            const double dy = y - half;
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            w[static_cast<std::size_t>(y) * size + x] = v;
            total += v;
        }
    }
    for (double& v : w) v /= total;
    return w;
}

double ssim_plane_global(const RasterImage& a, const RasterImage& b, uint32_t channel,
                         const SsimParams& p) {
    WindowMoments m;
    const double w = 1.0 / (static_cast<double>(a.width()) * a.height());
    for (uint32_t y = 0; y < a.height(); ++y) {
        for (uint32_t x = 0; x < a.width(); ++x) {
            m.add(w, a.at(x, y, channel), b.at(x, y, channel));
        }
    }
    return m.score(p.c1, p.c2);
}

double ssim_plane_gaussian(const RasterImage& a, const RasterImage& b, uint32_t channel,
                           const SsimParams& p) {
    const uint32_t win = p.window_size;
    if (a.width() < win || a.height() < win) {
        // No fully interior window position exists; score the whole image.
        return ssim_plane_global(a, b, channel, p);
    }
    const std::vector<double> kernel = gaussian_window(win, p.sigma);
    const uint32_t out_h = a.height() - win + 1;
    const uint32_t out_w = a.width() - win + 1;

    // One partial sum per window row; rows are reduced in a fixed order below
    // so the result does not depend on the thread count.
    std::vector<double> row_sums(out_h, 0.0);
    parallel_for(out_h, [&](std::size_t wy) {
        double sum = 0.0;
        for (uint32_t wx = 0; wx < out_w; ++wx) {
            WindowMoments m;
            for (uint32_t ky = 0; ky < win; ++ky) {
                for (uint32_t kx = 0; kx < win; ++kx) {
                    const double w = kernel[static_cast<std::size_t>(ky) * win + kx];
                    m.add(w, a.at(wx + kx, static_cast<uint32_t>(wy) + ky, channel),
                          b.at(wx + kx, static_cast<uint32_t>(wy) + ky, channel));
                }
            }
            sum += m.score(p.c1, p.c2);
        }
        row_sums[wy] = sum;
    });

    double total = 0.0;
    for (double s : row_sums) total += s;
    return total / (static_cast<double>(out_h) * out_w);
}

} // namespace

float mse(const RasterImage& a, const RasterImage& b) {
    check_same_shape(a, b);
    const float* pa = a.data().data();
    const float* pb = b.data().data();
    const std::size_t n = a.value_count();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (static_cast<double>(pa[i]) - pb[i]) * 255.0;
        acc += d * d;
    }
    return static_cast<float>(acc / n);
}

float psnr(const RasterImage& a, const RasterImage& b) {
    const float m = mse(a, b);
    if (m == 0.0f) {
        return std::numeric_limits<float>::infinity();
    }
    return static_cast<float>(20.0 * std::log10(255.0 / std::sqrt(static_cast<double>(m))));
}

double ssim(const RasterImage& a, const RasterImage& b, const SsimParams& params) {
    check_same_shape(a, b);
    if (params.gaussian && (params.window_size % 2 == 0 || params.window_size == 0)) {
        fail(ErrorCode::InvalidArg, "ssim window size must be odd");
    }
    double total = 0.0;
    for (uint32_t c = 0; c < a.channels(); ++c) {
        total += params.gaussian ? ssim_plane_gaussian(a, b, c, params)
                                 : ssim_plane_global(a, b, c, params);
    }
    return total / a.channels();
}

} // namespace srforge
