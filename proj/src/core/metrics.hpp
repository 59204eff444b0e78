#pragma once

#include "core/image.hpp"

namespace srforge {

// SSIM stabilizers and window. Values live in the normalized [0, 1] domain:
// with L = 255 the usual constants become c1 = (0.01*L)^2 / L^2 = 1e-4 and
// c2 = (0.03*L)^2 / L^2 = 9e-4.
struct SsimParams {
    double c1 = 1e-4;
    double c2 = 9e-4;
    bool gaussian = true; // false: single global window over the whole image
    uint32_t window_size = 11;
    double sigma = 1.5;
};

// Mean squared error in the 0-255 domain (values are rescaled by 255 before
// squaring), averaged over all pixels and channels.
float mse(const RasterImage& a, const RasterImage& b);

// 20*log10(255/sqrt(MSE)); +infinity when MSE == 0.
float psnr(const RasterImage& a, const RasterImage& b);

double ssim(const RasterImage& a, const RasterImage& b,
            const SsimParams& params = {});

struct MetricValue {
    float mse = 0.0f;
    float psnr = 0.0f;
    float ssim = 0.0f;
};

} // namespace srforge
