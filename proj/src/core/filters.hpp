#pragma once

#include "core/image.hpp"

namespace srforge {

// 3x3 unsharp kernel [[0,-1,0],[-1,5,-1],[0,-1,0]], clamp-to-edge sampling,
// result clamped to [0, 1].
RasterImage sharpen(const RasterImage& img);

struct BilateralParams {
    uint32_t diameter = 5;    // odd window width
    double sigma_color = 0.1; // range falloff in the [0, 1] value domain
    double sigma_space = 2.0; // spatial falloff in pixels
};

// Edge-preserving smoothing: each output pixel is a normalized average of its
// window, weighted by spatial distance and per-channel intensity difference.
RasterImage bilateral_filter(const RasterImage& img, const BilateralParams& params = {});

struct NlmParams {
    double h = 0.1;             // filtering strength; 0+ approaches identity
    uint32_t template_size = 7; // odd patch width for similarity
    uint32_t search_size = 21;  // odd search window width
};

// Non-local means: averages pixels across the search window, weighted by the
// Gaussian-weighted distance between their surrounding patches.
RasterImage nlm_denoise(const RasterImage& img, const NlmParams& params = {});

enum class DenoiseMethod { None, Bilateral, Nlm };

struct DenoiseParams {
    DenoiseMethod method = DenoiseMethod::None;
    BilateralParams bilateral;
    NlmParams nlm;
};

const char* denoise_method_name(DenoiseMethod m);
DenoiseMethod denoise_method_from_name(const std::string& name);

RasterImage denoise(const RasterImage& img, const DenoiseParams& params);

} // namespace srforge
