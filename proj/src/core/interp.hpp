#pragma once

#include "core/image.hpp"

namespace srforge {

enum class ScaleMethod { Nearest, Bilinear, Bicubic };

const char* scale_method_name(ScaleMethod m);
ScaleMethod scale_method_from_name(const std::string& name);

// Output dimension rule shared by every scaling entry point.
uint32_t scaled_dim(uint32_t dim, double factor);

// Resamples to explicit target dimensions. Coordinates map with half-pixel
// centers (src = (dst + 0.5) / scale - 0.5), edges clamp, output values are
// clamped to [0, 1]. Each channel is resampled independently.
RasterImage resample(const RasterImage& img, uint32_t out_w, uint32_t out_h,
                     ScaleMethod method);

// Resamples by a positive factor; output dims = max(1, round(dim * factor)).
RasterImage scale(const RasterImage& img, double factor, ScaleMethod method);

// Downscales by `down` (0 < down < 1) and upscales back to the original
// dimensions with the same method.
RasterImage degrade(const RasterImage& img, double down, ScaleMethod method);

} // namespace srforge
