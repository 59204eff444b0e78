#pragma once

#include <string>

#include "core/image.hpp"

namespace srforge {

// Loads a PNG, PPM (P6) or JPEG file. The format is detected from the file's
// magic bytes. u8 samples map to f32 as v / 255.
RasterImage load_image(const std::string& path);

// Saves as PNG or PPM depending on the file extension. f32 values map to u8
// as round(clamp01(v) * 255). JPEG output is not supported.
void save_image(const RasterImage& img, const std::string& path);

} // namespace srforge
