#pragma once

#include <cstdint>
#include <vector>

#include "core/common.hpp"

namespace srforge {

// H x W x C pixel grid, row-major, f32 values in [0, 1]. Channels are
// interleaved (RGBRGB...) for 3-channel images.
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(uint32_t width, uint32_t height, uint32_t channels);
    RasterImage(uint32_t width, uint32_t height, uint32_t channels,
                std::vector<float> data);

    uint32_t width() const { return width_; }
    uint32_t height() const { return height_; }
    uint32_t channels() const { return channels_; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width_) * height_;
    }
    std::size_t value_count() const { return pixel_count() * channels_; }

    float at(uint32_t x, uint32_t y, uint32_t c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    float& at(uint32_t x, uint32_t y, uint32_t c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    // Clamps every value into [0, 1].
    void clamp_values();

    bool same_shape(const RasterImage& other) const {
        return width_ == other.width_ && height_ == other.height_ &&
               channels_ == other.channels_;
    }

private:
    uint32_t width_ = 0;
    uint32_t height_ = 0;
    uint32_t channels_ = 0;
    std::vector<float> data_;
};

// Luma/chroma planes of equal size. Chroma is offset by +0.5 so neutral
// chroma sits at 0.5 in the [0, 1] domain.
struct YCbCrImage {
    RasterImage y;
    RasterImage cb;
    RasterImage cr;
};

struct PatchPair {
    RasterImage lr;
    RasterImage hr;
};

// Full-range (JPEG-convention) BT.601 conversion, clamped to [0, 1].
YCbCrImage rgb_to_ycbcr(const RasterImage& img);
RasterImage ycbcr_to_rgb(const YCbCrImage& img);

// Merges three single-channel planes into one 3-channel image.
RasterImage merge_planes(const RasterImage& a, const RasterImage& b,
                         const RasterImage& c);

// Extracts a single channel as a 1-channel image.
RasterImage extract_channel(const RasterImage& img, uint32_t channel);

// Co-located square patches from an aligned LR/HR pair. Patch grid origin is
// the top-left corner; residual borders that do not fit are discarded.
std::vector<PatchPair> extract_patches(const RasterImage& lr,
                                       const RasterImage& hr,
                                       uint32_t size, uint32_t stride);

RasterImage crop(const RasterImage& img, uint32_t x0, uint32_t y0,
                 uint32_t w, uint32_t h);

} // namespace srforge
