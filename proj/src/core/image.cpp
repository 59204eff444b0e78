#include "core/image.hpp"

#include <algorithm>
#include <cmath>

namespace srforge {

namespace {

void check_channels(uint32_t channels) {
    if (channels != 1 && channels != 3)
        fail(ErrorCode::ChannelMismatch,
             "channel count must be 1 or 3, got " + std::to_string(channels));
}

inline float clamp01(float v) { return std::min(1.0f, std::max(0.0f, v)); }

} // namespace

RasterImage::RasterImage(uint32_t width, uint32_t height, uint32_t channels)
    : width_(width), height_(height), channels_(channels) {
    check_channels(channels);
    if (width == 0 || height == 0)
        fail(ErrorCode::InvalidArg, "image dimensions must be positive");
    data_.assign(value_count(), 0.0f);
}

RasterImage::RasterImage(uint32_t width, uint32_t height, uint32_t channels,
                         std::vector<float> data)
    : width_(width), height_(height), channels_(channels),
      data_(std::move(data)) {
    check_channels(channels);
    if (width == 0 || height == 0)
        fail(ErrorCode::InvalidArg, "image dimensions must be positive");
    if (data_.size() != value_count())
        fail(ErrorCode::ShapeMismatch,
             "data length " + std::to_string(data_.size()) +
                 " does not match " + std::to_string(value_count()));
}

void RasterImage::clamp_values() {
    for (float& v : data_) v = clamp01(v);
}

YCbCrImage rgb_to_ycbcr(const RasterImage& img) {
    if (img.channels() != 3)
        fail(ErrorCode::ChannelMismatch, "rgb_to_ycbcr requires a 3-channel image");
    YCbCrImage out{
        RasterImage(img.width(), img.height(), 1),
        RasterImage(img.width(), img.height(), 1),
        RasterImage(img.width(), img.height(), 1),
    };
    const float* src = img.data().data();
    float* y = out.y.data().data();
    float* cb = out.cb.data().data();
    float* cr = out.cr.data().data();
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        float r = src[i * 3 + 0];
        float g = src[i * 3 + 1];
        float b = src[i * 3 + 2];
        y[i] = clamp01(0.299f * r + 0.587f * g + 0.114f * b);
        cb[i] = clamp01(0.5f - 0.168736f * r - 0.331264f * g + 0.5f * b);
        cr[i] = clamp01(0.5f + 0.5f * r - 0.418688f * g - 0.081312f * b);
    }
    return out;
}

RasterImage ycbcr_to_rgb(const YCbCrImage& img) {
    if (!img.y.same_shape(img.cb) || !img.y.same_shape(img.cr))
        fail(ErrorCode::DimensionMismatch, "YCbCr planes differ in size");
    if (img.y.channels() != 1)
        fail(ErrorCode::ChannelMismatch, "YCbCr planes must be single-channel");
    RasterImage out(img.y.width(), img.y.height(), 3);
    const float* y = img.y.data().data();
    const float* cb = img.cb.data().data();
    const float* cr = img.cr.data().data();
    float* dst = out.data().data();
    const std::size_t n = out.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        float yy = y[i];
        float dcb = cb[i] - 0.5f;
        float dcr = cr[i] - 0.5f;
        dst[i * 3 + 0] = clamp01(yy + 1.402f * dcr);
        dst[i * 3 + 1] = clamp01(yy - 0.344136f * dcb - 0.714136f * dcr);
        dst[i * 3 + 2] = clamp01(yy + 1.772f * dcb);
    }
    return out;
}

RasterImage merge_planes(const RasterImage& a, const RasterImage& b,
                         const RasterImage& c) {
    if (!a.same_shape(b) || !a.same_shape(c))
        fail(ErrorCode::DimensionMismatch, "planes differ in size");
    if (a.channels() != 1)
        fail(ErrorCode::ChannelMismatch, "merge_planes expects single-channel planes");
    RasterImage out(a.width(), a.height(), 3);
    const std::size_t n = out.pixel_count();
    float* dst = out.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        dst[i * 3 + 0] = a.data()[i];
        dst[i * 3 + 1] = b.data()[i];
        dst[i * 3 + 2] = c.data()[i];
    }
    return out;
}

RasterImage extract_channel(const RasterImage& img, uint32_t channel) {
    if (channel >= img.channels())
        fail(ErrorCode::InvalidArg, "channel index out of range");
    RasterImage out(img.width(), img.height(), 1);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i)
        out.data()[i] = img.data()[i * img.channels() + channel];
    return out;
}

RasterImage crop(const RasterImage& img, uint32_t x0, uint32_t y0, uint32_t w,
                 uint32_t h) {
    if (x0 + w > img.width() || y0 + h > img.height())
        fail(ErrorCode::InvalidArg, "crop rectangle out of bounds");
    RasterImage out(w, h, img.channels());
    const uint32_t c = img.channels();
    for (uint32_t y = 0; y < h; ++y) {
        const float* src = &img.data()[((static_cast<std::size_t>(y0) + y) * img.width() + x0) * c];
        float* dst = &out.data()[static_cast<std::size_t>(y) * w * c];
        std::copy(src, src + static_cast<std::size_t>(w) * c, dst);
    }
    return out;
}

std::vector<PatchPair> extract_patches(const RasterImage& lr,
                                       const RasterImage& hr,
                                       uint32_t size, uint32_t stride) {
    if (!lr.same_shape(hr))
        fail(ErrorCode::DimensionMismatch,
             "LR and HR images must have identical dimensions");
    if (stride == 0) fail(ErrorCode::InvalidArg, "stride must be positive");
    if (size == 0 || size > lr.width() || size > lr.height())
        fail(ErrorCode::InvalidArg,
             "patch size exceeds image dimensions");

    std::vector<PatchPair> out;
    const uint32_t ny = (lr.height() - size) / stride + 1;
    const uint32_t nx = (lr.width() - size) / stride + 1;
    out.reserve(static_cast<std::size_t>(ny) * nx);
    for (uint32_t py = 0; py < ny; ++py) {
        for (uint32_t px = 0; px < nx; ++px) {
            out.push_back(PatchPair{
                crop(lr, px * stride, py * stride, size, size),
                crop(hr, px * stride, py * stride, size, size),
            });
        }
    }
    return out;
}

} // namespace srforge
