#include "core/interp.hpp"

#include <algorithm>
#include <cmath>

namespace srforge {

namespace {

// Catmull-Rom family cubic, a = -0.5.
double cubic_weight(double x) {
    constexpr double a = -0.5;
    x = std::fabs(x);
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

inline int clamp_index(long i, long n) {
    return static_cast<int>(std::min(n - 1, std::max(0L, i)));
}

inline float clamp01(double v) {
    return static_cast<float>(std::min(1.0, std::max(0.0, v)));
}

} // namespace

const char* scale_method_name(ScaleMethod m) {
    switch (m) {
        case ScaleMethod::Nearest: return "nearest";
        case ScaleMethod::Bilinear: return "bilinear";
        case ScaleMethod::Bicubic: return "bicubic";
    }
    return "?";
}

ScaleMethod scale_method_from_name(const std::string& name) {
    if (name == "nearest") return ScaleMethod::Nearest;
    if (name == "bilinear") return ScaleMethod::Bilinear;
    if (name == "bicubic") return ScaleMethod::Bicubic;
    fail(ErrorCode::InvalidArg, "unknown scale method: " + name);
}

uint32_t scaled_dim(uint32_t dim, double factor) {
    if (factor <= 0.0) fail(ErrorCode::InvalidArg, "scale factor must be positive");
    long out = std::lround(static_cast<double>(dim) * factor);
    return static_cast<uint32_t>(std::max(1L, out));
}

RasterImage resample(const RasterImage& img, uint32_t out_w, uint32_t out_h,
                     ScaleMethod method) {
    if (out_w == 0 || out_h == 0)
        fail(ErrorCode::InvalidArg, "output dimensions must be positive");
    const long in_w = img.width();
    const long in_h = img.height();
    const uint32_t ch = img.channels();
    const double sx = static_cast<double>(out_w) / in_w;
    const double sy = static_cast<double>(out_h) / in_h;

    RasterImage out(out_w, out_h, ch);
    const float* src = img.data().data();
    float* dst = out.data().data();

    auto sample_row = [&](std::size_t oy) {
        const double fy = (static_cast<double>(oy) + 0.5) / sy - 0.5;
        float* drow = dst + oy * out_w * ch;
        for (uint32_t ox = 0; ox < out_w; ++ox) {
            const double fx = (static_cast<double>(ox) + 0.5) / sx - 0.5;
            for (uint32_t c = 0; c < ch; ++c) {
                double value = 0.0;
                switch (method) {
                    case ScaleMethod::Nearest: {
                        int ix = clamp_index(static_cast<long>(std::floor(fx + 0.5)), in_w);
                        int iy = clamp_index(static_cast<long>(std::floor(fy + 0.5)), in_h);
                        value = src[(static_cast<std::size_t>(iy) * in_w + ix) * ch + c];
                        break;
                    }
                    case ScaleMethod::Bilinear: {
                        long x0 = static_cast<long>(std::floor(fx));
                        long y0 = static_cast<long>(std::floor(fy));
                        double tx = fx - x0;
                        double ty = fy - y0;
                        int xs[2] = {clamp_index(x0, in_w), clamp_index(x0 + 1, in_w)};
                        int ys[2] = {clamp_index(y0, in_h), clamp_index(y0 + 1, in_h)};
                        double wx[2] = {1.0 - tx, tx};
                        double wy[2] = {1.0 - ty, ty};
                        for (int j = 0; j < 2; ++j)
                            for (int i = 0; i < 2; ++i)
                                value += wy[j] * wx[i] *
                                         src[(static_cast<std::size_t>(ys[j]) * in_w + xs[i]) * ch + c];
                        break;
                    }
                    case ScaleMethod::Bicubic: {
                        long x0 = static_cast<long>(std::floor(fx));
                        long y0 = static_cast<long>(std::floor(fy));
                        double tx = fx - x0;
                        double ty = fy - y0;
                        int xs[4], ys[4];
                        double wx[4], wy[4];
                        double wx_sum = 0.0, wy_sum = 0.0;
                        for (int i = 0; i < 4; ++i) {
                            xs[i] = clamp_index(x0 - 1 + i, in_w);
                            ys[i] = clamp_index(y0 - 1 + i, in_h);
                            wx[i] = cubic_weight(tx - (i - 1));
                            wy[i] = cubic_weight(ty - (i - 1));
                            wx_sum += wx[i];
                            wy_sum += wy[i];
                        }
                        for (int j = 0; j < 4; ++j) {
                            double row = 0.0;
                            for (int i = 0; i < 4; ++i)
                                row += wx[i] *
                                       src[(static_cast<std::size_t>(ys[j]) * in_w + xs[i]) * ch + c];
                            value += wy[j] * row;
                        }
                        value /= wx_sum * wy_sum;
                        break;
                    }
                }
                drow[static_cast<std::size_t>(ox) * ch + c] = clamp01(value);
            }
        }
    };

    parallel_for(out_h, sample_row);
    return out;
}

RasterImage scale(const RasterImage& img, double factor, ScaleMethod method) {
    if (factor <= 0.0) fail(ErrorCode::InvalidArg, "scale factor must be positive");
    return resample(img, scaled_dim(img.width(), factor),
                    scaled_dim(img.height(), factor), method);
}

RasterImage degrade(const RasterImage& img, double down, ScaleMethod method) {
    if (down <= 0.0 || down >= 1.0)
        fail(ErrorCode::InvalidArg, "degradation factor must be in (0, 1)");
    RasterImage small = scale(img, down, method);
    return resample(small, img.width(), img.height(), method);
}

} // namespace srforge
