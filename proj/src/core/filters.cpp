#include "core/filters.hpp"

#include <cmath>
#include <cstddef>

#include "core/common.hpp"

namespace srforge {

namespace {

long clamp_coord(long v, long hi) {
    return v < 0 ? 0 : (v > hi ? hi : v);
}

void check_nonempty(const RasterImage& img, const char* op) {
    if (img.width() == 0 || img.height() == 0 || img.channels() == 0) {
        fail(ErrorCode::EmptyInput, std::string(op) + ": empty image");
    }
}

} // namespace

RasterImage sharpen(const RasterImage& img) {
    check_nonempty(img, "sharpen");
    const uint32_t w = img.width(), h = img.height(), c = img.channels();
    RasterImage out(w, h, c);
    parallel_for(h, [&](std::size_t y) {
        const long yl = static_cast<long>(y);
        for (uint32_t x = 0; x < w; ++x) {
            const long xl = static_cast<long>(x);
            const uint32_t up = static_cast<uint32_t>(clamp_coord(yl - 1, h - 1));
            const uint32_t down = static_cast<uint32_t>(clamp_coord(yl + 1, h - 1));
            const uint32_t left = static_cast<uint32_t>(clamp_coord(xl - 1, w - 1));
            const uint32_t right = static_cast<uint32_t>(clamp_coord(xl + 1, w - 1));
            for (uint32_t ch = 0; ch < c; ++ch) {
                const float v = 5.0f * img.at(x, static_cast<uint32_t>(y), ch) -
                                img.at(x, up, ch) - img.at(x, down, ch) -
                                img.at(left, static_cast<uint32_t>(y), ch) -
                                img.at(right, static_cast<uint32_t>(y), ch);
                out.at(x, static_cast<uint32_t>(y), ch) = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
            }
        }
    });
    return out;
}

RasterImage bilateral_filter(const RasterImage& img, const BilateralParams& params) {
    check_nonempty(img, "bilateral_filter");
    if (params.diameter < 3 || params.diameter % 2 == 0) {
        fail(ErrorCode::InvalidArg, "bilateral_filter: diameter must be odd and >= 3");
    }
    if (!(params.sigma_color > 0.0) || !(params.sigma_space > 0.0)) {
        fail(ErrorCode::InvalidArg, "bilateral_filter: sigmas must be positive");
    }
    const uint32_t w = img.width(), h = img.height(), c = img.channels();
    const long r = (static_cast<long>(params.diameter) - 1) / 2;
    const double inv_space = 1.0 / (2.0 * params.sigma_space * params.sigma_space);
    const double inv_color = 1.0 / (2.0 * params.sigma_color * params.sigma_color);

    // Spatial weights depend only on the offset; hoist them out of the pixel loop.
    const uint32_t d = params.diameter;
    std::vector<double> spatial(static_cast<std::size_t>(d) * d);
    for (long dy = -r; dy <= r; ++dy) {
        for (long dx = -r; dx <= r; ++dx) {
            spatial[static_cast<std::size_t>(dy + r) * d + (dx + r)] =
                std::exp(-(dx * dx + dy * dy) * inv_space);
        }
    }

    RasterImage out(w, h, c);
    parallel_for(h, [&](std::size_t y) {
        const long yl = static_cast<long>(y);
        for (uint32_t x = 0; x < w; ++x) {
            const long xl = static_cast<long>(x);
            for (uint32_t ch = 0; ch < c; ++ch) {
                const double center = img.at(x, static_cast<uint32_t>(y), ch);
                double acc = 0.0, wsum = 0.0;
                for (long dy = -r; dy <= r; ++dy) {
                    const uint32_t sy = static_cast<uint32_t>(clamp_coord(yl + dy, h - 1));
                    for (long dx = -r; dx <= r; ++dx) {
                        const uint32_t sx = static_cast<uint32_t>(clamp_coord(xl + dx, w - 1));
                        const double nv = img.at(sx, sy, ch);
                        const double diff = nv - center;
                        const double wgt =
                            spatial[static_cast<std::size_t>(dy + r) * d + (dx + r)] *
                            std::exp(-(diff * diff) * inv_color);
                        acc += wgt * nv;
                        wsum += wgt;
                    }
                }
                out.at(x, static_cast<uint32_t>(y), ch) = static_cast<float>(acc / wsum);
            }
        }
    });
    return out;
}

RasterImage nlm_denoise(const RasterImage& img, const NlmParams& params) {
    check_nonempty(img, "nlm_denoise");
    if (params.template_size % 2 == 0 || params.search_size % 2 == 0) {
        fail(ErrorCode::InvalidArg, "nlm_denoise: window sizes must be odd");
    }
    if (!(params.h > 0.0)) {
        fail(ErrorCode::InvalidArg, "nlm_denoise: h must be positive");
    }
    const uint32_t w = img.width(), hh = img.height(), c = img.channels();
    const long tr = (static_cast<long>(params.template_size) - 1) / 2;
    const long sr = (static_cast<long>(params.search_size) - 1) / 2;
    const uint32_t ts = params.template_size;
    const double inv_h2 = 1.0 / (params.h * params.h);

    // Gaussian weighting of the patch distance, normalized to sum to one.
    std::vector<double> g(static_cast<std::size_t>(ts) * ts);
    double gsum = 0.0;
    for (long py = -tr; py <= tr; ++py) {
        for (long px = -tr; px <= tr; ++px) {
            const double gv = std::exp(-(px * px + py * py) / 2.0);
            g[static_cast<std::size_t>(py + tr) * ts + (px + tr)] = gv;
            gsum += gv;
        }
    }
    for (double& gv : g) gv /= gsum;

    RasterImage out(w, hh, c);
    parallel_for(hh, [&](std::size_t y) {
        const long yl = static_cast<long>(y);
        for (uint32_t x = 0; x < w; ++x) {
            const long xl = static_cast<long>(x);
            for (uint32_t ch = 0; ch < c; ++ch) {
                double acc = 0.0, wsum = 0.0;
                for (long dy = -sr; dy <= sr; ++dy) {
                    const long cy = clamp_coord(yl + dy, hh - 1);
                    for (long dx = -sr; dx <= sr; ++dx) {
                        const long cx = clamp_coord(xl + dx, w - 1);
                        double dist2 = 0.0;
                        for (long py = -tr; py <= tr; ++py) {
                            const uint32_t ay = static_cast<uint32_t>(clamp_coord(yl + py, hh - 1));
                            const uint32_t by = static_cast<uint32_t>(clamp_coord(cy + py, hh - 1));
                            for (long px = -tr; px <= tr; ++px) {
                                const uint32_t ax =
                                    static_cast<uint32_t>(clamp_coord(xl + px, w - 1));
                                const uint32_t bx =
                                    static_cast<uint32_t>(clamp_coord(cx + px, w - 1));
                                const double dpx = static_cast<double>(img.at(ax, ay, ch)) -
                                                   img.at(bx, by, ch);
                                dist2 += g[static_cast<std::size_t>(py + tr) * ts + (px + tr)] *
                                         dpx * dpx;
                            }
                        }
                        const double wgt = std::exp(-dist2 * inv_h2);
                        acc += wgt * img.at(static_cast<uint32_t>(cx), static_cast<uint32_t>(cy), ch);
                        wsum += wgt;
                    }
                }
                out.at(x, static_cast<uint32_t>(y), ch) = static_cast<float>(acc / wsum);
            }
        }
    });
    return out;
}

const char* denoise_method_name(DenoiseMethod m) {
    switch (m) {
        case DenoiseMethod::None: return "none";
        case DenoiseMethod::Bilateral: return "bilateral";
        case DenoiseMethod::Nlm: return "nlm";
    }
    fail(ErrorCode::InvalidArg, "unknown denoise method");
}

DenoiseMethod denoise_method_from_name(const std::string& name) {
    if (name == "none") return DenoiseMethod::None;
    if (name == "bilateral") return DenoiseMethod::Bilateral;
    if (name == "nlm") return DenoiseMethod::Nlm;
    fail(ErrorCode::InvalidArg, "unknown denoise method: " + name);
}

RasterImage denoise(const RasterImage& img, const DenoiseParams& params) {
    switch (params.method) {
        case DenoiseMethod::None: return img;
        case DenoiseMethod::Bilateral: return bilateral_filter(img, params.bilateral);
        case DenoiseMethod::Nlm: return nlm_denoise(img, params.nlm);
    }
    fail(ErrorCode::InvalidArg, "unknown denoise method");
}

} // namespace srforge
