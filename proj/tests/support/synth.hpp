#pragma once

// Deterministic cartoon-style test images: flat color regions bounded by
// darker outlines over a soft background gradient, anti-aliased by 2x
// supersampling. The statistics (large flat areas, strong clean edges) mimic
// hand-drawn cel artwork without shipping binary fixtures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "core/image.hpp"

namespace synth {

namespace detail {

struct Color {
    double r = 0.0, g = 0.0, b = 0.0;
};

struct Shape {
    bool circle = true;
    double cx = 0.0, cy = 0.0; // center in pixel coordinates
    double rx = 1.0, ry = 1.0; // radius / half extent
    Color fill;
    Color outline;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

inline Color random_color(std::mt19937_64& rng) {
    return Color{uniform(rng, 0.12, 0.95), uniform(rng, 0.12, 0.95), uniform(rng, 0.12, 0.95)};
}

inline Color darker(const Color& c) {
    return Color{c.r * 0.3, c.g * 0.3, c.b * 0.3};
}

// Signed offset from the shape edge: negative inside, positive outside.
inline double edge_distance(const Shape& s, double x, double y) {
    if (s.circle) {
        const double dx = (x - s.cx) / s.rx;
        const double dy = (y - s.cy) / s.ry;
        return (std::sqrt(dx * dx + dy * dy) - 1.0) * std::min(s.rx, s.ry);
    }
    const double dx = std::abs(x - s.cx) - s.rx;
    const double dy = std::abs(y - s.cy) - s.ry;
    return std::max(dx, dy);
}

} // namespace detail

inline srforge::RasterImage cel_image(uint64_t seed, uint32_t w, uint32_t h) {
    using namespace detail;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 12345);

    const Color bg_top = random_color(rng);
    const Color bg_bottom = random_color(rng);
    const int shape_count = 3 + static_cast<int>(rng() % 3);
    std::vector<Shape> shapes;
    for (int i = 0; i < shape_count; ++i) {
        Shape s;
        s.circle = (rng() % 2) == 0;
        s.cx = uniform(rng, 0.1, 0.9) * w;
        s.cy = uniform(rng, 0.1, 0.9) * h;
        s.rx = uniform(rng, 0.08, 0.28) * w;
        s.ry = uniform(rng, 0.08, 0.28) * h;
        s.fill = random_color(rng);
        s.outline = darker(s.fill);
        shapes.push_back(s);
    }
    const double outline_px = 1.6;

    const auto shade = [&](double x, double y) {
        const double t = y / h;
        Color c{bg_top.r + (bg_bottom.r - bg_top.r) * t, bg_top.g + (bg_bottom.g - bg_top.g) * t,
                bg_top.b + (bg_bottom.b - bg_top.b) * t};
        for (const Shape& s : shapes) {
            const double d = edge_distance(s, x, y);
            if (d <= -outline_px) {
                c = s.fill;
            } else if (d <= 0.0) {
                c = s.outline;
            }
        }
        return c;
    };

    srforge::RasterImage img(w, h, 3);
    for (uint32_t y = 0; y < h; ++y) {
        for (uint32_t x = 0; x < w; ++x) {
            Color acc;
            // 2x2 supersampling softens edges by roughly a pixel.
            for (int sy = 0; sy < 2; ++sy) {
                for (int sx = 0; sx < 2; ++sx) {
                    const Color c = shade(x + 0.25 + 0.5 * sx, y + 0.25 + 0.5 * sy);
                    acc.r += c.r;
                    acc.g += c.g;
                    acc.b += c.b;
                }
            }
            img.at(x, y, 0) = static_cast<float>(std::clamp(acc.r / 4.0, 0.0, 1.0));
            img.at(x, y, 1) = static_cast<float>(std::clamp(acc.g / 4.0, 0.0, 1.0));
            img.at(x, y, 2) = static_cast<float>(std::clamp(acc.b / 4.0, 0.0, 1.0));
        }
    }
    return img;
}

// n images with lightly varied even dimensions around base x base pixels.
inline std::vector<srforge::RasterImage> cel_corpus(uint64_t seed, std::size_t n, uint32_t base,
                                                    uint32_t jitter) {
    std::vector<srforge::RasterImage> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const uint32_t w = base + 2 * ((seed + i * 7) % (jitter + 1));
        const uint32_t h = base + 2 * ((seed + i * 13) % (jitter + 1));
        out.push_back(cel_image(seed + 1000 + i, w, h));
    }
    return out;
}

} // namespace synth
