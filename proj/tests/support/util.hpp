#pragma once

#include "core/image.hpp"
#include "support/oracles.hpp"

#include <random>

namespace testutil {

inline oracle::Plane to_plane(const srforge::RasterImage& img) {
    oracle::Plane p = oracle::make_plane(img.width(), img.height(), img.channels());
    for (std::size_t i = 0; i < img.value_count(); ++i) {
        p.v[i] = img.data()[i];
    }
    return p;
}

inline srforge::RasterImage from_plane(const oracle::Plane& p) {
    std::vector<float> data(p.v.size());
    for (std::size_t i = 0; i < p.v.size(); ++i) {
        data[i] = static_cast<float>(p.v[i]);
    }
    return srforge::RasterImage(p.w, p.h, p.c, std::move(data));
}

inline srforge::RasterImage random_image(uint32_t w, uint32_t h, uint32_t c, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    srforge::RasterImage img(w, h, c);
    for (std::size_t i = 0; i < img.value_count(); ++i) {
        img.data()[i] = dist(rng);
    }
    return img;
}

inline std::vector<double> random_doubles(std::size_t n, uint64_t seed, double lo = -1.0,
                                          double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

} // namespace testutil
