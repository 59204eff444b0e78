#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/interp.hpp"
#include "support/util.hpp"

#include <cmath>

using namespace srforge;

namespace {

const double kFactors[] = {0.25, 1.0 / 3.0, 0.5, 1.0, 2.0, 3.0, 4.0};
const ScaleMethod kMethods[] = {ScaleMethod::Nearest, ScaleMethod::Bilinear,
                                ScaleMethod::Bicubic};

RasterImage constant_image(uint32_t w, uint32_t h, uint32_t c, float value) {
    RasterImage img(w, h, c);
    for (std::size_t i = 0; i < img.value_count(); ++i) img.data()[i] = value;
    return img;
}

} // namespace

TEST_CASE("output dimensions round half up and never collapse to zero") {
    CHECK(scaled_dim(4, 2.0) == 8);
    CHECK(scaled_dim(5, 0.5) == 3);  // 2.5 rounds up
    CHECK(scaled_dim(4, 0.5) == 2);
    CHECK(scaled_dim(10, 1.0 / 3.0) == 3);
    CHECK(scaled_dim(1, 0.25) == 1);
    CHECK(scaled_dim(2, 0.1) == 1);
    CHECK(scaled_dim(7, 1.5) == 11); // 10.5 rounds up
    CHECK_THROWS_AS(scale(RasterImage(4, 4, 1), 0.0, ScaleMethod::Nearest), Error);
    CHECK_THROWS_AS(scale(RasterImage(4, 4, 1), -2.0, ScaleMethod::Nearest), Error);
}

TEST_CASE("constant images stay constant under every method and factor") {
    const RasterImage img = constant_image(12, 12, 3, 0.47f);
    for (ScaleMethod m : kMethods) {
        for (double f : kFactors) {
            const RasterImage out = scale(img, f, m);
            CHECK(out.width() == scaled_dim(12, f));
            CHECK(out.height() == scaled_dim(12, f));
            for (std::size_t i = 0; i < out.value_count(); ++i) {
                CHECK(out.data()[i] == doctest::Approx(0.47f).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("factor one is the identity") {
    const RasterImage img = testutil::random_image(15, 9, 3, 42);
    for (ScaleMethod m : kMethods) {
        const RasterImage out = scale(img, 1.0, m);
        REQUIRE(out.same_shape(img));
        for (std::size_t i = 0; i < img.value_count(); ++i) {
            CHECK(out.data()[i] == img.data()[i]); // bit-exact, stronger than the 1e-6 contract
        }
    }
}

TEST_CASE("nearest neighbor upscaling replicates blocks exactly") {
    const RasterImage img = testutil::random_image(6, 5, 1, 7);
    for (uint32_t k : {2u, 3u, 4u}) {
        const RasterImage out = scale(img, static_cast<double>(k), ScaleMethod::Nearest);
        REQUIRE(out.width() == 6 * k);
        REQUIRE(out.height() == 5 * k);
        for (uint32_t y = 0; y < out.height(); ++y) {
            for (uint32_t x = 0; x < out.width(); ++x) {
                CHECK(out.at(x, y, 0) == img.at(x / k, y / k, 0));
            }
        }
    }
}

TEST_CASE("bicubic reproduces linear ramps away from the border") {
    const uint32_t w = 24, h = 8;
    RasterImage ramp(w, h, 1);
    for (uint32_t y = 0; y < h; ++y) {
        for (uint32_t x = 0; x < w; ++x) {
            ramp.at(x, y, 0) = static_cast<float>(x) / (w - 1);
        }
    }
    const RasterImage out = scale(ramp, 2.0, ScaleMethod::Bicubic);
    REQUIRE(out.width() == 2 * w);
    // Columns whose 4-tap support is fully interior must land on the ramp.
    for (uint32_t x = 3; x + 6 < out.width(); ++x) {
        const double src = (x + 0.5) / 2.0 - 0.5;
        const double expected = src / (w - 1);
        CHECK(out.at(x, 4, 0) == doctest::Approx(expected).epsilon(1e-5));
    }
}

TEST_CASE("bilinear agrees with the gather-form reference") {
    for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const uint32_t w = 5 + seed * 3, h = 4 + seed * 2;
        const RasterImage img = testutil::random_image(w, h, 3, seed);
        for (double f : {0.5, 1.7, 2.0, 3.0}) {
            const RasterImage out = scale(img, f, ScaleMethod::Bilinear);
            const oracle::Plane ref =
                oracle::resample_bilinear(testutil::to_plane(img), out.width(), out.height());
            for (std::size_t i = 0; i < out.value_count(); ++i) {
                CHECK(out.data()[i] == doctest::Approx(ref.v[i]).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("nearest agrees with the reference at fractional factors") {
    const RasterImage img = testutil::random_image(11, 7, 1, 99);
    for (double f : {0.4, 0.75, 1.3, 2.6}) {
        const RasterImage out = scale(img, f, ScaleMethod::Nearest);
        const oracle::Plane ref =
            oracle::resample_nearest(testutil::to_plane(img), out.width(), out.height());
        for (std::size_t i = 0; i < out.value_count(); ++i) {
            CHECK(out.data()[i] == static_cast<float>(ref.v[i]));
        }
    }
}

TEST_CASE("resample hits arbitrary target dimensions") {
    const RasterImage img = testutil::random_image(10, 10, 3, 5);
    const RasterImage out = resample(img, 7, 13, ScaleMethod::Bilinear);
    CHECK(out.width() == 7);
    CHECK(out.height() == 13);
    const oracle::Plane ref = oracle::resample_bilinear(testutil::to_plane(img), 7, 13);
    for (std::size_t i = 0; i < out.value_count(); ++i) {
        CHECK(out.data()[i] == doctest::Approx(ref.v[i]).epsilon(1e-6));
    }
    CHECK_THROWS_AS(resample(img, 0, 13, ScaleMethod::Bilinear), Error);
}

TEST_CASE("degradation keeps the original dimensions") {
    const RasterImage img = testutil::random_image(25, 17, 3, 1234);
    for (ScaleMethod m : kMethods) {
        for (double down : {0.5, 0.25, 1.0 / 3.0}) {
            const RasterImage out = degrade(img, down, m);
            CHECK(out.width() == img.width());
            CHECK(out.height() == img.height());
        }
    }
    CHECK_THROWS_AS(degrade(img, 1.0, ScaleMethod::Bilinear), Error);
    CHECK_THROWS_AS(degrade(img, 0.0, ScaleMethod::Bilinear), Error);
    CHECK_THROWS_AS(degrade(img, 2.0, ScaleMethod::Bilinear), Error);
}

TEST_CASE("degradation composes scale-down with resample-back bitwise") {
    const RasterImage img = testutil::random_image(30, 22, 3, 88);
    for (ScaleMethod m : kMethods) {
        const RasterImage lowered = scale(img, 0.5, m);
        const RasterImage manual = resample(lowered, img.width(), img.height(), m);
        const RasterImage direct = degrade(img, 0.5, m);
        REQUIRE(direct.same_shape(manual));
        for (std::size_t i = 0; i < manual.value_count(); ++i) {
            CHECK(direct.data()[i] == manual.data()[i]);
        }
    }
}

TEST_CASE("downscale then upscale loses detail but preserves range") {
    const RasterImage img = testutil::random_image(32, 32, 1, 55);
    const RasterImage out = degrade(img, 0.5, ScaleMethod::Bicubic);
    for (std::size_t i = 0; i < out.value_count(); ++i) {
        CHECK(out.data()[i] >= 0.0f);
        CHECK(out.data()[i] <= 1.0f);
    }
}

TEST_CASE("method names round trip") {
    for (ScaleMethod m : kMethods) {
        CHECK(scale_method_from_name(scale_method_name(m)) == m);
    }
    CHECK_THROWS_AS(scale_method_from_name("lanczos"), Error);
}
