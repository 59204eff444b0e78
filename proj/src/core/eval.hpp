#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/checkpoint.hpp"
#include "core/image.hpp"

namespace srforge {

struct EvalModel {
    std::string name; // report label
    Checkpoint ckpt;
};

struct EvalConfig {
    std::vector<uint32_t> factors = {2, 3, 4};
    bool rgb_metrics = false; // default scores the luma plane only
};

struct EvalRow {
    uint32_t factor = 0;
    std::string method;
    double psnr = 0.0;
    double ssim = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;

    std::string csv() const;   // "factor,method,psnr,ssim", 4 decimals
    std::string table() const; // aligned human-readable listing
};

// Crops bottom/right so both dimensions are multiples of k, keeping the
// re-enlarged output aligned with the reference pixel for pixel.
RasterImage modcrop(const RasterImage& img, uint32_t k);

// Degrade-and-restore protocol: each reference is bilinear-downscaled by 1/k
// and re-enlarged by every method (interpolators plus the given models); rows
// report mean PSNR/SSIM per (factor, method). Images are processed in the
// given order and aggregated deterministically.
EvalReport evaluate_images(const std::vector<RasterImage>& refs,
                           const std::vector<EvalModel>& models, const EvalConfig& cfg);

// File-based wrapper: sorts the paths, loads every reference (unreadable
// references are errors), then runs evaluate_images.
EvalReport evaluate(std::vector<std::string> reference_files,
                    const std::vector<EvalModel>& models, const EvalConfig& cfg);

} // namespace srforge
