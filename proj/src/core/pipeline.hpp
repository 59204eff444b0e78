#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/checkpoint.hpp"
#include "core/dataset.hpp"
#include "core/filters.hpp"
#include "core/image.hpp"
#include "core/interp.hpp"
#include "core/net.hpp"

namespace srforge {

// ---------------------------------------------------------------------------
// Corpus preprocessing: image -> aligned low/high-resolution patch pairs.

struct PreprocessConfig {
    uint32_t patch_size = 32;
    uint32_t stride = 16;
    uint32_t channels = 1; // 1 trains on the luma plane, 3 on full RGB
    ScaleMethod degradation = ScaleMethod::Bilinear;
    bool sharpen_input = true;
    DenoiseParams denoise; // applied to the sharpened reference before patching
};

struct PreprocessResult {
    PatchArchive archive;
    std::vector<std::string> skipped; // "path: reason" for unreadable inputs
};

// Sharpen/denoise the image into the high-resolution reference, derive the
// low-resolution side by halving and restoring with the configured method,
// and append co-located patches. `name` becomes the manifest entry.
void append_image_pairs(PatchArchive& archive, const RasterImage& img, const std::string& name,
                        const PreprocessConfig& cfg);

// Runs append_image_pairs over a file list. Unreadable files are skipped and
// reported; an image smaller than the patch size is an error.
PreprocessResult preprocess_corpus(const std::vector<std::string>& files,
                                   const PreprocessConfig& cfg);

// ---------------------------------------------------------------------------
// Training.

struct TrainConfig {
    NetworkSpec spec = NetworkSpec::msrcnn();
    OptimizerConfig optimizer;
    uint32_t epochs = 50;
    uint32_t batch_size = 32;
    uint64_t seed = 0;
    std::string out_dir;           // empty runs fully in memory
    std::string resume_checkpoint; // continue a previous run's trajectory
};

struct EpochStats {
    uint32_t epoch = 0; // 1-based
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainResult {
    Network net;
    OptimizerState<float> opt_state;
    std::vector<EpochStats> history; // epochs run by this call
    std::string last_checkpoint;     // empty when out_dir is empty
};

// Pair indices by role. Assignment is per image (manifest order): of every
// ten images, the ninth validates and the tenth is held out for testing.
struct DataSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

DataSplit split_archive(const PatchArchive& archive);

// Mini-batch MSE training with per-epoch checkpoints and a loss.csv log.
// A fixed seed fixes the whole trajectory bit for bit, and resuming from
// epoch k reproduces the uninterrupted run exactly.
TrainResult train(const PatchArchive& archive, const TrainConfig& cfg);

// ---------------------------------------------------------------------------
// Reconstruction.

struct UpscaleConfig {
    uint32_t factor = 2; // 2, 3, or 4
    DenoiseParams denoise;
};

// Bicubic pre-upsample to the target size, then the network refines: a
// single-channel network runs on the luma plane with chroma carried over
// from the interpolation, a 3-channel network runs on RGB directly.
RasterImage upscale(const RasterImage& img, const Network& net, const UpscaleConfig& cfg = {});

// Size-preserving refinement pass (no pre-upsample).
RasterImage enhance(const RasterImage& img, const Network& net, const DenoiseParams& dn = {});

enum class PostMode { EnhanceOnly, EnlargeEnhance, DoubleEnhance, DoubleEnlarge };

const char* post_mode_name(PostMode m);
PostMode post_mode_from_name(const std::string& name);

// EnhanceOnly keeps the size; EnlargeEnhance upscales by `factor`;
// DoubleEnhance applies EnhanceOnly twice; DoubleEnlarge upscales 2x twice.
RasterImage post_process(const RasterImage& img, const Network& net, PostMode mode,
                         const DenoiseParams& dn = {}, uint32_t factor = 2);

} // namespace srforge
