#include "core/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "core/common.hpp"
#include "core/image_io.hpp"

namespace srforge {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Fisher-Yates with an explicit modulo draw so the permutation depends only
// on the seed, not on the standard library's shuffle implementation.
void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

RasterImage luma_plane(const RasterImage& img) {
    if (img.channels() == 1) return img;
    return rgb_to_ycbcr(img).y;
}

RasterImage replicate_gray(const RasterImage& img) {
    RasterImage out(img.width(), img.height(), 3);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        out.data()[i * 3 + 0] = img.data()[i];
        out.data()[i * 3 + 1] = img.data()[i];
        out.data()[i * 3 + 2] = img.data()[i];
    }
    return out;
}

Tensor tensor_from_plane(const RasterImage& plane) {
    Tensor t(1, 1, plane.height(), plane.width());
    std::copy(plane.data().begin(), plane.data().end(), t.item(0));
    return t;
}

RasterImage plane_from_tensor(const Tensor& t) {
    RasterImage out(t.w(), t.h(), 1);
    std::copy(t.item(0), t.item(0) + t.plane_values(), out.data().begin());
    return out;
}

Tensor tensor_from_rgb(const RasterImage& img) {
    Tensor t(1, 3, img.height(), img.width());
    float* dst = t.item(0);
    const std::size_t plane = img.pixel_count();
    for (uint32_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < plane; ++i) {
            dst[c * plane + i] = img.data()[i * 3 + c];
        }
    }
    return t;
}

RasterImage rgb_from_tensor(const Tensor& t) {
    RasterImage out(t.w(), t.h(), 3);
    const float* src = t.item(0);
    const std::size_t plane = out.pixel_count();
    for (uint32_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < plane; ++i) {
            out.data()[i * 3 + c] = src[c * plane + i];
        }
    }
    return out;
}

// Shared reconstruction core: run the network over the image at its current
// size. Single-channel networks refine luma and keep the chroma planes.
RasterImage apply_net(const RasterImage& img, const Network& net) {
    const uint32_t cin = net.spec().input_channels;
    if (net.spec().output_channels() != cin) {
        fail(ErrorCode::ChannelMismatch,
             "image reconstruction needs a channel-preserving network");
    }
    if (cin == 1) {
        if (img.channels() == 1) {
            return plane_from_tensor(net.forward(tensor_from_plane(img)));
        }
        YCbCrImage ycc = rgb_to_ycbcr(img);
        RasterImage refined = plane_from_tensor(net.forward(tensor_from_plane(ycc.y)));
        return ycbcr_to_rgb(YCbCrImage{std::move(refined), std::move(ycc.cb), std::move(ycc.cr)});
    }
    if (cin != 3) {
        fail(ErrorCode::ChannelMismatch, "network input channels must be 1 or 3");
    }
    const RasterImage& rgb3 = img.channels() == 3 ? img : replicate_gray(img);
    return rgb_from_tensor(net.forward(tensor_from_rgb(rgb3)));
}

void check_factor(uint32_t factor) {
    if (factor < 2 || factor > 4) {
        fail(ErrorCode::InvalidArg,
             "upscale factor must be 2, 3, or 4, got " + std::to_string(factor));
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Preprocessing.

void append_image_pairs(PatchArchive& archive, const RasterImage& img, const std::string& name,
                        const PreprocessConfig& cfg) {
    if (cfg.stride == 0) fail(ErrorCode::InvalidArg, "preprocess: stride must be positive");
    if (cfg.channels != 1 && cfg.channels != 3) {
        fail(ErrorCode::InvalidArg, "preprocess: channels must be 1 or 3");
    }
    if (archive.patch_size() != cfg.patch_size || archive.channels() != cfg.channels) {
        fail(ErrorCode::InvalidArg, "preprocess: archive shape disagrees with config");
    }
    if (img.width() < cfg.patch_size || img.height() < cfg.patch_size) {
        fail(ErrorCode::DimensionMismatch, "preprocess: image smaller than patch size: " + name);
    }

    RasterImage hr = cfg.sharpen_input ? sharpen(img) : img;
    hr = denoise(hr, cfg.denoise);
    const RasterImage lr = degrade(hr, 0.5, cfg.degradation);

    std::vector<PatchPair> pairs;
    if (cfg.channels == 1) {
        pairs = extract_patches(luma_plane(lr), luma_plane(hr), cfg.patch_size, cfg.stride);
    } else {
        const RasterImage lr3 = lr.channels() == 3 ? lr : replicate_gray(lr);
        const RasterImage hr3 = hr.channels() == 3 ? hr : replicate_gray(hr);
        pairs = extract_patches(lr3, hr3, cfg.patch_size, cfg.stride);
    }
    for (const PatchPair& p : pairs) {
        archive.append_pair(p.lr, p.hr);
    }
    archive.manifest.push_back(
        ArchiveEntry{name, scale_method_name(cfg.degradation), pairs.size()});
}

PreprocessResult preprocess_corpus(const std::vector<std::string>& files,
                                   const PreprocessConfig& cfg) {
    if (files.empty()) fail(ErrorCode::EmptyInput, "preprocess: empty corpus");
    PreprocessResult result{PatchArchive(cfg.patch_size, cfg.channels), {}};
    for (const std::string& file : files) {
        RasterImage img;
        try {
            img = load_image(file);
        } catch (const Error& e) {
            result.skipped.push_back(file + ": " + e.what());
            continue;
        }
        const std::string name = std::filesystem::path(file).filename().string();
        append_image_pairs(result.archive, img, name, cfg);
    }
    if (result.archive.pair_count() == 0) {
        fail(ErrorCode::Io, "preprocess: no readable images in corpus");
    }
    return result;
}

// ---------------------------------------------------------------------------
// Training.

DataSplit split_archive(const PatchArchive& archive) {
    DataSplit split;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < archive.manifest.size(); ++i) {
        const uint64_t pairs = archive.manifest[i].pairs;
        std::vector<std::size_t>* role = &split.train;
        if (i % 10 == 8) role = &split.val;
        if (i % 10 == 9) role = &split.test;
        for (uint64_t p = 0; p < pairs; ++p) {
            role->push_back(offset + p);
        }
        offset += pairs;
    }
    if (offset != archive.pair_count()) {
        fail(ErrorCode::InvalidArg, "split: manifest pair counts disagree with archive");
    }
    return split;
}

namespace {

Tensor gather_batch(const PatchArchive& archive, const std::vector<std::size_t>& idx,
                    std::size_t begin, std::size_t count, bool hr_side) {
    Tensor t(static_cast<uint32_t>(count), archive.channels(), archive.patch_size(),
             archive.patch_size());
    const std::size_t vpp = archive.values_per_patch();
    for (std::size_t i = 0; i < count; ++i) {
        const float* src =
            hr_side ? archive.hr_patch(idx[begin + i]) : archive.lr_patch(idx[begin + i]);
        std::copy(src, src + vpp, t.item(i));
    }
    return t;
}

// Mean forward loss over a pair subset, weighted by batch size.
double subset_loss(Network& net, const PatchArchive& archive,
                   const std::vector<std::size_t>& idx, uint32_t batch_size) {
    double acc = 0.0;
    for (std::size_t begin = 0; begin < idx.size(); begin += batch_size) {
        const std::size_t count = std::min<std::size_t>(batch_size, idx.size() - begin);
        const Tensor x = gather_batch(archive, idx, begin, count, false);
        const Tensor y = gather_batch(archive, idx, begin, count, true);
        acc += static_cast<double>(net.loss(x, y)) * static_cast<double>(count);
    }
    return acc / static_cast<double>(idx.size());
}

std::string checkpoint_name(uint32_t epoch) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "checkpoint_epoch_%04u.msrc", epoch);
    return buf;
}

void write_run_metadata(const TrainConfig& cfg, const DataSplit& split, const std::string& path) {
    nlohmann::json doc{
        {"seed", cfg.seed},
        {"epochs", cfg.epochs},
        {"batch_size", cfg.batch_size},
        {"optimizer", cfg.optimizer.kind == OptimizerKind::Adam ? "adam" : "sgd"},
        {"learning_rate", cfg.optimizer.learning_rate},
        {"input_channels", cfg.spec.input_channels},
        {"layers", cfg.spec.layers.size()},
        {"pairs", {{"train", split.train.size()},
                   {"val", split.val.size()},
                   {"test", split.test.size()}}},
    };
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
}

} // namespace

TrainResult train(const PatchArchive& archive, const TrainConfig& cfg) {
    if (cfg.batch_size == 0) fail(ErrorCode::InvalidArg, "train: batch size must be positive");
    if (archive.pair_count() == 0) fail(ErrorCode::EmptyInput, "train: archive holds no pairs");
    validate(cfg.spec);

    NetworkSpec spec = cfg.spec;
    uint32_t start_epoch = 0;
    std::vector<float> loss_history;
    Checkpoint resumed;
    const bool resuming = !cfg.resume_checkpoint.empty();
    if (resuming) {
        resumed = load_checkpoint(cfg.resume_checkpoint);
        spec = resumed.spec;
        start_epoch = resumed.epoch;
        loss_history = resumed.loss_history;
    }
    if (spec.input_channels != archive.channels()) {
        fail(ErrorCode::ChannelMismatch, "train: network channels disagree with archive");
    }

    TrainResult result{Network(spec), {}, {}, {}};
    if (resuming) {
        result.net.params() = std::move(resumed.params);
        // SGD carries no moments; only Adam has a sidecar to restore.
        if (cfg.optimizer.kind == OptimizerKind::Adam) {
            result.opt_state = load_optimizer_state(cfg.resume_checkpoint + ".opt", spec);
        }
        result.last_checkpoint = cfg.resume_checkpoint;
    } else {
        result.net.init_glorot(cfg.seed);
    }

    const DataSplit split = split_archive(archive);
    if (split.train.empty()) fail(ErrorCode::EmptyInput, "train: no training pairs after split");

    const bool writing = !cfg.out_dir.empty();
    std::string csv_path;
    if (writing) {
        std::filesystem::create_directories(cfg.out_dir);
        csv_path = (std::filesystem::path(cfg.out_dir) / "loss.csv").string();
        if (!resuming) {
            std::ofstream csv(csv_path, std::ios::trunc);
            csv << "epoch,train_mse,val_mse\n";
            if (!csv) fail(ErrorCode::Io, "train: cannot write " + csv_path);
            write_run_metadata(cfg, split,
                               (std::filesystem::path(cfg.out_dir) / "run.json").string());
        }
    }

    std::vector<std::size_t> order = split.train;
    for (uint32_t epoch = start_epoch + 1; epoch <= cfg.epochs; ++epoch) {
        // Seed per epoch from (run seed, epoch) alone so a resumed run shuffles
        // exactly like the uninterrupted one.
        std::mt19937_64 rng(cfg.seed ^ splitmix64(epoch));
        std::copy(split.train.begin(), split.train.end(), order.begin());
        shuffle_indices(order, rng);

        double acc = 0.0;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
            const std::size_t count = std::min<std::size_t>(cfg.batch_size, order.size() - begin);
            const Tensor x = gather_batch(archive, order, begin, count, false);
            const Tensor y = gather_batch(archive, order, begin, count, true);
            const float loss = result.net.train_step(x, y, cfg.optimizer, result.opt_state);
            acc += static_cast<double>(loss) * static_cast<double>(count);
        }
        const double train_mse = acc / static_cast<double>(order.size());
        const double val_mse = split.val.empty()
                                   ? train_mse
                                   : subset_loss(result.net, archive, split.val, cfg.batch_size);

        loss_history.push_back(static_cast<float>(train_mse));
        result.history.push_back(EpochStats{epoch, train_mse, val_mse});

        if (writing) {
            const std::string ckpt_path =
                (std::filesystem::path(cfg.out_dir) / checkpoint_name(epoch)).string();
            save_checkpoint(Checkpoint{spec, epoch, loss_history, result.net.params()},
                            ckpt_path);
            if (cfg.optimizer.kind == OptimizerKind::Adam) {
                save_optimizer_state(result.opt_state, spec, ckpt_path + ".opt");
            }
            result.last_checkpoint = ckpt_path;

            std::ofstream csv(csv_path, std::ios::app);
            char row[96];
            std::snprintf(row, sizeof row, "%u,%.17g,%.17g\n", epoch, train_mse, val_mse);
            csv << row;
            if (!csv) fail(ErrorCode::Io, "train: cannot append " + csv_path);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Reconstruction.

RasterImage upscale(const RasterImage& img, const Network& net, const UpscaleConfig& cfg) {
    check_factor(cfg.factor);
    const RasterImage pre = scale(img, cfg.factor, ScaleMethod::Bicubic);
    RasterImage out = apply_net(pre, net);
    return denoise(out, cfg.denoise);
}

RasterImage enhance(const RasterImage& img, const Network& net, const DenoiseParams& dn) {
    return denoise(apply_net(img, net), dn);
}

const char* post_mode_name(PostMode m) {
    switch (m) {
        case PostMode::EnhanceOnly: return "enhance-only";
        case PostMode::EnlargeEnhance: return "enlarge-enhance";
        case PostMode::DoubleEnhance: return "double-enhance";
        case PostMode::DoubleEnlarge: return "double-enlarge";
    }
    fail(ErrorCode::InvalidArg, "unknown post-processing mode");
}

PostMode post_mode_from_name(const std::string& name) {
    if (name == "enhance-only") return PostMode::EnhanceOnly;
    if (name == "enlarge-enhance") return PostMode::EnlargeEnhance;
    if (name == "double-enhance") return PostMode::DoubleEnhance;
    if (name == "double-enlarge") return PostMode::DoubleEnlarge;
    fail(ErrorCode::InvalidArg, "unknown post-processing mode: " + name);
}

RasterImage post_process(const RasterImage& img, const Network& net, PostMode mode,
                         const DenoiseParams& dn, uint32_t factor) {
    switch (mode) {
        case PostMode::EnhanceOnly:
            return enhance(img, net, dn);
        case PostMode::EnlargeEnhance:
            return upscale(img, net, UpscaleConfig{factor, dn});
        case PostMode::DoubleEnhance:
            return enhance(enhance(img, net, dn), net, dn);
        case PostMode::DoubleEnlarge:
            return upscale(upscale(img, net, UpscaleConfig{2, dn}), net, UpscaleConfig{2, dn});
    }
    fail(ErrorCode::InvalidArg, "unknown post-processing mode");
}

} // namespace srforge
