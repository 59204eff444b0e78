#include "srforge/srforge.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/eval.hpp"
#include "core/image_io.hpp"
#include "core/interp.hpp"
#include "core/metrics.hpp"
#include "core/pipeline.hpp"

using namespace srforge;

struct srf_image {
    RasterImage img;
};

struct srf_model {
    Checkpoint ckpt;
    Network net;
};

namespace {

thread_local std::string g_last_error;

srf_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArg: return SRF_INVALID_ARG;
        case ErrorCode::Io: return SRF_IO;
        case ErrorCode::NotFound: return SRF_NOT_FOUND;
        case ErrorCode::UnsupportedFormat: return SRF_UNSUPPORTED_FORMAT;
        case ErrorCode::CorruptFile: return SRF_CORRUPT_FILE;
        case ErrorCode::BadMagic: return SRF_BAD_MAGIC;
        case ErrorCode::VersionMismatch: return SRF_VERSION_MISMATCH;
        case ErrorCode::Truncated: return SRF_TRUNCATED;
        case ErrorCode::ShapeMismatch: return SRF_SHAPE_MISMATCH;
        case ErrorCode::DimensionMismatch: return SRF_DIMENSION_MISMATCH;
        case ErrorCode::ChannelMismatch: return SRF_CHANNEL_MISMATCH;
        case ErrorCode::EmptyInput: return SRF_EMPTY_INPUT;
        case ErrorCode::Internal: return SRF_INTERNAL;
    }
    return SRF_INTERNAL;
}

// Runs fn inside the exception barrier every entry point shares.
template <typename Fn>
srf_status guarded(Fn&& fn) {
    try {
        fn();
        return SRF_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SRF_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return SRF_INTERNAL;
    }
}

srf_status invalid(const char* msg) {
    g_last_error = msg;
    return SRF_INVALID_ARG;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

DenoiseParams denoise_from_cstr(const char* name) {
    DenoiseParams p;
    if (name != nullptr && *name != '\0') {
        p.method = denoise_method_from_name(name);
    }
    return p;
}

} // namespace

extern "C" {

const char* srf_status_name(srf_status status) {
    switch (status) {
        case SRF_OK: return "ok";
        case SRF_INVALID_ARG: return "invalid argument";
        case SRF_IO: return "i/o failure";
        case SRF_NOT_FOUND: return "not found";
        case SRF_UNSUPPORTED_FORMAT: return "unsupported format";
        case SRF_CORRUPT_FILE: return "corrupt file";
        case SRF_BAD_MAGIC: return "bad magic";
        case SRF_VERSION_MISMATCH: return "version mismatch";
        case SRF_TRUNCATED: return "truncated file";
        case SRF_SHAPE_MISMATCH: return "shape mismatch";
        case SRF_DIMENSION_MISMATCH: return "dimension mismatch";
        case SRF_CHANNEL_MISMATCH: return "channel mismatch";
        case SRF_EMPTY_INPUT: return "empty input";
        case SRF_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* srf_last_error(void) {
    return g_last_error.c_str();
}

void srf_string_free(char* s) {
    delete[] s;
}

/* ---------------------------------------------------------------------- */

srf_status srf_image_load(const char* path, srf_image** out) {
    if (path == nullptr || out == nullptr) return invalid("srf_image_load: NULL argument");
    return guarded([&] { *out = new srf_image{load_image(path)}; });
}

srf_status srf_image_save(const srf_image* img, const char* path) {
    if (img == nullptr || path == nullptr) return invalid("srf_image_save: NULL argument");
    return guarded([&] { save_image(img->img, path); });
}

srf_status srf_image_create(uint32_t width, uint32_t height, uint32_t channels,
                            const float* data, srf_image** out) {
    if (out == nullptr) return invalid("srf_image_create: NULL output");
    return guarded([&] {
        RasterImage img(width, height, channels);
        if (data != nullptr) {
            std::memcpy(img.data().data(), data, img.value_count() * sizeof(float));
        }
        *out = new srf_image{std::move(img)};
    });
}

void srf_image_free(srf_image* img) {
    delete img;
}

uint32_t srf_image_width(const srf_image* img) {
    return img == nullptr ? 0 : img->img.width();
}

uint32_t srf_image_height(const srf_image* img) {
    return img == nullptr ? 0 : img->img.height();
}

uint32_t srf_image_channels(const srf_image* img) {
    return img == nullptr ? 0 : img->img.channels();
}

const float* srf_image_data(const srf_image* img) {
    return img == nullptr ? nullptr : img->img.data().data();
}

srf_status srf_image_scale(const srf_image* img, double factor, const char* method,
                           srf_image** out) {
    if (img == nullptr || method == nullptr || out == nullptr) {
        return invalid("srf_image_scale: NULL argument");
    }
    return guarded([&] {
        *out = new srf_image{scale(img->img, factor, scale_method_from_name(method))};
    });
}

srf_status srf_metrics(const srf_image* a, const srf_image* b, double* mse_out,
                       double* psnr_out, double* ssim_out) {
    if (a == nullptr || b == nullptr) return invalid("srf_metrics: NULL image");
    return guarded([&] {
        if (mse_out != nullptr) *mse_out = mse(a->img, b->img);
        if (psnr_out != nullptr) *psnr_out = psnr(a->img, b->img);
        if (ssim_out != nullptr) *ssim_out = ssim(a->img, b->img);
    });
}

/* ---------------------------------------------------------------------- */

void srf_preprocess_options_init(srf_preprocess_options* opts) {
    if (opts == nullptr) return;
    opts->patch_size = 32;
    opts->stride = 16;
    opts->channels = 1;
    opts->degradation = "bilinear";
    opts->sharpen = 1;
    opts->denoise = "none";
}

srf_status srf_preprocess(const char* const* files, size_t file_count,
                          const srf_preprocess_options* opts, const char* archive_path,
                          char** warnings) {
    if (files == nullptr || archive_path == nullptr) {
        return invalid("srf_preprocess: NULL argument");
    }
    return guarded([&] {
        srf_preprocess_options defaults;
        srf_preprocess_options_init(&defaults);
        const srf_preprocess_options& o = opts != nullptr ? *opts : defaults;

        PreprocessConfig cfg;
        cfg.patch_size = o.patch_size;
        cfg.stride = o.stride;
        cfg.channels = o.channels;
        cfg.degradation =
            scale_method_from_name(o.degradation != nullptr ? o.degradation : "bilinear");
        cfg.sharpen_input = o.sharpen != 0;
        cfg.denoise = denoise_from_cstr(o.denoise);

        std::vector<std::string> paths(files, files + file_count);
        PreprocessResult result = preprocess_corpus(paths, cfg);
        save_archive(result.archive, archive_path);
        if (warnings != nullptr) {
            if (result.skipped.empty()) {
                *warnings = nullptr;
            } else {
                std::string joined;
                for (std::size_t i = 0; i < result.skipped.size(); ++i) {
                    if (i > 0) joined += '\n';
                    joined += result.skipped[i];
                }
                *warnings = dup_string(joined);
            }
        }
    });
}

/* ---------------------------------------------------------------------- */

void srf_train_options_init(srf_train_options* opts) {
    if (opts == nullptr) return;
    opts->preset = "msrcnn";
    opts->channels = 1;
    opts->optimizer = "adam";
    opts->learning_rate = 0.003;
    opts->epochs = 50;
    opts->batch_size = 32;
    opts->seed = 0;
    opts->resume_checkpoint = nullptr;
}

srf_status srf_train(const char* archive_path, const char* out_dir,
                     const srf_train_options* opts, char** final_checkpoint) {
    if (archive_path == nullptr || out_dir == nullptr) {
        return invalid("srf_train: NULL argument");
    }
    return guarded([&] {
        srf_train_options defaults;
        srf_train_options_init(&defaults);
        const srf_train_options& o = opts != nullptr ? *opts : defaults;

        TrainConfig cfg;
        const std::string preset = o.preset != nullptr ? o.preset : "msrcnn";
        if (preset == "msrcnn") {
            cfg.spec = NetworkSpec::msrcnn(o.channels);
        } else if (preset == "srcnn") {
            cfg.spec = NetworkSpec::srcnn();
        } else {
            fail(ErrorCode::InvalidArg, "unknown preset: " + preset);
        }
        const std::string optimizer = o.optimizer != nullptr ? o.optimizer : "adam";
        if (optimizer == "adam") {
            cfg.optimizer.kind = OptimizerKind::Adam;
        } else if (optimizer == "sgd") {
            cfg.optimizer.kind = OptimizerKind::Sgd;
        } else {
            fail(ErrorCode::InvalidArg, "unknown optimizer: " + optimizer);
        }
        cfg.optimizer.learning_rate = o.learning_rate;
        cfg.epochs = o.epochs;
        cfg.batch_size = o.batch_size;
        cfg.seed = o.seed;
        cfg.out_dir = out_dir;
        if (o.resume_checkpoint != nullptr) cfg.resume_checkpoint = o.resume_checkpoint;

        const PatchArchive archive = load_archive(archive_path);
        const TrainResult result = train(archive, cfg);
        if (final_checkpoint != nullptr) {
            *final_checkpoint = dup_string(result.last_checkpoint);
        }
    });
}

/* ---------------------------------------------------------------------- */

srf_status srf_model_load(const char* path, srf_model** out) {
    if (path == nullptr || out == nullptr) return invalid("srf_model_load: NULL argument");
    return guarded([&] {
        Checkpoint ckpt = load_checkpoint(path);
        Network net(ckpt.spec);
        net.params() = ckpt.params;
        *out = new srf_model{std::move(ckpt), std::move(net)};
    });
}

void srf_model_free(srf_model* model) {
    delete model;
}

srf_status srf_upscale(const srf_image* img, const srf_model* model, uint32_t factor,
                       const char* denoise, srf_image** out) {
    if (img == nullptr || model == nullptr || out == nullptr) {
        return invalid("srf_upscale: NULL argument");
    }
    return guarded([&] {
        UpscaleConfig cfg{factor, denoise_from_cstr(denoise)};
        *out = new srf_image{upscale(img->img, model->net, cfg)};
    });
}

srf_status srf_enhance(const srf_image* img, const srf_model* model, const char* denoise,
                       srf_image** out) {
    if (img == nullptr || model == nullptr || out == nullptr) {
        return invalid("srf_enhance: NULL argument");
    }
    return guarded([&] {
        *out = new srf_image{enhance(img->img, model->net, denoise_from_cstr(denoise))};
    });
}

srf_status srf_post_process(const srf_image* img, const srf_model* model, const char* mode,
                            uint32_t factor, const char* denoise, srf_image** out) {
    if (img == nullptr || model == nullptr || mode == nullptr || out == nullptr) {
        return invalid("srf_post_process: NULL argument");
    }
    return guarded([&] {
        *out = new srf_image{post_process(img->img, model->net, post_mode_from_name(mode),
                                          denoise_from_cstr(denoise), factor)};
    });
}

/* ---------------------------------------------------------------------- */

void srf_eval_options_init(srf_eval_options* opts) {
    if (opts == nullptr) return;
    opts->factors = nullptr;
    opts->factor_count = 0;
    opts->rgb_metrics = 0;
}

srf_status srf_evaluate(const char* const* reference_files, size_t reference_count,
                        const char* const* model_names, const char* const* model_paths,
                        size_t model_count, const srf_eval_options* opts, char** csv_out,
                        char** table_out) {
    if (reference_files == nullptr) return invalid("srf_evaluate: NULL references");
    if (model_count > 0 && (model_names == nullptr || model_paths == nullptr)) {
        return invalid("srf_evaluate: NULL model arrays");
    }
    return guarded([&] {
        EvalConfig cfg;
        if (opts != nullptr) {
            cfg.rgb_metrics = opts->rgb_metrics != 0;
            if (opts->factors != nullptr && opts->factor_count > 0) {
                cfg.factors.assign(opts->factors, opts->factors + opts->factor_count);
            }
        }
        std::vector<EvalModel> models;
        models.reserve(model_count);
        for (size_t i = 0; i < model_count; ++i) {
            models.push_back(EvalModel{model_names[i], load_checkpoint(model_paths[i])});
        }
        std::vector<std::string> refs(reference_files, reference_files + reference_count);
        const EvalReport report = evaluate(std::move(refs), models, cfg);
        if (csv_out != nullptr) *csv_out = dup_string(report.csv());
        if (table_out != nullptr) *table_out = dup_string(report.table());
    });
}

} /* extern "C" */
