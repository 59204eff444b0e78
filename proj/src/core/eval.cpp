#include "core/eval.hpp"

#include <algorithm>
#include <cstdio>

#include "core/common.hpp"
#include "core/image_io.hpp"
#include "core/interp.hpp"
#include "core/metrics.hpp"
#include "core/net.hpp"
#include "core/pipeline.hpp"

namespace srforge {

namespace {

RasterImage luma_plane(const RasterImage& img) {
    if (img.channels() == 1) return img;
    return rgb_to_ycbcr(img).y;
}

struct Scores {
    double psnr = 0.0;
    double ssim = 0.0;
};

Scores score(const RasterImage& out, const RasterImage& ref, bool rgb_metrics) {
    if (rgb_metrics) {
        return Scores{psnr(out, ref), ssim(out, ref)};
    }
    const RasterImage yo = luma_plane(out);
    const RasterImage yr = luma_plane(ref);
    return Scores{psnr(yo, yr), ssim(yo, yr)};
}

} // namespace

RasterImage modcrop(const RasterImage& img, uint32_t k) {
    if (k == 0) fail(ErrorCode::InvalidArg, "modcrop: factor must be positive");
    const uint32_t w = img.width() - img.width() % k;
    const uint32_t h = img.height() - img.height() % k;
    if (w == 0 || h == 0) {
        fail(ErrorCode::DimensionMismatch, "modcrop: image smaller than the scale factor");
    }
    if (w == img.width() && h == img.height()) return img;
    return crop(img, 0, 0, w, h);
}

EvalReport evaluate_images(const std::vector<RasterImage>& refs,
                           const std::vector<EvalModel>& models, const EvalConfig& cfg) {
    if (refs.empty()) fail(ErrorCode::EmptyInput, "evaluate: empty reference set");
    if (cfg.factors.empty()) fail(ErrorCode::InvalidArg, "evaluate: no scale factors");

    struct Method {
        std::string name;
        ScaleMethod interp = ScaleMethod::Nearest;
        const Network* net = nullptr;
    };
    std::vector<Method> methods = {
        {"nearest", ScaleMethod::Nearest, nullptr},
        {"bilinear", ScaleMethod::Bilinear, nullptr},
        {"bicubic", ScaleMethod::Bicubic, nullptr},
    };
    std::vector<Network> nets;
    nets.reserve(models.size());
    for (const EvalModel& m : models) {
        validate(m.ckpt.spec);
        nets.emplace_back(m.ckpt.spec);
        nets.back().params() = m.ckpt.params;
    }
    for (std::size_t i = 0; i < models.size(); ++i) {
        methods.push_back(Method{models[i].name, ScaleMethod::Nearest, &nets[i]});
    }

    EvalReport report;
    for (const uint32_t k : cfg.factors) {
        // Per-image scores land in preassigned slots so the aggregation order
        // never depends on scheduling.
        std::vector<std::vector<Scores>> scores(methods.size(),
                                                std::vector<Scores>(refs.size()));
        parallel_for(refs.size(), [&](std::size_t i) {
            const RasterImage ref = modcrop(refs[i], k);
            const RasterImage lr = scale(ref, 1.0 / k, ScaleMethod::Bilinear);
            for (std::size_t m = 0; m < methods.size(); ++m) {
                RasterImage out;
                if (methods[m].net != nullptr) {
                    out = upscale(lr, *methods[m].net, UpscaleConfig{k, {}});
                } else {
                    out = resample(lr, ref.width(), ref.height(), methods[m].interp);
                }
                scores[m][i] = score(out, ref, cfg.rgb_metrics);
            }
        });
        for (std::size_t m = 0; m < methods.size(); ++m) {
            double psnr_acc = 0.0, ssim_acc = 0.0;
            for (const Scores& s : scores[m]) {
                psnr_acc += s.psnr;
                ssim_acc += s.ssim;
            }
            report.rows.push_back(EvalRow{k, methods[m].name,
                                          psnr_acc / static_cast<double>(refs.size()),
                                          ssim_acc / static_cast<double>(refs.size())});
        }
    }
    return report;
}

EvalReport evaluate(std::vector<std::string> reference_files,
                    const std::vector<EvalModel>& models, const EvalConfig& cfg) {
    if (reference_files.empty()) fail(ErrorCode::EmptyInput, "evaluate: empty reference set");
    std::sort(reference_files.begin(), reference_files.end());
    std::vector<RasterImage> refs;
    refs.reserve(reference_files.size());
    for (const std::string& f : reference_files) {
        refs.push_back(load_image(f));
    }
    return evaluate_images(refs, models, cfg);
}

std::string EvalReport::csv() const {
    std::string out = "factor,method,psnr,ssim\n";
    char row[160];
    for (const EvalRow& r : rows) {
        std::snprintf(row, sizeof row, "%u,%s,%.4f,%.4f\n", r.factor, r.method.c_str(),
                      r.psnr, r.ssim);
        out += row;
    }
    return out;
}

std::string EvalReport::table() const {
    std::size_t name_w = 6;
    for (const EvalRow& r : rows) name_w = std::max(name_w, r.method.size());
    char line[200];
    std::snprintf(line, sizeof line, "%-6s  %-*s  %9s  %7s\n", "factor",
                  static_cast<int>(name_w), "method", "psnr", "ssim");
    std::string out = line;
    for (const EvalRow& r : rows) {
        std::snprintf(line, sizeof line, "%-6u  %-*s  %9.4f  %7.4f\n", r.factor,
                      static_cast<int>(name_w), r.method.c_str(), r.psnr, r.ssim);
        out += line;
    }
    return out;
}

} // namespace srforge
