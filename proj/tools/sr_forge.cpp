// Command line front end. Everything goes through the public C API so the
// binary exercises the same surface external callers get.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <srforge/srforge.h>

namespace {

int exit_code_for(srf_status status) {
    switch (status) {
        case SRF_OK: return 0;
        case SRF_INVALID_ARG: return 1;
        case SRF_IO:
        case SRF_NOT_FOUND:
        case SRF_EMPTY_INPUT: return 2;
        default: return 3; // malformed or mismatched data
    }
}

int report_failure(const std::string& op, srf_status status) {
    std::fprintf(stderr, "sr-forge: %s failed (%s): %s\n", op.c_str(), srf_status_name(status),
                 srf_last_error());
    return exit_code_for(status);
}

bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".ppm";
}

std::vector<std::string> list_images(const std::string& dir, std::string& error) {
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
            files.push_back(entry.path().string());
        }
    }
    if (ec) {
        error = "cannot list " + dir + ": " + ec.message();
        return {};
    }
    std::sort(files.begin(), files.end());
    return files;
}

struct PreprocessArgs {
    std::string input_dir;
    std::string output;
    uint32_t patch_size = 32;
    uint32_t stride = 16;
    uint32_t channels = 1;
    std::string degradation = "bilinear";
    bool no_sharpen = false;
    std::string denoise = "none";
};

int run_preprocess(const PreprocessArgs& args) {
    std::string list_error;
    const std::vector<std::string> files = list_images(args.input_dir, list_error);
    if (!list_error.empty()) {
        std::fprintf(stderr, "sr-forge: %s\n", list_error.c_str());
        return 2;
    }
    if (files.empty()) {
        std::fprintf(stderr, "sr-forge: no images found in %s\n", args.input_dir.c_str());
        return 2;
    }
    std::vector<const char*> file_ptrs;
    file_ptrs.reserve(files.size());
    for (const std::string& f : files) file_ptrs.push_back(f.c_str());

    srf_preprocess_options opts;
    srf_preprocess_options_init(&opts);
    opts.patch_size = args.patch_size;
    opts.stride = args.stride;
    opts.channels = args.channels;
    opts.degradation = args.degradation.c_str();
    opts.sharpen = args.no_sharpen ? 0 : 1;
    opts.denoise = args.denoise.c_str();

    char* warnings = nullptr;
    const srf_status status = srf_preprocess(file_ptrs.data(), file_ptrs.size(), &opts,
                                             args.output.c_str(), &warnings);
    if (warnings != nullptr) {
        std::fprintf(stderr, "sr-forge: skipped unreadable inputs:\n%s\n", warnings);
        srf_string_free(warnings);
    }
    if (status != SRF_OK) return report_failure("preprocess", status);
    std::printf("wrote %s from %zu file(s)\n", args.output.c_str(), files.size());
    return 0;
}

struct TrainArgs {
    std::string archive;
    std::string out_dir;
    std::string preset = "msrcnn";
    uint32_t channels = 1;
    std::string optimizer = "adam";
    double learning_rate = 0.003;
    uint32_t epochs = 50;
    uint32_t batch_size = 32;
    uint64_t seed = 0;
    std::string resume;
};

int run_train(const TrainArgs& args) {
    srf_train_options opts;
    srf_train_options_init(&opts);
    opts.preset = args.preset.c_str();
    opts.channels = args.channels;
    opts.optimizer = args.optimizer.c_str();
    opts.learning_rate = args.learning_rate;
    opts.epochs = args.epochs;
    opts.batch_size = args.batch_size;
    opts.seed = args.seed;
    if (!args.resume.empty()) opts.resume_checkpoint = args.resume.c_str();

    char* final_ckpt = nullptr;
    const srf_status status =
        srf_train(args.archive.c_str(), args.out_dir.c_str(), &opts, &final_ckpt);
    if (status != SRF_OK) return report_failure("train", status);
    std::printf("final checkpoint: %s\n", final_ckpt != nullptr ? final_ckpt : "(none)");
    srf_string_free(final_ckpt);
    return 0;
}

struct UpscaleArgs {
    std::string model;
    std::string input;
    std::string output;
    uint32_t factor = 2;
    std::string mode = "enlarge-enhance";
    std::string denoise = "none";
};

int run_upscale(const UpscaleArgs& args) {
    srf_model* model = nullptr;
    srf_status status = srf_model_load(args.model.c_str(), &model);
    if (status != SRF_OK) return report_failure("loading " + args.model, status);

    srf_image* input = nullptr;
    status = srf_image_load(args.input.c_str(), &input);
    if (status != SRF_OK) {
        srf_model_free(model);
        return report_failure("loading " + args.input, status);
    }

    srf_image* output = nullptr;
    status = srf_post_process(input, model, args.mode.c_str(), args.factor,
                              args.denoise.c_str(), &output);
    if (status == SRF_OK) {
        status = srf_image_save(output, args.output.c_str());
        if (status == SRF_OK) {
            std::printf("wrote %s (%ux%u)\n", args.output.c_str(), srf_image_width(output),
                        srf_image_height(output));
        } else {
            report_failure("saving " + args.output, status);
        }
    } else {
        report_failure("upscale", status);
    }

    srf_image_free(output);
    srf_image_free(input);
    srf_model_free(model);
    return exit_code_for(status);
}

struct EvalArgs {
    std::string references_dir;
    std::vector<std::string> models; // NAME=PATH or bare PATH
    std::vector<uint32_t> factors = {2, 3, 4};
    bool rgb_metrics = false;
    std::string csv_path;
};

int run_eval(const EvalArgs& args) {
    std::string list_error;
    const std::vector<std::string> refs = list_images(args.references_dir, list_error);
    if (!list_error.empty()) {
        std::fprintf(stderr, "sr-forge: %s\n", list_error.c_str());
        return 2;
    }
    if (refs.empty()) {
        std::fprintf(stderr, "sr-forge: no reference images in %s\n",
                     args.references_dir.c_str());
        return 2;
    }
    std::vector<const char*> ref_ptrs;
    for (const std::string& r : refs) ref_ptrs.push_back(r.c_str());

    std::vector<std::string> names, paths;
    for (const std::string& spec : args.models) {
        const std::size_t eq = spec.find('=');
        if (eq != std::string::npos) {
            names.push_back(spec.substr(0, eq));
            paths.push_back(spec.substr(eq + 1));
        } else {
            names.push_back(std::filesystem::path(spec).stem().string());
            paths.push_back(spec);
        }
    }
    std::vector<const char*> name_ptrs, path_ptrs;
    for (const std::string& n : names) name_ptrs.push_back(n.c_str());
    for (const std::string& p : paths) path_ptrs.push_back(p.c_str());

    srf_eval_options opts;
    srf_eval_options_init(&opts);
    opts.factors = args.factors.data();
    opts.factor_count = args.factors.size();
    opts.rgb_metrics = args.rgb_metrics ? 1 : 0;

    char* csv = nullptr;
    char* table = nullptr;
    const srf_status status =
        srf_evaluate(ref_ptrs.data(), ref_ptrs.size(), name_ptrs.data(), path_ptrs.data(),
                     name_ptrs.size(), &opts, &csv, &table);
    if (status != SRF_OK) return report_failure("eval", status);

    std::fputs(table, stdout);
    srf_string_free(table);
    if (!args.csv_path.empty()) {
        std::ofstream out(args.csv_path, std::ios::trunc);
        out << csv;
        if (!out) {
            std::fprintf(stderr, "sr-forge: cannot write %s\n", args.csv_path.c_str());
            srf_string_free(csv);
            return 2;
        }
    }
    srf_string_free(csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"super-resolution toolkit: preprocess, train, upscale, evaluate"};
    app.require_subcommand(1);

    PreprocessArgs pre;
    CLI::App* cmd_pre = app.add_subcommand("preprocess", "build a patch archive from images");
    cmd_pre->add_option("--input", pre.input_dir, "directory of corpus images")->required();
    cmd_pre->add_option("--output", pre.output, "archive file to write")->required();
    cmd_pre->add_option("--patch-size", pre.patch_size, "square patch edge (default 32)");
    cmd_pre->add_option("--stride", pre.stride, "patch grid stride (default 16)");
    cmd_pre->add_option("--channels", pre.channels, "1 = luma pairs, 3 = RGB pairs")
        ->check(CLI::IsMember({1, 3}));
    cmd_pre->add_option("--degradation", pre.degradation, "bilinear or bicubic")
        ->check(CLI::IsMember({"bilinear", "bicubic"}));
    cmd_pre->add_flag("--no-sharpen", pre.no_sharpen, "skip the sharpening stencil");
    cmd_pre->add_option("--denoise", pre.denoise, "none, bilateral, or nlm")
        ->check(CLI::IsMember({"none", "bilateral", "nlm"}));

    TrainArgs tr;
    CLI::App* cmd_train = app.add_subcommand("train", "train a model on a patch archive");
    cmd_train->add_option("--archive", tr.archive, "patch archive")->required();
    cmd_train->add_option("--out-dir", tr.out_dir, "checkpoint/log directory")->required();
    cmd_train->add_option("--preset", tr.preset, "msrcnn or srcnn")
        ->check(CLI::IsMember({"msrcnn", "srcnn"}));
    cmd_train->add_option("--channels", tr.channels, "network channels (msrcnn only)")
        ->check(CLI::IsMember({1, 3}));
    cmd_train->add_option("--optimizer", tr.optimizer, "adam or sgd")
        ->check(CLI::IsMember({"adam", "sgd"}));
    cmd_train->add_option("--lr", tr.learning_rate, "learning rate (default 0.003)");
    cmd_train->add_option("--epochs", tr.epochs, "training epochs (default 50)");
    cmd_train->add_option("--batch-size", tr.batch_size, "mini-batch size (default 32)");
    cmd_train->add_option("--seed", tr.seed, "run seed (default 0)");
    cmd_train->add_option("--resume", tr.resume, "checkpoint to continue from");

    UpscaleArgs up;
    CLI::App* cmd_up = app.add_subcommand("upscale", "reconstruct an image with a model");
    cmd_up->add_option("--model", up.model, "model checkpoint")->required();
    cmd_up->add_option("input", up.input, "input image")->required();
    cmd_up->add_option("output", up.output, "output image")->required();
    cmd_up->add_option("--factor", up.factor, "scale factor 2..4 (default 2)")
        ->check(CLI::IsMember({2, 3, 4}));
    cmd_up->add_option("--mode", up.mode,
                       "enhance-only, enlarge-enhance, double-enhance, double-enlarge")
        ->check(CLI::IsMember(
            {"enhance-only", "enlarge-enhance", "double-enhance", "double-enlarge"}));
    cmd_up->add_option("--denoise", up.denoise, "none, bilateral, or nlm")
        ->check(CLI::IsMember({"none", "bilateral", "nlm"}));

    EvalArgs ev;
    CLI::App* cmd_eval = app.add_subcommand("eval", "score methods against references");
    cmd_eval->add_option("--references", ev.references_dir, "directory of reference images")
        ->required();
    cmd_eval->add_option("--model", ev.models, "model as NAME=PATH (repeatable)");
    cmd_eval->add_option("--factors", ev.factors, "scale factors (default 2,3,4)")
        ->delimiter(',');
    cmd_eval->add_flag("--rgb-metrics", ev.rgb_metrics, "score RGB instead of luma");
    cmd_eval->add_option("--csv", ev.csv_path, "also write the report as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Normalize CLI11's assorted parse-error codes onto the documented
        // usage exit code; --help still exits 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (cmd_pre->parsed()) return run_preprocess(pre);
    if (cmd_train->parsed()) return run_train(tr);
    if (cmd_up->parsed()) return run_upscale(up);
    if (cmd_eval->parsed()) return run_eval(ev);
    return 1;
}
