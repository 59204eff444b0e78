// Drives the sr-forge binary as a subprocess: happy paths for every
// subcommand, the documented exit-code contract, and report determinism
// across worker-thread settings.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "core/image_io.hpp"
#include "support/synth.hpp"

#ifndef SR_FORGE_BIN
#error "SR_FORGE_BIN must point at the CLI binary"
#endif

namespace fs = std::filesystem;
using namespace srforge;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static std::mt19937_64 rng(0xC11u);
        path = fs::temp_directory_path() / ("srforge_cli_" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string bin() { return std::string(SR_FORGE_BIN); }

// Shared fixture: a small shape-and-gradient corpus plus reference images,
// an archive, and a short training run all CLI suites can reuse.
struct Workspace {
    TempDir dir;
    std::string corpus_dir, refs_dir, archive, run_dir, ckpt;

    Workspace() {
        corpus_dir = dir.file("corpus");
        refs_dir = dir.file("refs");
        fs::create_directories(corpus_dir);
        fs::create_directories(refs_dir);
        for (uint32_t i = 0; i < 6; ++i) {
            save_image(synth::cel_image(100 + i, 72, 64),
                       corpus_dir + "/img" + std::to_string(i) + ".png");
        }
        for (uint32_t i = 0; i < 2; ++i) {
            save_image(synth::cel_image(900 + i, 48, 40),
                       refs_dir + "/ref" + std::to_string(i) + ".png");
        }
        archive = dir.file("patches.srds");
        REQUIRE(run(bin() + " preprocess --input " + corpus_dir + " --output " + archive +
                    " >/dev/null 2>&1") == 0);
        run_dir = dir.file("run");
        REQUIRE(run(bin() + " train --archive " + archive + " --out-dir " + run_dir +
                    " --epochs 2 --seed 11 >/dev/null 2>&1") == 0);
        ckpt = run_dir + "/checkpoint_epoch_0002.msrc";
        REQUIRE(fs::exists(ckpt));
    }
};

Workspace& workspace() {
    static Workspace ws;
    return ws;
}

} // namespace

TEST_SUITE("usage errors") {
    TEST_CASE("no subcommand, bad flags, and help") {
        CHECK(run(bin() + " >/dev/null 2>&1") == 1);
        CHECK(run(bin() + " frobnicate >/dev/null 2>&1") == 1);
        CHECK(run(bin() + " --help >/dev/null 2>&1") == 0);
        CHECK(run(bin() + " train --help >/dev/null 2>&1") == 0);
        CHECK(run(bin() + " upscale --bogus >/dev/null 2>&1") == 1);
        CHECK(run(bin() + " train >/dev/null 2>&1") == 1); // missing required options
        TempDir dir;
        // Constrained-choice flags reject values outside their set.
        CHECK(run(bin() + " preprocess --input x --output y --degradation lanczos"
                          " >/dev/null 2>&1") == 1);
        CHECK(run(bin() + " upscale --model m --factor 7 a b >/dev/null 2>&1") == 1);
        CHECK(run(bin() + " upscale --model m --mode sideways a b >/dev/null 2>&1") == 1);
    }
}

TEST_SUITE("preprocess command") {
    TEST_CASE("happy path wrote a usable archive") {
        Workspace& ws = workspace();
        CHECK(fs::exists(ws.archive));
        CHECK(fs::file_size(ws.archive) > 1024);
    }

    TEST_CASE("missing and empty directories are I/O failures") {
        TempDir dir;
        CHECK(run(bin() + " preprocess --input " + dir.file("nowhere") + " --output " +
                  dir.file("x.srds") + " >/dev/null 2>&1") == 2);
        const std::string empty = dir.file("empty");
        fs::create_directories(empty);
        CHECK(run(bin() + " preprocess --input " + empty + " --output " + dir.file("x.srds") +
                  " >/dev/null 2>&1") == 2);
    }

    TEST_CASE("unreadable files are skipped with a warning") {
        TempDir dir;
        const std::string corpus = dir.file("corpus");
        fs::create_directories(corpus);
        save_image(synth::cel_image(1, 72, 64), corpus + "/good.png");
        std::ofstream(corpus + "/broken.png", std::ios::binary) << "not a png";
        const std::string stderr_path = dir.file("stderr.txt");
        CHECK(run(bin() + " preprocess --input " + corpus + " --output " +
                  dir.file("out.srds") + " >/dev/null 2>" + stderr_path) == 0);
        const std::string err = slurp(stderr_path);
        CHECK(err.find("broken.png") != std::string::npos);
        CHECK(err.find("skipped") != std::string::npos);
    }

    TEST_CASE("an image smaller than the patch size is a data error") {
        TempDir dir;
        const std::string corpus = dir.file("corpus");
        fs::create_directories(corpus);
        save_image(synth::cel_image(2, 8, 8), corpus + "/tiny.png");
        CHECK(run(bin() + " preprocess --input " + corpus + " --output " +
                  dir.file("out.srds") + " >/dev/null 2>&1") == 3);
    }
}

TEST_SUITE("train command") {
    TEST_CASE("happy path produced checkpoints and a loss log") {
        Workspace& ws = workspace();
        CHECK(fs::exists(ws.run_dir + "/checkpoint_epoch_0001.msrc"));
        CHECK(fs::exists(ws.run_dir + "/checkpoint_epoch_0002.msrc"));
        CHECK(fs::exists(ws.run_dir + "/checkpoint_epoch_0002.msrc.opt"));
        const std::string log = slurp(ws.run_dir + "/loss.csv");
        CHECK(log.rfind("epoch,train_mse,val_mse\n", 0) == 0);
        CHECK(std::count(log.begin(), log.end(), '\n') == 3); // header + 2 epochs
    }

    TEST_CASE("missing archive is I/O, corrupt archive is a format error") {
        TempDir dir;
        CHECK(run(bin() + " train --archive " + dir.file("none.srds") + " --out-dir " +
                  dir.file("r") + " >/dev/null 2>&1") == 2);
        const std::string garbage = dir.file("garbage.srds");
        std::ofstream(garbage, std::ios::binary) << "four";
        CHECK(run(bin() + " train --archive " + garbage + " --out-dir " + dir.file("r") +
                  " >/dev/null 2>&1") == 3);
    }
}

TEST_SUITE("upscale command") {
    TEST_CASE("factor 2 doubles both dimensions") {
        Workspace& ws = workspace();
        const std::string out = ws.dir.file("up.png");
        CHECK(run(bin() + " upscale --model " + ws.ckpt + " --factor 2 " + ws.refs_dir +
                  "/ref0.png " + out + " >/dev/null 2>&1") == 0);
        const RasterImage img = load_image(out);
        CHECK(img.width() == 96);
        CHECK(img.height() == 80);
    }

    TEST_CASE("enhance-only preserves dimensions; double-enlarge quadruples") {
        Workspace& ws = workspace();
        const std::string same = ws.dir.file("same.png");
        CHECK(run(bin() + " upscale --model " + ws.ckpt + " --mode enhance-only " +
                  ws.refs_dir + "/ref0.png " + same + " >/dev/null 2>&1") == 0);
        const RasterImage kept = load_image(same);
        CHECK(kept.width() == 48);
        CHECK(kept.height() == 40);

        const std::string quad = ws.dir.file("quad.png");
        CHECK(run(bin() + " upscale --model " + ws.ckpt + " --mode double-enlarge " +
                  ws.refs_dir + "/ref0.png " + quad + " >/dev/null 2>&1") == 0);
        const RasterImage big = load_image(quad);
        CHECK(big.width() == 192);
        CHECK(big.height() == 160);
    }

    TEST_CASE("missing inputs are I/O, mangled models are format errors") {
        Workspace& ws = workspace();
        TempDir dir;
        CHECK(run(bin() + " upscale --model " + dir.file("no.msrc") + " " + ws.refs_dir +
                  "/ref0.png " + dir.file("o.png") + " >/dev/null 2>&1") == 2);
        const std::string garbage = dir.file("garbage.msrc");
        std::ofstream(garbage, std::ios::binary) << "not a checkpoint";
        CHECK(run(bin() + " upscale --model " + garbage + " " + ws.refs_dir + "/ref0.png " +
                  dir.file("o.png") + " >/dev/null 2>&1") == 3);
        CHECK(run(bin() + " upscale --model " + ws.ckpt + " " + dir.file("no.png") + " " +
                  dir.file("o.png") + " >/dev/null 2>&1") == 2);
    }
}

TEST_SUITE("eval command") {
    TEST_CASE("report covers interpolators and the model at each factor") {
        Workspace& ws = workspace();
        const std::string csv_path = ws.dir.file("report.csv");
        const std::string stdout_path = ws.dir.file("stdout.txt");
        CHECK(run(bin() + " eval --references " + ws.refs_dir + " --model net=" + ws.ckpt +
                  " --factors 2 --csv " + csv_path + " >" + stdout_path + " 2>/dev/null") == 0);
        const std::string csv = slurp(csv_path);
        CHECK(csv.rfind("factor,method,psnr,ssim\n", 0) == 0);
        CHECK(csv.find("2,nearest,") != std::string::npos);
        CHECK(csv.find("2,bilinear,") != std::string::npos);
        CHECK(csv.find("2,bicubic,") != std::string::npos);
        CHECK(csv.find("2,net,") != std::string::npos);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
        const std::string table = slurp(stdout_path);
        CHECK(table.find("psnr") != std::string::npos);
        CHECK(table.find("bicubic") != std::string::npos);
    }

    TEST_CASE("reports are byte-identical across runs and thread counts") {
        Workspace& ws = workspace();
        const std::string a = ws.dir.file("a.csv");
        const std::string b = ws.dir.file("b.csv");
        const std::string c = ws.dir.file("c.csv");
        const std::string base = bin() + " eval --references " + ws.refs_dir +
                                 " --model net=" + ws.ckpt + " --factors 2,3 --csv ";
        CHECK(run(base + a + " >/dev/null 2>&1") == 0);
        CHECK(run(base + b + " >/dev/null 2>&1") == 0);
        CHECK(run("SR_FORGE_THREADS=1 " + base + c + " >/dev/null 2>&1") == 0);
        const std::string ra = slurp(a);
        CHECK(!ra.empty());
        CHECK(ra == slurp(b));
        CHECK(ra == slurp(c));
    }

    TEST_CASE("missing reference directory is an I/O failure") {
        TempDir dir;
        CHECK(run(bin() + " eval --references " + dir.file("nowhere") +
                  " >/dev/null 2>&1") == 2);
    }

    TEST_CASE("a mangled model checkpoint is a format error") {
        Workspace& ws = workspace();
        TempDir dir;
        const std::string garbage = dir.file("garbage.msrc");
        std::ofstream(garbage, std::ios::binary) << "????";
        CHECK(run(bin() + " eval --references " + ws.refs_dir + " --model bad=" + garbage +
                  " --factors 2 >/dev/null 2>&1") == 3);
    }
}
