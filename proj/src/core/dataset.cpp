#include "core/dataset.hpp"

#include <cstring>
#include <filesystem>
#include <limits>

#include <json.hpp>

#include "core/binio.hpp"
#include "core/common.hpp"

namespace srforge {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'D', 'S'};
constexpr uint32_t kVersion = 1;
constexpr uint32_t kMaxPatchSize = 4096;
constexpr uint32_t kMaxChannels = 16;

} // namespace

PatchArchive::PatchArchive(uint32_t patch_size, uint32_t channels)
    : patch_size_(patch_size), channels_(channels) {
    if (patch_size == 0 || channels == 0) {
        fail(ErrorCode::InvalidArg, "archive: patch size and channels must be positive");
    }
}

std::size_t PatchArchive::pair_count() const {
    return values_per_patch() == 0 ? 0 : lr_.size() / values_per_patch();
}

void PatchArchive::append_pair(const RasterImage& lr, const RasterImage& hr) {
    for (const RasterImage* side : {&lr, &hr}) {
        if (side->width() != patch_size_ || side->height() != patch_size_) {
            fail(ErrorCode::DimensionMismatch, "archive: patch does not match patch size");
        }
        if (side->channels() != channels_) {
            fail(ErrorCode::ChannelMismatch, "archive: patch channel count mismatch");
        }
    }
    const auto planar_append = [&](const RasterImage& img, std::vector<float>& dst) {
        for (uint32_t c = 0; c < channels_; ++c) {
            for (uint32_t y = 0; y < patch_size_; ++y) {
                for (uint32_t x = 0; x < patch_size_; ++x) {
                    dst.push_back(img.at(x, y, c));
                }
            }
        }
    };
    planar_append(lr, lr_);
    planar_append(hr, hr_);
}

void save_archive(const PatchArchive& archive, const std::string& path) {
    if (archive.pair_count() == 0) {
        fail(ErrorCode::EmptyInput, "archive: no patch pairs to save");
    }
    if (archive.manifest.empty()) {
        fail(ErrorCode::InvalidArg, "archive: manifest must not be empty");
    }

    nlohmann::json entries = nlohmann::json::array();
    for (const ArchiveEntry& e : archive.manifest) {
        entries.push_back({{"file", e.file}, {"degradation", e.degradation}, {"pairs", e.pairs}});
    }
    const std::string manifest = nlohmann::json{{"entries", entries}}.dump();
    if (manifest.size() > std::numeric_limits<uint32_t>::max()) {
        fail(ErrorCode::InvalidArg, "archive: manifest too large");
    }

    BinWriter w(path);
    w.bytes(kMagic, 4);
    w.u32(kVersion);
    w.u32(archive.patch_size());
    w.u32(archive.channels());
    w.u64(archive.pair_count());
    const std::size_t vpp = archive.values_per_patch();
    for (std::size_t i = 0; i < archive.pair_count(); ++i) {
        w.f32_array(archive.lr_patch(i), vpp);
        w.f32_array(archive.hr_patch(i), vpp);
    }
    w.u32(static_cast<uint32_t>(manifest.size()));
    w.bytes(manifest.data(), manifest.size());
    w.finish();
}

PatchArchive load_archive(const std::string& path) {
    BinReader r(path);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        fail(ErrorCode::BadMagic, "not a patch archive: " + path);
    }
    const uint32_t version = r.u32();
    if (version != kVersion) {
        fail(ErrorCode::VersionMismatch,
             "unsupported archive version " + std::to_string(version) + ": " + path);
    }
    const uint32_t patch_size = r.u32();
    const uint32_t channels = r.u32();
    if (patch_size == 0 || patch_size > kMaxPatchSize || channels == 0 ||
        channels > kMaxChannels) {
        fail(ErrorCode::CorruptFile, "implausible archive header: " + path);
    }
    const uint64_t count = r.u64();
    const uint64_t vpp = static_cast<uint64_t>(channels) * patch_size * patch_size;

    // A forged count would otherwise drive a huge allocation before the read
    // could fail; bound it by what the file can actually hold.
    std::error_code ec;
    const uint64_t fsize = std::filesystem::file_size(path, ec);
    if (!ec && (count > fsize / 8 / (vpp ? vpp : 1) + 1)) {
        fail(ErrorCode::CorruptFile, "archive pair count exceeds file size: " + path);
    }
    if (count == 0) {
        fail(ErrorCode::CorruptFile, "archive holds no patch pairs: " + path);
    }

    PatchArchive archive(patch_size, channels);
    RasterImage lr(patch_size, patch_size, channels);
    RasterImage hr(patch_size, patch_size, channels);
    for (uint64_t i = 0; i < count; ++i) {
        // Read planar data straight through the image's interleaved setter so
        // append_pair keeps a single conversion path.
        for (RasterImage* side : {&lr, &hr}) {
            for (uint32_t c = 0; c < channels; ++c) {
                for (uint32_t y = 0; y < patch_size; ++y) {
                    for (uint32_t x = 0; x < patch_size; ++x) {
                        side->at(x, y, c) = r.f32();
                    }
                }
            }
        }
        archive.append_pair(lr, hr);
    }

    const uint32_t mlen = r.u32();
    std::string manifest(mlen, '\0');
    r.bytes(manifest.data(), mlen);
    nlohmann::json doc = nlohmann::json::parse(manifest, nullptr, false);
    if (doc.is_discarded() || !doc.contains("entries") || !doc["entries"].is_array()) {
        fail(ErrorCode::CorruptFile, "archive manifest is not valid JSON: " + path);
    }
    for (const auto& e : doc["entries"]) {
        if (!e.contains("file") || !e.contains("degradation") || !e.contains("pairs")) {
            fail(ErrorCode::CorruptFile, "archive manifest entry is malformed: " + path);
        }
        archive.manifest.push_back(ArchiveEntry{e["file"].get<std::string>(),
                                                e["degradation"].get<std::string>(),
                                                e["pairs"].get<uint64_t>()});
    }
    if (archive.manifest.empty()) {
        fail(ErrorCode::CorruptFile, "archive manifest has no entries: " + path);
    }
    return archive;
}

} // namespace srforge
