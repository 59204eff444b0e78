#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/image.hpp"

namespace srforge {

// One corpus image's contribution to an archive: where the patches came from
// and how the low-resolution side was produced.
struct ArchiveEntry {
    std::string file;
    std::string degradation;
    uint64_t pairs = 0;
};

// In-memory set of aligned low/high-resolution training patches. Patches are
// stored planar ([channel][y][x]) so they can feed the network directly.
class PatchArchive {
  public:
    PatchArchive() = default;
    PatchArchive(uint32_t patch_size, uint32_t channels);

    uint32_t patch_size() const { return patch_size_; }
    uint32_t channels() const { return channels_; }
    std::size_t pair_count() const;
    std::size_t values_per_patch() const {
        return static_cast<std::size_t>(channels_) * patch_size_ * patch_size_;
    }

    const float* lr_patch(std::size_t i) const { return lr_.data() + i * values_per_patch(); }
    const float* hr_patch(std::size_t i) const { return hr_.data() + i * values_per_patch(); }
    float* lr_patch(std::size_t i) { return lr_.data() + i * values_per_patch(); }
    float* hr_patch(std::size_t i) { return hr_.data() + i * values_per_patch(); }

    // Converts from the image's interleaved layout; both sides must be square
    // patch_size x patch_size with the archive's channel count.
    void append_pair(const RasterImage& lr, const RasterImage& hr);

    std::vector<ArchiveEntry> manifest;

  private:
    uint32_t patch_size_ = 0;
    uint32_t channels_ = 0;
    std::vector<float> lr_;
    std::vector<float> hr_;
};

// Binary archive with a trailing JSON manifest. Round trips are bit-exact.
void save_archive(const PatchArchive& archive, const std::string& path);
PatchArchive load_archive(const std::string& path);

} // namespace srforge
