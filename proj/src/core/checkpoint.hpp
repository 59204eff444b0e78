#pragma once

#include "core/net.hpp"

#include <string>
#include <vector>

namespace srforge {

// Trained model snapshot. The on-disk layout is little-endian:
//   "MSRC", format version, architecture block, epochs completed,
//   per-epoch training loss history, then per-layer weight and bias arrays.
struct Checkpoint {
    NetworkSpec spec;
    uint32_t epoch = 0;
    std::vector<float> loss_history;
    std::vector<LayerParams<float>> params;
};

void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Optimizer moments live next to the checkpoint (conventionally "<path>.opt")
// so a resumed run continues the exact same trajectory. Loading validates the
// shapes against the given architecture.
void save_optimizer_state(const OptimizerState<float>& state, const NetworkSpec& spec,
                          const std::string& path);
OptimizerState<float> load_optimizer_state(const std::string& path, const NetworkSpec& spec);

} // namespace srforge
