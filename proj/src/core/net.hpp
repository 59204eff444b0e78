#pragma once

#include "core/tensor.hpp"

#include <cstdint>
#include <vector>

namespace srforge {

enum class LayerKind : uint8_t { Conv = 0, ConvTranspose = 1 };
enum class Activation : uint8_t { LeakyRelu = 0, Sigmoid = 1 };

struct LayerSpec {
    LayerKind kind = LayerKind::Conv;
    uint32_t filters = 1;
    uint32_t kernel = 3;
    uint32_t stride = 1; // the engine supports stride 1 only
    Activation activation = Activation::LeakyRelu;
    float leaky_slope = 0.3f;
    bool bias = true;
};

struct NetworkSpec {
    uint32_t input_channels = 1;
    std::vector<LayerSpec> layers;

    uint32_t output_channels() const { return layers.back().filters; }
    uint32_t layer_input_channels(std::size_t index) const {
        return index == 0 ? input_channels : layers[index - 1].filters;
    }

    // Six-layer enhancement network: two 5x5 feature extractors, a 3x3
    // bottleneck, two transposed 3x3 reconstruction layers, and a 1x1
    // projection with a sigmoid output.
    static NetworkSpec msrcnn(uint32_t channels = 1, float slope = 0.3f);

    // Classic three-layer baseline: 9x9 extraction, 3x3 mapping, 5x5
    // reconstruction, sigmoid output, single channel.
    static NetworkSpec srcnn(float slope = 0.3f);
};

// Throws on shapes the engine cannot run (empty, even kernels, stride != 1).
void validate(const NetworkSpec& spec);

enum class OptimizerKind : uint8_t { Adam = 0, Sgd = 1 };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 0.003;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

template <typename T>
struct LayerParams {
    std::vector<T> w; // Conv: [filters][in][k][k]; ConvTranspose: [in][filters][k][k]
    std::vector<T> b; // [filters], empty when the layer has no bias
};

template <typename T>
struct OptimizerState {
    uint64_t step = 0;
    std::vector<LayerParams<T>> m;
    std::vector<LayerParams<T>> v;
};

template <typename T>
class NetworkT {
public:
    explicit NetworkT(NetworkSpec spec);

    const NetworkSpec& spec() const { return spec_; }
    std::vector<LayerParams<T>>& params() { return params_; }
    const std::vector<LayerParams<T>>& params() const { return params_; }

    // Uniform(-a, a) weights with a^2 = 6 / (fan_in + fan_out), zero biases.
    // The draw order is fixed, so one seed pins every parameter.
    void init_glorot(uint64_t seed);

    TensorT<T> forward(const TensorT<T>& input) const;

    // Mean squared error of forward(input) against target in the [0, 1]
    // value domain.
    T loss(const TensorT<T>& input, const TensorT<T>& target) const;

    // Analytic gradients of loss() for every parameter; returns the loss.
    // grads is resized to mirror params().
    T compute_gradients(const TensorT<T>& input, const TensorT<T>& target,
                        std::vector<LayerParams<T>>& grads) const;

    // One optimizer update over the batch; returns the pre-step batch loss.
    T train_step(const TensorT<T>& input, const TensorT<T>& target,
                 const OptimizerConfig& config, OptimizerState<T>& state);

private:
    NetworkSpec spec_;
    std::vector<LayerParams<T>> params_;
};

using Network = NetworkT<float>;

extern template class NetworkT<float>;
extern template class NetworkT<double>;

} // namespace srforge
