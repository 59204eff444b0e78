#include "core/net.hpp"

#include "core/conv.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace srforge {

namespace {

// Portable uniform draw: 53 mantissa bits straight from the engine, so the
// value sequence is identical on every platform for a given seed.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void activation_forward(Activation act, float slope, T* v, std::size_t n) {
    if (act == Activation::LeakyRelu) {
        const T s = static_cast<T>(slope);
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] < T(0)) v[i] *= s;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = T(1) / (T(1) + std::exp(-v[i]));
        }
    }
}

// Multiplies the incoming gradient by the activation derivative, recovered
// from the forward output: leaky slopes preserve sign, and the logistic
// derivative is y * (1 - y).
template <typename T>
void activation_backward(Activation act, float slope, const T* y, T* g, std::size_t n) {
    if (act == Activation::LeakyRelu) {
        const T s = static_cast<T>(slope);
        for (std::size_t i = 0; i < n; ++i) {
            if (y[i] < T(0)) g[i] *= s;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            g[i] *= y[i] * (T(1) - y[i]);
        }
    }
}

template <typename T>
void resize_like_params(const NetworkSpec& spec, std::vector<LayerParams<T>>& out) {
    out.resize(spec.layers.size());
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& ls = spec.layers[l];
        const uint32_t cin = spec.layer_input_channels(l);
        out[l].w.assign(static_cast<std::size_t>(ls.filters) * cin * ls.kernel * ls.kernel,
                        T(0));
        out[l].b.assign(ls.bias ? ls.filters : 0, T(0));
    }
}

} // namespace

NetworkSpec NetworkSpec::msrcnn(uint32_t channels, float slope) {
    NetworkSpec spec;
    spec.input_channels = channels;
    spec.layers = {
        {LayerKind::Conv, 64, 5, 1, Activation::LeakyRelu, slope, true},
        {LayerKind::Conv, 64, 5, 1, Activation::LeakyRelu, slope, true},
        {LayerKind::Conv, 16, 3, 1, Activation::LeakyRelu, slope, true},
        {LayerKind::ConvTranspose, 32, 3, 1, Activation::LeakyRelu, slope, true},
        {LayerKind::ConvTranspose, 32, 3, 1, Activation::LeakyRelu, slope, true},
        {LayerKind::Conv, channels, 1, 1, Activation::Sigmoid, slope, true},
    };
    return spec;
}

NetworkSpec NetworkSpec::srcnn(float slope) {
    NetworkSpec spec;
    spec.input_channels = 1;
    spec.layers = {
        {LayerKind::Conv, 128, 9, 1, Activation::LeakyRelu, slope, true},
        {LayerKind::Conv, 64, 3, 1, Activation::LeakyRelu, slope, true},
        {LayerKind::Conv, 1, 5, 1, Activation::Sigmoid, slope, true},
    };
    return spec;
}

void validate(const NetworkSpec& spec) {
    if (spec.layers.empty()) {
        fail(ErrorCode::InvalidArg, "network needs at least one layer");
    }
    if (spec.input_channels == 0) {
        fail(ErrorCode::InvalidArg, "network input channels must be positive");
    }
    for (const LayerSpec& ls : spec.layers) {
        if (ls.filters == 0) {
            fail(ErrorCode::InvalidArg, "layer filter count must be positive");
        }
        if (ls.kernel == 0 || ls.kernel % 2 == 0) {
            fail(ErrorCode::InvalidArg, "layer kernels must be odd");
        }
        if (ls.stride != 1) {
            fail(ErrorCode::InvalidArg, "only stride 1 is supported");
        }
    }
}

template <typename T>
NetworkT<T>::NetworkT(NetworkSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    resize_like_params(spec_, params_);
}

template <typename T>
void NetworkT<T>::init_glorot(uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < spec_.layers.size(); ++l) {
        const LayerSpec& ls = spec_.layers[l];
        const double kk = static_cast<double>(ls.kernel) * ls.kernel;
        const double fan_in = spec_.layer_input_channels(l) * kk;
        const double fan_out = ls.filters * kk;
        const double a = std::sqrt(6.0 / (fan_in + fan_out));
        for (T& w : params_[l].w) {
            w = static_cast<T>((uniform01(rng) * 2.0 - 1.0) * a);
        }
        for (T& b : params_[l].b) b = T(0);
    }
}

template <typename T>
TensorT<T> NetworkT<T>::forward(const TensorT<T>& input) const {
    if (input.c() != spec_.input_channels) {
        fail(ErrorCode::ChannelMismatch, "input channels do not match the network");
    }
    const uint32_t h = input.h(), w = input.w();
    TensorT<T> out(input.n(), spec_.output_channels(), h, w);

    std::vector<T> cur, next;
    for (uint32_t i = 0; i < input.n(); ++i) {
        cur.assign(input.item(i), input.item(i) + input.item_values());
        for (std::size_t l = 0; l < spec_.layers.size(); ++l) {
            const LayerSpec& ls = spec_.layers[l];
            const uint32_t cin = spec_.layer_input_channels(l);
            next.resize(static_cast<std::size_t>(ls.filters) * h * w);
            const T* bias = params_[l].b.empty() ? nullptr : params_[l].b.data();
            if (ls.kind == LayerKind::Conv) {
                conv2d_forward<T>(cur.data(), cin, h, w, params_[l].w.data(), bias, ls.filters,
                                  ls.kernel, next.data());
            } else {
                conv2d_transpose_forward<T>(cur.data(), cin, h, w, params_[l].w.data(), bias,
                                            ls.filters, ls.kernel, next.data());
            }
            activation_forward<T>(ls.activation, ls.leaky_slope, next.data(), next.size());
            cur.swap(next);
        }
        std::copy(cur.begin(), cur.end(), out.item(i));
    }
    return out;
}

template <typename T>
T NetworkT<T>::loss(const TensorT<T>& input, const TensorT<T>& target) const {
    const TensorT<T> y = forward(input);
    if (!y.same_shape(target)) {
        fail(ErrorCode::DimensionMismatch, "target shape does not match the network output");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.value_count(); ++i) {
        const double d = static_cast<double>(y.data()[i]) - target.data()[i];
        acc += d * d;
    }
    return static_cast<T>(acc / y.value_count());
}

template <typename T>
T NetworkT<T>::compute_gradients(const TensorT<T>& input, const TensorT<T>& target,
                                 std::vector<LayerParams<T>>& grads) const {
    if (input.c() != spec_.input_channels) {
        fail(ErrorCode::ChannelMismatch, "input channels do not match the network");
    }
    if (target.n() != input.n() || target.c() != spec_.output_channels() ||
        target.h() != input.h() || target.w() != input.w()) {
        fail(ErrorCode::DimensionMismatch, "target shape does not match the network output");
    }
    const uint32_t h = input.h(), w = input.w();
    const std::size_t layer_count = spec_.layers.size();
    resize_like_params(spec_, grads);

    // Per-item scratch, reused across the batch.
    std::vector<std::vector<T>> acts(layer_count); // post-activation outputs
    std::vector<LayerParams<T>> item_grads;
    resize_like_params(spec_, item_grads);
    std::vector<T> g, g_prev;

    double loss_acc = 0.0;
    const std::size_t out_values =
        static_cast<std::size_t>(spec_.output_channels()) * h * w;
    // d(loss)/d(y) = 2 (y - t) / (batch * values-per-item)
    const double gscale = 2.0 / (static_cast<double>(input.n()) * out_values);

    for (uint32_t i = 0; i < input.n(); ++i) {
        const T* x0 = input.item(i);
        for (std::size_t l = 0; l < layer_count; ++l) {
            const LayerSpec& ls = spec_.layers[l];
            const uint32_t cin = spec_.layer_input_channels(l);
            const T* src = l == 0 ? x0 : acts[l - 1].data();
            acts[l].resize(static_cast<std::size_t>(ls.filters) * h * w);
            const T* bias = params_[l].b.empty() ? nullptr : params_[l].b.data();
            if (ls.kind == LayerKind::Conv) {
                conv2d_forward<T>(src, cin, h, w, params_[l].w.data(), bias, ls.filters,
                                  ls.kernel, acts[l].data());
            } else {
                conv2d_transpose_forward<T>(src, cin, h, w, params_[l].w.data(), bias,
                                            ls.filters, ls.kernel, acts[l].data());
            }
            activation_forward<T>(ls.activation, ls.leaky_slope, acts[l].data(),
                                  acts[l].size());
        }

        const T* y = acts[layer_count - 1].data();
        const T* t = target.item(i);
        g.resize(out_values);
        for (std::size_t j = 0; j < out_values; ++j) {
            const double d = static_cast<double>(y[j]) - t[j];
            loss_acc += d * d;
            g[j] = static_cast<T>(gscale * d);
        }

        for (std::size_t l = layer_count; l-- > 0;) {
            const LayerSpec& ls = spec_.layers[l];
            const uint32_t cin = spec_.layer_input_channels(l);
            const T* src = l == 0 ? x0 : acts[l - 1].data();
            activation_backward<T>(ls.activation, ls.leaky_slope, acts[l].data(), g.data(),
                                   g.size());
            T* gx = nullptr;
            if (l > 0) {
                g_prev.resize(static_cast<std::size_t>(cin) * h * w);
                gx = g_prev.data();
            }
            T* gb = item_grads[l].b.empty() ? nullptr : item_grads[l].b.data();
            if (ls.kind == LayerKind::Conv) {
                conv2d_backward<T>(src, cin, h, w, params_[l].w.data(), ls.filters, ls.kernel,
                                   g.data(), gx, item_grads[l].w.data(), gb);
            } else {
                conv2d_transpose_backward<T>(src, cin, h, w, params_[l].w.data(), ls.filters,
                                             ls.kernel, g.data(), gx, item_grads[l].w.data(),
                                             gb);
            }
            if (l > 0) g.swap(g_prev);
        }

        // Items are reduced in batch order; worker count never changes this.
        for (std::size_t l = 0; l < layer_count; ++l) {
            for (std::size_t j = 0; j < grads[l].w.size(); ++j) {
                grads[l].w[j] += item_grads[l].w[j];
            }
            for (std::size_t j = 0; j < grads[l].b.size(); ++j) {
                grads[l].b[j] += item_grads[l].b[j];
            }
        }
    }
    return static_cast<T>(loss_acc / (static_cast<double>(input.n()) * out_values));
}

template <typename T>
T NetworkT<T>::train_step(const TensorT<T>& input, const TensorT<T>& target,
                          const OptimizerConfig& config, OptimizerState<T>& state) {
    std::vector<LayerParams<T>> grads;
    const T batch_loss = compute_gradients(input, target, grads);

    if (config.kind == OptimizerKind::Sgd) {
        const T lr = static_cast<T>(config.learning_rate);
        for (std::size_t l = 0; l < params_.size(); ++l) {
            for (std::size_t j = 0; j < params_[l].w.size(); ++j) {
                params_[l].w[j] -= lr * grads[l].w[j];
            }
            for (std::size_t j = 0; j < params_[l].b.size(); ++j) {
                params_[l].b[j] -= lr * grads[l].b[j];
            }
        }
        state.step += 1;
        return batch_loss;
    }

    if (state.m.empty()) {
        resize_like_params(spec_, state.m);
        resize_like_params(spec_, state.v);
    }
    state.step += 1;
    const T b1 = static_cast<T>(config.beta1);
    const T b2 = static_cast<T>(config.beta2);
    const T eps = static_cast<T>(config.epsilon);
    const T lr = static_cast<T>(config.learning_rate);
    const T bc1 = static_cast<T>(1.0 - std::pow(config.beta1, static_cast<double>(state.step)));
    const T bc2 = static_cast<T>(1.0 - std::pow(config.beta2, static_cast<double>(state.step)));

    auto update = [&](std::vector<T>& p, std::vector<T>& m, std::vector<T>& v,
                      const std::vector<T>& grad) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            m[j] = b1 * m[j] + (T(1) - b1) * grad[j];
            v[j] = b2 * v[j] + (T(1) - b2) * grad[j] * grad[j];
            const T mhat = m[j] / bc1;
            const T vhat = v[j] / bc2;
            p[j] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    };
    for (std::size_t l = 0; l < params_.size(); ++l) {
        update(params_[l].w, state.m[l].w, state.v[l].w, grads[l].w);
        update(params_[l].b, state.m[l].b, state.v[l].b, grads[l].b);
    }
    return batch_loss;
}

template class NetworkT<float>;
template class NetworkT<double>;

} // namespace srforge
