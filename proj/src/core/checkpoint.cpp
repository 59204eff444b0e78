#include "core/checkpoint.hpp"

#include "core/binio.hpp"

#include <cstring>

namespace srforge {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'R', 'C'};
constexpr uint32_t kVersion = 1;

constexpr char kOptMagic[4] = {'S', 'R', 'O', 'P'};
constexpr uint32_t kOptVersion = 1;

// Guards against absurd allocations when reading a damaged file.
constexpr uint32_t kMaxLayers = 256;
constexpr uint32_t kMaxDim = 1u << 20;

void expect_magic(BinReader& r, const char (&magic)[4]) {
    char buf[4];
    r.bytes(buf, 4);
    if (std::memcmp(buf, magic, 4) != 0) {
        fail(ErrorCode::BadMagic, "not a recognized model file: " + r.path());
    }
}

NetworkSpec read_spec(BinReader& r) {
    NetworkSpec spec;
    spec.input_channels = r.u32();
    const uint32_t layer_count = r.u32();
    if (spec.input_channels == 0 || spec.input_channels > kMaxDim || layer_count == 0 ||
        layer_count > kMaxLayers) {
        fail(ErrorCode::CorruptFile, "implausible architecture header: " + r.path());
    }
    spec.layers.resize(layer_count);
    for (LayerSpec& ls : spec.layers) {
        const uint8_t kind = r.u8();
        ls.filters = r.u32();
        ls.kernel = r.u32();
        ls.stride = r.u32();
        const uint8_t act = r.u8();
        ls.leaky_slope = r.f32();
        const uint8_t bias = r.u8();
        if (kind > 1 || act > 1 || bias > 1 || ls.filters == 0 || ls.filters > kMaxDim ||
            ls.kernel == 0 || ls.kernel > kMaxDim) {
            fail(ErrorCode::CorruptFile, "implausible layer description: " + r.path());
        }
        ls.kind = static_cast<LayerKind>(kind);
        ls.activation = static_cast<Activation>(act);
        ls.bias = bias != 0;
    }
    return spec;
}

void write_spec(BinWriter& w, const NetworkSpec& spec) {
    w.u32(spec.input_channels);
    w.u32(static_cast<uint32_t>(spec.layers.size()));
    for (const LayerSpec& ls : spec.layers) {
        w.u8(static_cast<uint8_t>(ls.kind));
        w.u32(ls.filters);
        w.u32(ls.kernel);
        w.u32(ls.stride);
        w.u8(static_cast<uint8_t>(ls.activation));
        w.f32(ls.leaky_slope);
        w.u8(ls.bias ? 1 : 0);
    }
}

// Weight tensor dimensions implied by the architecture: the outer axis pair
// is (filters, in) for forward convolutions and (in, filters) for transposed
// ones, matching the in-memory layout.
void expected_weight_dims(const NetworkSpec& spec, std::size_t l, uint32_t dims[4]) {
    const LayerSpec& ls = spec.layers[l];
    const uint32_t cin = spec.layer_input_channels(l);
    if (ls.kind == LayerKind::Conv) {
        dims[0] = ls.filters;
        dims[1] = cin;
    } else {
        dims[0] = cin;
        dims[1] = ls.filters;
    }
    dims[2] = ls.kernel;
    dims[3] = ls.kernel;
}

} // namespace

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
    validate(cp.spec);
    if (cp.params.size() != cp.spec.layers.size()) {
        fail(ErrorCode::ShapeMismatch, "checkpoint parameter count does not match its layers");
    }
    BinWriter w(path);
    w.bytes(kMagic, 4);
    w.u32(kVersion);
    write_spec(w, cp.spec);
    w.u32(cp.epoch);
    w.u32(static_cast<uint32_t>(cp.loss_history.size()));
    w.f32_array(cp.loss_history.data(), cp.loss_history.size());
    for (std::size_t l = 0; l < cp.params.size(); ++l) {
        uint32_t dims[4];
        expected_weight_dims(cp.spec, l, dims);
        const std::size_t count =
            static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] * dims[3];
        if (cp.params[l].w.size() != count ||
            cp.params[l].b.size() != (cp.spec.layers[l].bias ? cp.spec.layers[l].filters : 0)) {
            fail(ErrorCode::ShapeMismatch, "checkpoint parameters do not match the layer shape");
        }
        for (uint32_t d : dims) w.u32(d);
        w.f32_array(cp.params[l].w.data(), count);
        w.u32(static_cast<uint32_t>(cp.params[l].b.size()));
        w.f32_array(cp.params[l].b.data(), cp.params[l].b.size());
    }
    w.finish();
}

Checkpoint load_checkpoint(const std::string& path) {
    BinReader r(path);
    expect_magic(r, kMagic);
    const uint32_t version = r.u32();
    if (version != kVersion) {
        fail(ErrorCode::VersionMismatch,
             "unsupported model file version " + std::to_string(version) + ": " + path);
    }
    Checkpoint cp;
    cp.spec = read_spec(r);
    validate(cp.spec);
    cp.epoch = r.u32();
    const uint32_t history = r.u32();
    if (history > (1u << 24)) {
        fail(ErrorCode::CorruptFile, "implausible loss history length: " + path);
    }
    cp.loss_history.resize(history);
    r.f32_array(cp.loss_history.data(), history);

    cp.params.resize(cp.spec.layers.size());
    for (std::size_t l = 0; l < cp.params.size(); ++l) {
        uint32_t expect[4];
        expected_weight_dims(cp.spec, l, expect);
        uint32_t dims[4];
        for (uint32_t& d : dims) d = r.u32();
        if (dims[0] != expect[0] || dims[1] != expect[1] || dims[2] != expect[2] ||
            dims[3] != expect[3]) {
            fail(ErrorCode::ShapeMismatch, "stored weights do not match the architecture: " + path);
        }
        const std::size_t count =
            static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] * dims[3];
        cp.params[l].w.resize(count);
        r.f32_array(cp.params[l].w.data(), count);
        const uint32_t blen = r.u32();
        if (blen != (cp.spec.layers[l].bias ? cp.spec.layers[l].filters : 0)) {
            fail(ErrorCode::ShapeMismatch, "stored biases do not match the architecture: " + path);
        }
        cp.params[l].b.resize(blen);
        r.f32_array(cp.params[l].b.data(), blen);
    }
    return cp;
}

void save_optimizer_state(const OptimizerState<float>& state, const NetworkSpec& spec,
                          const std::string& path) {
    if (state.m.size() != spec.layers.size() || state.v.size() != spec.layers.size()) {
        fail(ErrorCode::ShapeMismatch, "optimizer state does not match the architecture");
    }
    BinWriter w(path);
    w.bytes(kOptMagic, 4);
    w.u32(kOptVersion);
    w.u64(state.step);
    w.u32(static_cast<uint32_t>(state.m.size()));
    auto write_params = [&w](const LayerParams<float>& p) {
        w.u32(static_cast<uint32_t>(p.w.size()));
        w.f32_array(p.w.data(), p.w.size());
        w.u32(static_cast<uint32_t>(p.b.size()));
        w.f32_array(p.b.data(), p.b.size());
    };
    for (std::size_t l = 0; l < state.m.size(); ++l) {
        write_params(state.m[l]);
        write_params(state.v[l]);
    }
    w.finish();
}

OptimizerState<float> load_optimizer_state(const std::string& path, const NetworkSpec& spec) {
    BinReader r(path);
    expect_magic(r, kOptMagic);
    const uint32_t version = r.u32();
    if (version != kOptVersion) {
        fail(ErrorCode::VersionMismatch,
             "unsupported optimizer file version " + std::to_string(version) + ": " + path);
    }
    OptimizerState<float> state;
    state.step = r.u64();
    const uint32_t layers = r.u32();
    if (layers != spec.layers.size()) {
        fail(ErrorCode::ShapeMismatch, "optimizer state does not match the architecture: " + path);
    }
    state.m.resize(layers);
    state.v.resize(layers);
    auto read_params = [&r, &path](LayerParams<float>& p, std::size_t expect_w,
                                   std::size_t expect_b) {
        const uint32_t wlen = r.u32();
        if (wlen != expect_w) {
            fail(ErrorCode::ShapeMismatch,
                 "optimizer moments do not match the layer shape: " + path);
        }
        p.w.resize(wlen);
        r.f32_array(p.w.data(), wlen);
        const uint32_t blen = r.u32();
        if (blen != expect_b) {
            fail(ErrorCode::ShapeMismatch,
                 "optimizer moments do not match the layer shape: " + path);
        }
        p.b.resize(blen);
        r.f32_array(p.b.data(), blen);
    };
    for (std::size_t l = 0; l < layers; ++l) {
        const LayerSpec& ls = spec.layers[l];
        const std::size_t wcount = static_cast<std::size_t>(ls.filters) *
                                   spec.layer_input_channels(l) * ls.kernel * ls.kernel;
        const std::size_t bcount = ls.bias ? ls.filters : 0;
        read_params(state.m[l], wcount, bcount);
        read_params(state.v[l], wcount, bcount);
    }
    return state;
}

} // namespace srforge
