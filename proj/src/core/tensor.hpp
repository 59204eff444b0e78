#pragma once

#include "core/common.hpp"

#include <cstdint>
#include <vector>

namespace srforge {

// Dense NCHW tensor. Training runs in float; the double instantiation exists
// so gradients can be checked against finite differences without drowning in
// rounding noise.
template <typename T>
class TensorT {
public:
    TensorT() = default;
    TensorT(uint32_t n, uint32_t c, uint32_t h, uint32_t w)
        : n_(n), c_(c), h_(h), w_(w),
          data_(static_cast<std::size_t>(n) * c * h * w, T(0)) {
        if (n == 0 || c == 0 || h == 0 || w == 0) {
            fail(ErrorCode::InvalidArg, "tensor dimensions must be positive");
        }
    }

    uint32_t n() const { return n_; }
    uint32_t c() const { return c_; }
    uint32_t h() const { return h_; }
    uint32_t w() const { return w_; }

    std::size_t plane_values() const { return static_cast<std::size_t>(h_) * w_; }
    std::size_t item_values() const { return plane_values() * c_; }
    std::size_t value_count() const { return data_.size(); }

    T* item(uint32_t i) { return data_.data() + static_cast<std::size_t>(i) * item_values(); }
    const T* item(uint32_t i) const {
        return data_.data() + static_cast<std::size_t>(i) * item_values();
    }

    T at(uint32_t n, uint32_t c, uint32_t y, uint32_t x) const {
        return data_[((static_cast<std::size_t>(n) * c_ + c) * h_ + y) * w_ + x];
    }
    T& at(uint32_t n, uint32_t c, uint32_t y, uint32_t x) {
        return data_[((static_cast<std::size_t>(n) * c_ + c) * h_ + y) * w_ + x];
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_shape(const TensorT& o) const {
        return n_ == o.n_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
    }

private:
    uint32_t n_ = 0, c_ = 0, h_ = 0, w_ = 0;
    std::vector<T> data_;
};

using Tensor = TensorT<float>;

} // namespace srforge
