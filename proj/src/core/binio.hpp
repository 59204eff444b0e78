#pragma once

#include "core/common.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>

namespace srforge {

// Little-endian scalar I/O over a binary stream. All multi-byte values are
// written least significant byte first regardless of host order.

class BinWriter {
public:
    explicit BinWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
        if (!out_) fail(ErrorCode::Io, "cannot open for writing: " + path);
    }

    void bytes(const void* data, std::size_t n) {
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    }
    void u8(uint8_t v) { bytes(&v, 1); }
    void u32(uint32_t v) {
        uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                        static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
        bytes(b, 4);
    }
    void u64(uint64_t v) {
        u32(static_cast<uint32_t>(v));
        u32(static_cast<uint32_t>(v >> 32));
    }
    void f32(float v) { u32(std::bit_cast<uint32_t>(v)); }
    void f32_array(const float* v, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) f32(v[i]);
    }

    void finish() {
        out_.flush();
        if (!out_) fail(ErrorCode::Io, "write failed: " + path_);
    }

private:
    std::ofstream out_;
    std::string path_;
};

class BinReader {
public:
    explicit BinReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) fail(ErrorCode::NotFound, "cannot open: " + path);
    }

    void bytes(void* data, std::size_t n) {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            fail(ErrorCode::Truncated, "unexpected end of file: " + path_);
        }
    }
    uint8_t u8() {
        uint8_t v;
        bytes(&v, 1);
        return v;
    }
    uint32_t u32() {
        uint8_t b[4];
        bytes(b, 4);
        return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
               (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
    }
    uint64_t u64() {
        const uint64_t lo = u32();
        return lo | (static_cast<uint64_t>(u32()) << 32);
    }
    float f32() { return std::bit_cast<float>(u32()); }
    void f32_array(float* v, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) v[i] = f32();
    }

    const std::string& path() const { return path_; }

private:
    std::ifstream in_;
    std::string path_;
};

} // namespace srforge
