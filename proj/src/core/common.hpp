#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace srforge {

// Error classes surfaced through the C API as srf_status values.
enum class ErrorCode {
    InvalidArg,
    Io,
    NotFound,
    UnsupportedFormat,
    CorruptFile,
    BadMagic,
    VersionMismatch,
    Truncated,
    ShapeMismatch,
    DimensionMismatch,
    ChannelMismatch,
    EmptyInput,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

// Runs body(i) for i in [0, n). Splits the range into contiguous chunks,
// one per worker. Every index is computed independently, so results do not
// depend on the number of workers. Worker count is capped by the
// SR_FORGE_THREADS environment variable.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Chunked variant: body(begin, end) over disjoint ranges.
void parallel_for_range(std::size_t n,
                        const std::function<void(std::size_t, std::size_t)>& body);

std::size_t worker_count();

} // namespace srforge
