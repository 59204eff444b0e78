#pragma once

#include <cstddef>

namespace srforge {

// C (M x N) = A (M x K) * B (K x N), all row-major with explicit leading
// dimensions. With accumulate set, the product is added onto C instead.
//
// Every output element is reduced strictly in ascending k order, by exactly
// one worker, so results are bit-identical for any thread count. Keep it that
// way: the training loop's reproducibility guarantee rests on this function.
template <typename T>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const T* a, std::size_t lda,
             const T* b, std::size_t ldb,
             T* c, std::size_t ldc, bool accumulate);

// dst (cols x rows) = src (rows x cols) transposed, both dense row-major.
template <typename T>
void transpose(const T* src, std::size_t rows, std::size_t cols, T* dst);

} // namespace srforge
