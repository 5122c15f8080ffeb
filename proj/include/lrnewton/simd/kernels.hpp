#pragma once

// Inner-loop kernels with a scalar reference implementation and vectorized
// variants. The variant is chosen once at first use from the CPU features
// (override with LRN_SIMD=scalar in the environment).

#include <cstddef>
#include <cstdint>

namespace lrn::simd {

struct KernelTable {
    const char* name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_squares)(const double* x, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // y = alpha * x + beta * y
    void (*axpby)(double alpha, const double* x, double beta, double* y, std::size_t n);
    // y = A * x for CSR A
    void (*csr_spmv)(std::size_t n_rows, const std::size_t* row_offsets, const std::size_t* col_indices,
                     const double* values, const double* x, double* y);
};

const KernelTable& scalar_kernels() noexcept;

/// AVX2+FMA kernels, or nullptr when they were not compiled in or the CPU lacks them.
const KernelTable* avx2_kernels() noexcept;

/// The table used by the library.
const KernelTable& active_kernels() noexcept;

}  // namespace lrn::simd
