#include "lrnewton/simd/kernels.hpp"

namespace lrn::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_squares_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpby_scalar(double alpha, const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

void csr_spmv_scalar(std::size_t n_rows, const std::size_t* row_offsets, const std::size_t* col_indices,
                     const double* values, const double* x, double* y) {
    for (std::size_t i = 0; i < n_rows; ++i) {
        double s = 0.0;
        for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) s += values[p] * x[col_indices[p]];
        y[i] = s;
    }
}

constexpr KernelTable kScalar{
    "scalar", dot_scalar, sum_squares_scalar, axpy_scalar, axpby_scalar, csr_spmv_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace lrn::simd
