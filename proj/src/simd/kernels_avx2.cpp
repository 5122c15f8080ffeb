#include <immintrin.h>

#include "lrnewton/simd/kernels.hpp"

namespace lrn::simd::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_squares_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpby_avx2(double alpha, const double* x, double beta, double* y, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    const __m256d b = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d by = _mm256_mul_pd(b, _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), by));
    }
    for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

// Rows of the reference model hold three entries, so the gather path only
// pays off on longer rows; short rows take the scalar loop.
void csr_spmv_avx2(std::size_t n_rows, const std::size_t* row_offsets, const std::size_t* col_indices,
                   const double* values, const double* x, double* y) {
    static_assert(sizeof(std::size_t) == sizeof(long long));
    for (std::size_t i = 0; i < n_rows; ++i) {
        std::size_t p = row_offsets[i];
        const std::size_t end = row_offsets[i + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; p + 4 <= end; p += 4) {
            __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col_indices + p));
            __m256d xv = _mm256_i64gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + p), xv, acc);
        }
        double s = hsum(acc);
        for (; p < end; ++p) s += values[p] * x[col_indices[p]];
        y[i] = s;
    }
}

}  // namespace

extern const KernelTable kAvx2Table{
    "avx2", dot_avx2, sum_squares_avx2, axpy_avx2, axpby_avx2, csr_spmv_avx2,
};

}  // namespace lrn::simd::detail
