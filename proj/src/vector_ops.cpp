#include "lrnewton/vector_ops.hpp"

#include <algorithm>
#include <cmath>

#include "lrnewton/errors.hpp"
#include "lrnewton/simd/kernels.hpp"

namespace lrn {

namespace {
void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": sizes " + std::to_string(a) + " and " + std::to_string(b));
    }
}
}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
    require_same_size(x.size(), y.size(), "dot");
    return simd::active_kernels().dot(x.data(), y.data(), x.size());
}

double norm2(std::span<const double> x) {
    // Rescale when the plain sum of squares would overflow or underflow.
    const double big = norm_inf(x);
    if (big == 0.0 || !std::isfinite(big)) return big;
    if (big > 1e150 || big < 1e-150) {
        double s = 0.0;
        for (double v : x) s += (v / big) * (v / big);
        return big * std::sqrt(s);
    }
    return std::sqrt(simd::active_kernels().sum_squares(x.data(), x.size()));
}

double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) {
        if (std::isnan(v)) return v;
        m = std::max(m, std::abs(v));
    }
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same_size(x.size(), y.size(), "axpy");
    simd::active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

Vector combine(double alpha, std::span<const double> x, double beta, std::span<const double> y) {
    require_same_size(x.size(), y.size(), "combine");
    Vector out(y.begin(), y.end());
    simd::active_kernels().axpby(alpha, x.data(), beta, out.data(), out.size());
    return out;
}

bool all_finite(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace lrn
