#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lrnewton/dense.hpp"

namespace lrn {

/// Largest order handled by the dense eigensolver.
inline constexpr std::size_t kDenseEigThreshold = 2000;

/// All eigenvalues of a square dense matrix (Hessenberg QR), unordered.
/// Throws NotConverged when the QR iteration hits its cap.
std::vector<std::complex<double>> dense_eigs(const DenseMatrix& a, std::size_t dense_threshold = kDenseEigThreshold);

using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct ArnoldiOptions {
    std::size_t krylov_dim = 30;
    std::uint64_t seed = 42;
};

/// Ritz values of an n x n operator from an Arnoldi factorization with
/// modified Gram-Schmidt plus one reorthogonalization pass. The start vector
/// is drawn from a fixed-seed generator (all ones if that draw is zero).
std::vector<std::complex<double>> arnoldi_ritz_values(const LinearOperator& op, std::size_t n,
                                                      const ArnoldiOptions& options = {});

}  // namespace lrn
