#pragma once

#include <cstddef>
#include <span>

#include "lrnewton/dense.hpp"
#include "lrnewton/vector_ops.hpp"

namespace lrn {

/// A matrix held as U * V^T with U (rows x r) and V (cols x r).
class LowRankFactors {
public:
    LowRankFactors() = default;
    /// Rank-0 representation of a rows x cols zero matrix.
    LowRankFactors(std::size_t rows, std::size_t cols);
    LowRankFactors(DenseMatrix u, DenseMatrix v);

    std::size_t rows() const noexcept { return u_.rows(); }
    std::size_t cols() const noexcept { return v_.rows(); }
    std::size_t rank() const noexcept { return u_.cols(); }

    const DenseMatrix& u() const noexcept { return u_; }
    const DenseMatrix& v() const noexcept { return v_; }

    /// Column j of U * V^T.
    Vector column(std::size_t j) const;
    DenseMatrix to_dense() const;
    LowRankFactors scaled(double alpha) const;
    double frobenius_norm() const;

private:
    DenseMatrix u_;
    DenseMatrix v_;
};

/// Recompression: thin QR of both factors, SVD of the small core, keep the
/// leading singular triplets with sigma_j > tol * sigma_1 (at most max_rank).
/// Singular values at rounding level of the factor norms are dropped as zero.
/// The result has orthonormal U; V carries the singular values.
LowRankFactors truncate(const LowRankFactors& x, std::size_t max_rank, double tol);

/// X + Y by factor concatenation; rank(X) + rank(Y), no recompression.
LowRankFactors lr_add(const LowRankFactors& x, const LowRankFactors& y);

/// X - Y, same rules as lr_add.
LowRankFactors lr_sub(const LowRankFactors& x, const LowRankFactors& y);

}  // namespace lrn
