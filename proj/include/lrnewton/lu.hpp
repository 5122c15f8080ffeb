#pragma once

#include <memory>
#include <span>
#include <vector>

#include "lrnewton/dense.hpp"
#include "lrnewton/sparse.hpp"

namespace lrn {

/// LU factorization with partial (row) pivoting of a square sparse matrix,
/// stored in band form sized from the matrix's lower/upper bandwidth. A
/// general sparse pattern is accepted; wide patterns simply get a wide band.
///
/// Read-only after construction; concurrent solves are safe.
class Factorization {
public:
    /// Throws SingularMatrix (carrying the 0-based pivot column) on a zero pivot.
    explicit Factorization(const SparseMatrix& a);

    std::size_t size() const noexcept { return n_; }
    /// The matrix that was factored.
    const SparseMatrix& source() const noexcept { return *source_; }

    Vector solve(std::span<const double> b) const;
    void solve_in_place(std::span<double> b) const;

private:
    double& band(std::size_t i, std::size_t j) { return band_[(kv_ + i - j) + j * ldab_]; }
    double band(std::size_t i, std::size_t j) const { return band_[(kv_ + i - j) + j * ldab_]; }

    std::shared_ptr<const SparseMatrix> source_;
    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::size_t kv_ = 0;  // ku + kl: upper bandwidth of U after pivoting
    std::size_t ldab_ = 0;
    std::vector<double> band_;
    std::vector<std::size_t> pivots_;
};

Factorization factorize(const SparseMatrix& a);
Vector solve(const Factorization& f, std::span<const double> b);
/// Column-wise solve of A X = B.
DenseMatrix solve_multi(const Factorization& f, const DenseMatrix& b);

}  // namespace lrn
