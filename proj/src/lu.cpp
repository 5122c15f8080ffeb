#include "lrnewton/lu.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lrnewton/errors.hpp"

namespace lrn {

Factorization::Factorization(const SparseMatrix& a)
    : source_(std::make_shared<const SparseMatrix>(a)), n_(a.n_rows()) {
    if (!a.is_square()) {
        throw DimensionMismatch("factorize: matrix is " + std::to_string(a.n_rows()) + "x" +
                                std::to_string(a.n_cols()) + ", not square");
    }
    if (!all_finite(a.values())) throw NonFinite("factorize: matrix has non-finite entries", 0);
    kl_ = a.lower_bandwidth();
    ku_ = a.upper_bandwidth();
    kv_ = kl_ + ku_;
    ldab_ = 2 * kl_ + ku_ + 1;
    band_.assign(ldab_ * n_, 0.0);
    pivots_.resize(n_);

    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t p = a.row_offsets()[i]; p < a.row_offsets()[i + 1]; ++p) band(i, a.col_indices()[p]) = a.values()[p];
    }

    std::size_t ju = 0;  // last column touched by U so far
    for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t km = std::min(kl_, n_ - 1 - j);
        std::size_t jp = 0;
        double best = std::abs(band(j, j));
        for (std::size_t i = 1; i <= km; ++i) {
            const double v = std::abs(band(j + i, j));
            if (v > best) {
                best = v;
                jp = i;
            }
        }
        pivots_[j] = j + jp;
        if (best == 0.0) throw SingularMatrix(j);

        ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
        if (jp != 0) {
            for (std::size_t c = j; c <= ju; ++c) std::swap(band(j, c), band(j + jp, c));
        }
        if (km > 0) {
            const double inv = 1.0 / band(j, j);
            for (std::size_t i = 1; i <= km; ++i) band(j + i, j) *= inv;
            for (std::size_t c = j + 1; c <= ju; ++c) {
                const double u = band(j, c);
                if (u == 0.0) continue;
                for (std::size_t i = 1; i <= km; ++i) band(j + i, c) -= band(j + i, j) * u;
            }
        }
    }
}

void Factorization::solve_in_place(std::span<double> b) const {
    if (b.size() != n_) {
        throw DimensionMismatch("solve: factorization has size " + std::to_string(n_) + ", right-hand side " +
                                std::to_string(b.size()));
    }
    for (std::size_t j = 0; j < n_; ++j) {
        if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
        const std::size_t km = std::min(kl_, n_ - 1 - j);
        const double bj = b[j];
        if (bj == 0.0) continue;
        for (std::size_t i = 1; i <= km; ++i) b[j + i] -= band(j + i, j) * bj;
    }
    for (std::size_t j = n_; j-- > 0;) {
        b[j] /= band(j, j);
        const double bj = b[j];
        if (bj == 0.0) continue;
        const std::size_t first = j > kv_ ? j - kv_ : 0;
        for (std::size_t i = first; i < j; ++i) b[i] -= band(i, j) * bj;
    }
}

Vector Factorization::solve(std::span<const double> b) const {
    Vector x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

Factorization factorize(const SparseMatrix& a) { return Factorization(a); }

Vector solve(const Factorization& f, std::span<const double> b) { return f.solve(b); }

DenseMatrix solve_multi(const Factorization& f, const DenseMatrix& b) {
    if (b.rows() != f.size()) {
        throw DimensionMismatch("solve_multi: right-hand side has " + std::to_string(b.rows()) + " rows, expected " +
                                std::to_string(f.size()));
    }
    DenseMatrix x = b;
    for (std::size_t j = 0; j < x.cols(); ++j) f.solve_in_place(x.column(j));
    return x;
}

}  // namespace lrn
