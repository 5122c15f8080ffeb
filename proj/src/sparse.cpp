#include "lrnewton/sparse.hpp"

#include <algorithm>
#include <string>

#include "lrnewton/errors.hpp"
#include "lrnewton/simd/kernels.hpp"

namespace lrn {

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : n_rows_(n_rows), n_cols_(n_cols), row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)), values_(std::move(values)) {
    if (row_offsets_.size() != n_rows_ + 1) throw InvalidArgument("CSR: row_offsets must have n_rows+1 entries");
    if (row_offsets_.front() != 0 || row_offsets_.back() != col_indices_.size()) {
        throw InvalidArgument("CSR: row_offsets must start at 0 and end at nnz");
    }
    if (col_indices_.size() != values_.size()) throw InvalidArgument("CSR: col_indices and values differ in length");
    for (std::size_t i = 0; i < n_rows_; ++i) {
        if (row_offsets_[i] > row_offsets_[i + 1]) throw InvalidArgument("CSR: row_offsets must be non-decreasing");
        for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
            if (col_indices_[p] >= n_cols_) {
                throw InvalidArgument("CSR: column index out of range in row " + std::to_string(i));
            }
            if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1]) {
                throw InvalidArgument("CSR: column indices not strictly increasing in row " + std::to_string(i));
            }
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols, std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
        if (t.row >= n_rows || t.col >= n_cols) throw InvalidArgument("triplet index out of range");
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    std::vector<std::size_t> offsets(n_rows + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    cols.reserve(triplets.size());
    vals.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const auto& t = triplets[k];
        if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
            vals.back() += t.value;
            continue;
        }
        cols.push_back(t.col);
        vals.push_back(t.value);
        ++offsets[t.row + 1];
    }
    for (std::size_t i = 0; i < n_rows; ++i) offsets[i + 1] += offsets[i];
    return SparseMatrix(n_rows, n_cols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<std::size_t> offsets(n + 1);
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::zero(std::size_t n_rows, std::size_t n_cols) {
    return SparseMatrix(n_rows, n_cols, std::vector<std::size_t>(n_rows + 1, 0), {}, {});
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& a) {
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (a(i, j) != 0.0) t.push_back({i, j, a(i, j)});
        }
    }
    return from_triplets(a.rows(), a.cols(), std::move(t));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= n_rows_ || j >= n_cols_) throw InvalidArgument("SparseMatrix::at: index out of range");
    auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_cols_ || y.size() != n_rows_) {
        throw DimensionMismatch("spmv: matrix is " + std::to_string(n_rows_) + "x" + std::to_string(n_cols_) +
                                ", x has " + std::to_string(x.size()) + ", y has " + std::to_string(y.size()));
    }
    simd::active_kernels().csr_spmv(n_rows_, row_offsets_.data(), col_indices_.data(), values_.data(), x.data(),
                                    y.data());
}

SparseMatrix SparseMatrix::scaled(double alpha) const {
    SparseMatrix out = *this;
    for (double& v : out.values_) v *= alpha;
    return out;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(n_rows_, n_cols_);
    for (std::size_t i = 0; i < n_rows_; ++i) {
        for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) d(i, col_indices_[p]) = values_[p];
    }
    return d;
}

std::size_t SparseMatrix::lower_bandwidth() const noexcept {
    std::size_t bw = 0;
    for (std::size_t i = 0; i < n_rows_; ++i) {
        if (row_offsets_[i] < row_offsets_[i + 1] && col_indices_[row_offsets_[i]] < i) {
            bw = std::max(bw, i - col_indices_[row_offsets_[i]]);
        }
    }
    return bw;
}

std::size_t SparseMatrix::upper_bandwidth() const noexcept {
    std::size_t bw = 0;
    for (std::size_t i = 0; i < n_rows_; ++i) {
        if (row_offsets_[i] < row_offsets_[i + 1] && col_indices_[row_offsets_[i + 1] - 1] > i) {
            bw = std::max(bw, col_indices_[row_offsets_[i + 1] - 1] - i);
        }
    }
    return bw;
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
    Vector y(a.n_rows());
    a.multiply(x, y);
    return y;
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b) {
    if (b.rows() != a.n_cols()) throw DimensionMismatch("spmm: inner dimensions differ");
    DenseMatrix out(a.n_rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) a.multiply(b.column(j), out.column(j));
    return out;
}

SparseMatrix linear_combination(std::initializer_list<ScaledMatrix> terms) {
    if (terms.size() == 0) throw InvalidArgument("linear_combination: no terms");
    const std::size_t rows = terms.begin()->matrix.n_rows();
    const std::size_t cols = terms.begin()->matrix.n_cols();
    for (const auto& t : terms) {
        if (t.matrix.n_rows() != rows || t.matrix.n_cols() != cols) {
            throw DimensionMismatch("linear_combination: shapes differ");
        }
    }
    std::vector<std::size_t> offsets(rows + 1, 0);
    std::vector<std::size_t> out_cols;
    std::vector<double> out_vals;
    // Row-wise k-way merge; the inputs are canonical so the output is too.
    std::vector<std::size_t> cursor(terms.size());
    for (std::size_t i = 0; i < rows; ++i) {
        std::size_t k = 0;
        for (const auto& t : terms) cursor[k++] = t.matrix.row_offsets()[i];
        while (true) {
            std::size_t next = cols;
            k = 0;
            for (const auto& t : terms) {
                if (cursor[k] < t.matrix.row_offsets()[i + 1]) next = std::min(next, t.matrix.col_indices()[cursor[k]]);
                ++k;
            }
            if (next == cols) break;
            double v = 0.0;
            k = 0;
            for (const auto& t : terms) {
                if (cursor[k] < t.matrix.row_offsets()[i + 1] && t.matrix.col_indices()[cursor[k]] == next) {
                    v += t.scale * t.matrix.values()[cursor[k]];
                    ++cursor[k];
                }
                ++k;
            }
            out_cols.push_back(next);
            out_vals.push_back(v);
        }
        offsets[i + 1] = out_cols.size();
    }
    return SparseMatrix(rows, cols, std::move(offsets), std::move(out_cols), std::move(out_vals));
}

}  // namespace lrn
