#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "lrnewton/dense.hpp"
#include "lrnewton/vector_ops.hpp"

namespace lrn {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed sparse row matrix in canonical form: strictly increasing
/// column indices within each row. Immutable after construction.
class SparseMatrix {
public:
    SparseMatrix() = default;
    /// Validates the CSR invariants; throws InvalidArgument on violation.
    SparseMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_offsets,
                 std::vector<std::size_t> col_indices, std::vector<double> values);

    /// Duplicates are summed. Explicit zeros are kept as stored entries.
    static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols, std::vector<Triplet> triplets);
    static SparseMatrix identity(std::size_t n);
    static SparseMatrix zero(std::size_t n_rows, std::size_t n_cols);
    static SparseMatrix from_dense(const DenseMatrix& a);

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_cols() const noexcept { return n_cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    bool is_square() const noexcept { return n_rows_ == n_cols_; }

    std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
    std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Entry (i, j); zero when not stored.
    double at(std::size_t i, std::size_t j) const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    SparseMatrix scaled(double alpha) const;
    DenseMatrix to_dense() const;

    /// Lower and upper bandwidth of the stored pattern.
    std::size_t lower_bandwidth() const noexcept;
    std::size_t upper_bandwidth() const noexcept;

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

/// y = A x.
Vector spmv(const SparseMatrix& a, std::span<const double> x);

/// A * B for sparse A and dense B, column by column.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b);

struct ScaledMatrix {
    double scale;
    const SparseMatrix& matrix;
};

/// sum_t scale_t * matrix_t over matrices of equal shape; the result pattern
/// is the union of the input patterns.
SparseMatrix linear_combination(std::initializer_list<ScaledMatrix> terms);

}  // namespace lrn
