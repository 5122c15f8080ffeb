#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lrn {

/// Column-major dense matrix. Used for low-rank factors and small eigenproblems.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from_columns(std::span<const std::vector<double>> columns, std::size_t rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    std::span<double> column(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> column(std::size_t j) const noexcept { return {data_.data() + j * rows_, rows_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    DenseMatrix transpose() const;
    double frobenius_norm() const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T
DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);
/// Horizontal concatenation [a | b].
DenseMatrix hconcat(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

/// Singular values in descending order.
std::vector<double> singular_values(const DenseMatrix& a);

}  // namespace lrn
