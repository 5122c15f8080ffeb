#include "lrnewton/dense.hpp"

#include <cmath>

#include "eigen_interop.hpp"
#include "lrnewton/errors.hpp"

namespace lrn {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (data_.size() != rows_ * cols_) throw DimensionMismatch("DenseMatrix: entry count does not match shape");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_columns(std::span<const std::vector<double>> columns, std::size_t rows) {
    DenseMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) throw DimensionMismatch("DenseMatrix::from_columns: ragged columns");
        std::copy(columns[j].begin(), columns[j].end(), m.column(j).begin());
    }
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
    return t;
}

double DenseMatrix::frobenius_norm() const { return detail::view(*this).norm(); }

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
    return detail::to_dense(detail::view(a) * detail::view(b));
}

DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw DimensionMismatch("multiply_transposed: inner dimensions differ");
    return detail::to_dense(detail::view(a) * detail::view(b).transpose());
}

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw DimensionMismatch("multiply: vector length differs from column count");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const double xj = x[j];
        const auto col = a.column(j);
        for (std::size_t i = 0; i < a.rows(); ++i) y[i] += col[i] * xj;
    }
    return y;
}

DenseMatrix hconcat(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("hconcat: row counts differ");
    std::vector<double> data;
    data.reserve(a.data().size() + b.data().size());
    data.insert(data.end(), a.data().begin(), a.data().end());
    data.insert(data.end(), b.data().begin(), b.data().end());
    return DenseMatrix(a.rows(), a.cols() + b.cols(), std::move(data));
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("subtract: shapes differ");
    DenseMatrix out = a;
    for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] -= b.data()[k];
    return out;
}

std::vector<double> singular_values(const DenseMatrix& a) {
    if (a.empty()) return {};
    Eigen::JacobiSVD<detail::EigenMat> svd(detail::view(a));
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

}  // namespace lrn
