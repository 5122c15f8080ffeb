#pragma once

#include <Eigen/Dense>

#include "lrnewton/dense.hpp"

namespace lrn::detail {

using EigenMat = Eigen::MatrixXd;

inline Eigen::Map<const EigenMat> view(const DenseMatrix& a) {
    return {a.data().data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

inline Eigen::Map<EigenMat> view(DenseMatrix& a) {
    return {a.data().data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

template <typename Derived>
DenseMatrix to_dense(const Eigen::MatrixBase<Derived>& m) {
    DenseMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    view(out) = m;
    return out;
}

}  // namespace lrn::detail
