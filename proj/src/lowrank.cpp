#include "lrnewton/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eigen_interop.hpp"
#include "lrnewton/errors.hpp"

namespace lrn {

LowRankFactors::LowRankFactors(std::size_t rows, std::size_t cols) : u_(rows, 0), v_(cols, 0) {}

LowRankFactors::LowRankFactors(DenseMatrix u, DenseMatrix v) : u_(std::move(u)), v_(std::move(v)) {
    if (u_.cols() != v_.cols()) {
        throw DimensionMismatch("LowRankFactors: U has " + std::to_string(u_.cols()) + " columns, V has " +
                                std::to_string(v_.cols()));
    }
}

Vector LowRankFactors::column(std::size_t j) const {
    if (j >= cols()) throw InvalidArgument("LowRankFactors::column: index out of range");
    Vector coeff(rank());
    for (std::size_t k = 0; k < rank(); ++k) coeff[k] = v_(j, k);
    return multiply(u_, coeff);
}

DenseMatrix LowRankFactors::to_dense() const {
    if (rank() == 0) return DenseMatrix(rows(), cols());
    return multiply_transposed(u_, v_);
}

LowRankFactors LowRankFactors::scaled(double alpha) const {
    DenseMatrix v = v_;
    for (double& e : v.data()) e *= alpha;
    return {u_, std::move(v)};
}

double LowRankFactors::frobenius_norm() const {
    if (rank() == 0) return 0.0;
    // ||U V^T||_F^2 = trace((U^T U)(V^T V))
    const auto u = detail::view(u_);
    const auto v = detail::view(v_);
    const detail::EigenMat gu = u.transpose() * u;
    const detail::EigenMat gv = v.transpose() * v;
    return std::sqrt(std::max(0.0, gu.cwiseProduct(gv).sum()));
}

namespace {

struct ThinQr {
    detail::EigenMat q;
    detail::EigenMat r;
};

ThinQr thin_qr(const DenseMatrix& a) {
    const auto m = detail::view(a);
    const Eigen::Index k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<detail::EigenMat> qr(m);
    ThinQr out;
    out.q = qr.householderQ() * detail::EigenMat::Identity(m.rows(), k);
    out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    return out;
}

}  // namespace

LowRankFactors truncate(const LowRankFactors& x, std::size_t max_rank, double tol) {
    if (max_rank == 0) throw InvalidArgument("truncate: max_rank must be at least 1");
    if (tol < 0.0) throw InvalidArgument("truncate: tol must be non-negative");
    if (x.rank() == 0) return LowRankFactors(x.rows(), x.cols());

    const ThinQr qu = thin_qr(x.u());
    const ThinQr qv = thin_qr(x.v());
    const detail::EigenMat core = qu.r * qv.r.transpose();
    Eigen::JacobiSVD<detail::EigenMat> svd(core, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();

    const double floor = 16.0 * std::numeric_limits<double>::epsilon() *
                         static_cast<double>(std::max(core.rows(), core.cols())) * x.u().frobenius_norm() *
                         x.v().frobenius_norm();
    std::size_t keep = 0;
    if (sigma.size() > 0 && sigma(0) > floor) {
        const double cut = std::max(tol * sigma(0), floor);
        while (keep < static_cast<std::size_t>(sigma.size()) && keep < max_rank &&
               sigma(static_cast<Eigen::Index>(keep)) > cut) {
            ++keep;
        }
        keep = std::max<std::size_t>(keep, 1);
    }
    if (keep == 0) return LowRankFactors(x.rows(), x.cols());

    const auto r = static_cast<Eigen::Index>(keep);
    const detail::EigenMat u = qu.q * svd.matrixU().leftCols(r);
    const detail::EigenMat v = qv.q * (svd.matrixV().leftCols(r) * sigma.head(r).asDiagonal());
    return {detail::to_dense(u), detail::to_dense(v)};
}

LowRankFactors lr_add(const LowRankFactors& x, const LowRankFactors& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimensionMismatch("lr_add: outer dimensions differ");
    }
    return {hconcat(x.u(), y.u()), hconcat(x.v(), y.v())};
}

LowRankFactors lr_sub(const LowRankFactors& x, const LowRankFactors& y) { return lr_add(x, y.scaled(-1.0)); }

}  // namespace lrn
