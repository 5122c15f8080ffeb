#include "lrnewton/eigs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "eigen_interop.hpp"
#include "lrnewton/errors.hpp"
#include "lrnewton/vector_ops.hpp"

namespace lrn {

std::vector<std::complex<double>> dense_eigs(const DenseMatrix& a, std::size_t dense_threshold) {
    if (a.rows() != a.cols()) throw DimensionMismatch("dense_eigs: matrix is not square");
    if (a.rows() > dense_threshold) {
        throw InvalidArgument("dense_eigs: order " + std::to_string(a.rows()) + " exceeds dense threshold " +
                              std::to_string(dense_threshold));
    }
    if (a.rows() == 0) return {};
    if (!all_finite(a.data())) throw NonFinite("dense_eigs: matrix has non-finite entries", 0);
    Eigen::EigenSolver<detail::EigenMat> solver(detail::view(a), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NotConverged("dense_eigs: QR iteration did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<std::complex<double>> arnoldi_ritz_values(const LinearOperator& op, std::size_t n,
                                                      const ArnoldiOptions& options) {
    if (n == 0) return {};
    const std::size_t m = std::min(options.krylov_dim, n);
    if (m == 0) throw InvalidArgument("arnoldi: krylov_dim must be at least 1");

    std::vector<Vector> basis;
    basis.reserve(m + 1);
    Vector start(n);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : start) v = dist(rng);
    double nrm = norm2(start);
    if (nrm == 0.0) {
        std::fill(start.begin(), start.end(), 1.0);
        nrm = norm2(start);
    }
    for (double& v : start) v /= nrm;
    basis.push_back(std::move(start));

    DenseMatrix h(m, m);
    std::size_t steps = m;
    Vector w(n);
    for (std::size_t j = 0; j < m; ++j) {
        op(basis[j], w);
        if (!all_finite(w)) throw NonFinite("arnoldi: operator produced non-finite values", j);
        const double w_norm0 = norm2(w);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i <= j; ++i) {
                const double c = dot(basis[i], w);
                h(i, j) += c;
                axpy(-c, basis[i], w);
            }
        }
        const double beta = norm2(w);
        if (j + 1 == m) break;
        if (beta <= 1e-14 * std::max(w_norm0, 1e-300)) {
            steps = j + 1;  // invariant subspace found
            break;
        }
        h(j + 1, j) = beta;
        Vector next(w);
        for (double& v : next) v /= beta;
        basis.push_back(std::move(next));
    }

    DenseMatrix hk(steps, steps);
    for (std::size_t j = 0; j < steps; ++j)
        for (std::size_t i = 0; i < steps; ++i) hk(i, j) = h(i, j);
    return dense_eigs(hk);
}

}  // namespace lrn
