#include "lrnewton/matrixeq.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>

#include "lrnewton/errors.hpp"

namespace lrn {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DenseMatrix scale_rows(const DenseMatrix& v, std::span<const double> d) {
    DenseMatrix out = v;
    for (std::size_t j = 0; j < out.cols(); ++j) {
        auto col = out.column(j);
        for (std::size_t i = 0; i < out.rows(); ++i) col[i] *= d[i];
    }
    return out;
}

LowRankFactors precondition(const Factorization& f, const LowRankFactors& x) {
    return {solve_multi(f, x.u()), x.v()};
}

}  // namespace

SylvesterOperator::SylvesterOperator(SparseMatrix a0, SparseMatrix a1, SparseMatrix conv, double rho_f,
                                     std::vector<double> shifts)
    : a0_(std::move(a0)), a1_(std::move(a1)), conv_(std::move(conv)), rho_f_(rho_f), shifts_(std::move(shifts)) {
    if (!a0_.is_square() || a1_.n_rows() != a0_.n_rows() || a1_.n_cols() != a0_.n_cols() ||
        conv_.n_rows() != a0_.n_rows() || conv_.n_cols() != a0_.n_cols()) {
        throw DimensionMismatch("SylvesterOperator: A0, A1 and C must be square of one size");
    }
    if (shifts_.empty()) throw InvalidArgument("SylvesterOperator: empty subset");
    fixed_ = linear_combination({{1.0, a0_}, {rho_f_, conv_}});
}

SparseMatrix SylvesterOperator::system_matrix(double shift) const {
    return linear_combination({{1.0, a0_}, {shift, a1_}, {rho_f_, conv_}});
}

DenseMatrix SylvesterOperator::apply_dense(const DenseMatrix& s) const {
    if (s.rows() != size() || s.cols() != num_columns()) throw DimensionMismatch("SylvesterOperator: shape mismatch");
    DenseMatrix out(size(), num_columns());
    Vector tmp(size());
    for (std::size_t j = 0; j < s.cols(); ++j) {
        fixed_.multiply(s.column(j), out.column(j));
        a1_.multiply(s.column(j), tmp);
        axpy(shifts_[j], tmp, out.column(j));
    }
    return out;
}

SylvesterOperator make_subset_operator(const ParametricProblem& p, const SubsetShifts& subset,
                                       std::span<const double> x_med) {
    return SylvesterOperator(p.a0(), p.a1(), assemble_conv(p, x_med), p.rho_f(), subset.shifts);
}

LowRankFactors build_rhs(const ParametricProblem& p, std::span<const double> x_med, std::span<const double> v) {
    if (v.empty()) throw InvalidArgument("build_rhs: empty parameter vector");
    const std::size_t n = p.n_dof();
    const double anchor = v[upper_median_index(v.size()) - 1];
    Vector g0 = residual(p, x_med, anchor);
    const Vector a1x = spmv(p.a1(), x_med);
    DenseMatrix u(n, 2);
    DenseMatrix w(v.size(), 2);
    for (std::size_t i = 0; i < n; ++i) {
        u(i, 0) = -g0[i];
        u(i, 1) = -a1x[i];
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        w(i, 0) = 1.0;
        w(i, 1) = v[i] - anchor;
    }
    return {std::move(u), std::move(w)};
}

LowRankFactors apply(const SylvesterOperator& op, const LowRankFactors& s) {
    if (s.rows() != op.size() || s.cols() != op.num_columns()) {
        throw DimensionMismatch("apply: factors are " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                                ", operator expects " + std::to_string(op.size()) + "x" +
                                std::to_string(op.num_columns()));
    }
    if (s.rank() == 0) return LowRankFactors(s.rows(), s.cols());
    DenseMatrix u = hconcat(spmm(op.fixed_part(), s.u()), spmm(op.a1(), s.u()));
    DenseMatrix v = hconcat(s.v(), scale_rows(s.v(), op.shifts()));
    return {std::move(u), std::move(v)};
}

Factorization mean_preconditioner(const SylvesterOperator& op, std::span<const double> v,
                                  PreconditionerAnchor anchor) {
    if (v.empty()) throw InvalidArgument("mean_preconditioner: empty parameter vector");
    if (v.size() != op.num_columns()) throw DimensionMismatch("mean_preconditioner: parameter count differs");
    const auto shifts = op.shifts();
    double anchor_shift = 0.0;
    if (anchor == PreconditionerAnchor::Mean) {
        anchor_shift = std::accumulate(shifts.begin(), shifts.end(), 0.0) / static_cast<double>(shifts.size());
    } else {
        anchor_shift = shifts[upper_median_index(shifts.size()) - 1];
    }
    return Factorization(op.system_matrix(anchor_shift));
}

SpectrumEstimate estimate_spectrum(const SylvesterOperator& op, const Factorization& precond,
                                   std::span<const double> v, double safety) {
    SpectrumOptions options;
    options.safety = safety;
    return estimate_spectrum(op, precond, v, options);
}

SpectrumEstimate estimate_spectrum(const SylvesterOperator& op, const Factorization& precond,
                                   std::span<const double> v, const SpectrumOptions& options) {
    if (v.empty()) throw InvalidArgument("estimate_spectrum: empty parameter vector");
    if (v.size() != op.num_columns()) throw DimensionMismatch("estimate_spectrum: parameter count differs");
    if (!(options.safety >= 1.0)) throw InvalidArgument("estimate_spectrum: safety must be at least 1");
    if (precond.size() != op.size()) throw DimensionMismatch("estimate_spectrum: preconditioner size differs");

    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const std::size_t extremes[2] = {static_cast<std::size_t>(lo_it - v.begin()),
                                     static_cast<std::size_t>(hi_it - v.begin())};

    SpectrumEstimate est;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t idx : extremes) {
        const SparseMatrix a = op.system_matrix(op.shifts()[idx]);
        std::vector<std::complex<double>> eigs;
        if (a == precond.source()) {
            eigs.assign(1, {1.0, 0.0});  // P^{-1} P = I
        } else if (op.size() <= options.dense_threshold) {
            eigs = dense_eigs(solve_multi(precond, a.to_dense()), options.dense_threshold);
        } else {
            est.krylov = true;
            const LinearOperator pa = [&](std::span<const double> x, std::span<double> y) {
                a.multiply(x, y);
                precond.solve_in_place(y);
            };
            eigs = arnoldi_ritz_values(pa, op.size(), options.arnoldi);
        }
        for (const auto& e : eigs) {
            lo = std::min(lo, e.real());
            hi = std::max(hi, e.real());
        }
    }
    est.lambda_lo = lo;
    est.lambda_hi = hi;
    est.d = 0.5 * (hi + lo);
    est.c = options.safety * 0.5 * (hi - lo);
    if (!(lo > 0.0) || !(est.c < est.d)) throw IndefinitePencil(lo, hi);
    return est;
}

void ChebyshevConfig::validate() const {
    if (!(c >= 0.0 && c < d)) throw InvalidArgument("Chebyshev interval needs 0 <= c < d");
    if (max_rank < 1) throw InvalidArgument("Chebyshev max_rank must be at least 1");
    if (!(trunc_tol >= 0.0)) throw InvalidArgument("Chebyshev trunc_tol must be non-negative");
    if (!(residual_tol >= 0.0)) throw InvalidArgument("Chebyshev residual_tol must be non-negative");
}

SubsetSolveResult chebyshev_solve(const SylvesterOperator& op, const Factorization& precond,
                                  const LowRankFactors& rhs, const ChebyshevConfig& cfg) {
    cfg.validate();
    if (rhs.rows() != op.size() || rhs.cols() != op.num_columns()) {
        throw DimensionMismatch("chebyshev_solve: right-hand side shape differs from the operator");
    }
    if (precond.size() != op.size()) throw DimensionMismatch("chebyshev_solve: preconditioner size differs");

    const auto trunc = [&cfg](const LowRankFactors& x) { return truncate(x, cfg.max_rank, cfg.trunc_tol); };
    const LowRankFactors b = trunc(rhs);
    const auto precond_residual = [&](const LowRankFactors& s) {
        const LowRankFactors as = trunc(apply(op, s));
        return trunc(precondition(precond, trunc(lr_sub(b, as))));
    };

    SubsetSolveResult out;
    out.d = cfg.d;
    out.c = cfg.c;
    out.s_hat = LowRankFactors(op.size(), op.num_columns());

    LowRankFactors z = trunc(precondition(precond, b));
    const double norm0 = z.frobenius_norm();
    if (norm0 == 0.0) {
        out.converged = true;
        return out;
    }

    const bool richardson = cfg.c == 0.0;
    const double sigma = richardson ? 0.0 : cfg.d / cfg.c;
    double rho_prev = richardson ? 0.0 : 1.0 / sigma;
    double best = 1.0;
    LowRankFactors delta;
    for (std::size_t j = 1; j <= cfg.max_iter; ++j) {
        if (j == 1 || richardson) {
            delta = z.scaled(1.0 / cfg.d);
        } else {
            const double rho = 1.0 / (2.0 * sigma - rho_prev);
            delta = trunc(lr_add(delta.scaled(rho * rho_prev), z.scaled(2.0 * rho / cfg.c)));
            rho_prev = rho;
        }
        out.s_hat = trunc(lr_add(out.s_hat, delta));
        z = precond_residual(out.s_hat);
        const double res = z.frobenius_norm() / norm0;
        out.iterations = j;
        out.residual_history.push_back(res);
        out.final_residual = res;
        if (!std::isfinite(res)) throw Diverged("Chebyshev residual became non-finite", out.residual_history);
        if (res <= cfg.residual_tol) {
            out.converged = true;
            break;
        }
        if (res > 10.0 * best) {
            throw Diverged("Chebyshev residual grew above 10x its minimum at iteration " + std::to_string(j),
                           out.residual_history);
        }
        best = std::min(best, res);
    }
    return out;
}

DenseMatrix direct_subset_solve(const SylvesterOperator& op, const DenseMatrix& rhs) {
    if (rhs.rows() != op.size() || rhs.cols() != op.num_columns()) {
        throw DimensionMismatch("direct_subset_solve: right-hand side shape differs from the operator");
    }
    DenseMatrix s = rhs;
    for (std::size_t j = 0; j < op.num_columns(); ++j) {
        const Factorization f(op.system_matrix(op.shifts()[j]));
        f.solve_in_place(s.column(j));
    }
    return s;
}

SubsetStep subset_newton_step(const ParametricProblem& p, const ParameterPartition& partition, std::size_t k,
                              std::span<const double> x_med, const SubsetStepOptions& options) {
    if (!all_finite(x_med)) throw NonFinite("subset_newton_step: median approximation is not finite", 0);
    const SubsetShifts subset = subset_diag(partition, k, p.mu_ref());
    const SylvesterOperator op = make_subset_operator(p, subset, x_med);
    const LowRankFactors rhs = build_rhs(p, x_med, subset.values);

    SubsetStep step;
    step.x_med.assign(x_med.begin(), x_med.end());

    auto t0 = std::chrono::steady_clock::now();
    const Factorization precond = mean_preconditioner(op, subset.values, options.anchor);
    step.spectrum = estimate_spectrum(op, precond, subset.values, options.spectrum);
    step.spectrum_seconds = seconds_since(t0);

    ChebyshevConfig cfg = options.cheb;
    cfg.d = step.spectrum.d;
    cfg.c = step.spectrum.c;
    t0 = std::chrono::steady_clock::now();
    SubsetSolveResult solved = chebyshev_solve(op, precond, rhs, cfg);
    step.solve_seconds = seconds_since(t0);

    step.s_hat = std::move(solved.s_hat);
    step.cheb_iterations = solved.iterations;
    step.cheb_residual = solved.final_residual;
    step.cheb_converged = solved.converged;
    step.cheb_history = std::move(solved.residual_history);
    return step;
}

}  // namespace lrn
