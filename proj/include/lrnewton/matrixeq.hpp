#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lrnewton/eigs.hpp"
#include "lrnewton/lowrank.hpp"
#include "lrnewton/lu.hpp"
#include "lrnewton/partition.hpp"
#include "lrnewton/problem.hpp"

namespace lrn {

/// S -> A0 S + A1 S D + rho_f C S, with C the convection Jacobian frozen at
/// the subset's median approximation and D = diag(shifts). Column i of the
/// image is (A0 + shifts[i] A1 + rho_f C) s_i.
class SylvesterOperator {
public:
    SylvesterOperator(SparseMatrix a0, SparseMatrix a1, SparseMatrix conv, double rho_f, std::vector<double> shifts);

    std::size_t size() const noexcept { return a0_.n_rows(); }
    std::size_t num_columns() const noexcept { return shifts_.size(); }
    const SparseMatrix& a0() const noexcept { return a0_; }
    const SparseMatrix& a1() const noexcept { return a1_; }
    const SparseMatrix& conv() const noexcept { return conv_; }
    double rho_f() const noexcept { return rho_f_; }
    std::span<const double> shifts() const noexcept { return shifts_; }

    /// A0 + shift A1 + rho_f C
    SparseMatrix system_matrix(double shift) const;
    /// Column-wise application to a dense N x m matrix.
    DenseMatrix apply_dense(const DenseMatrix& s) const;
    /// A0 + rho_f C, the shift-independent part.
    const SparseMatrix& fixed_part() const noexcept { return fixed_; }

private:
    SparseMatrix a0_;
    SparseMatrix a1_;
    SparseMatrix conv_;
    double rho_f_;
    std::vector<double> shifts_;
    SparseMatrix fixed_;
};

/// Operator of subset k's matrix equation, linearized at x_med.
SylvesterOperator make_subset_operator(const ParametricProblem& p, const SubsetShifts& subset,
                                       std::span<const double> x_med);

/// B = -g(x_med, mu_ref) (1,...,1) - (A1 x_med) (v - mu_ref)^T as rank <= 2
/// factors. Since g is affine in mu the split is taken about the upper median
/// mu_a of v instead: U = [-g(x_med, mu_a) | -A1 x_med], V = [ones | v - mu_a].
/// Same matrix, but the two terms no longer cancel when x_med nearly solves
/// the median problem. Column i is -g(x_med, v_i).
LowRankFactors build_rhs(const ParametricProblem& p, std::span<const double> x_med, std::span<const double> v);

/// Low-rank image [ (A0 + rho_f C) U | A1 U ] [ V | D V ]^T, rank 2 rank(S).
LowRankFactors apply(const SylvesterOperator& op, const LowRankFactors& s);

enum class PreconditionerAnchor { Mean, Median };

/// LU of A0 + dbar A1 + rho_f C where dbar is the mean (or upper median) of the subset shifts.
Factorization mean_preconditioner(const SylvesterOperator& op, std::span<const double> v,
                                  PreconditionerAnchor anchor = PreconditionerAnchor::Mean);

struct SpectrumOptions {
    double safety = 1.1;
    std::size_t dense_threshold = kDenseEigThreshold;
    ArnoldiOptions arnoldi{};
};

struct SpectrumEstimate {
    double d = 1.0;
    double c = 0.0;
    double lambda_lo = 1.0;
    double lambda_hi = 1.0;
    bool krylov = false;  // Arnoldi path taken
};

/// Real interval [d - c, d + c] enclosing the real parts of the eigenvalues of
/// P^{-1} A(mu_min) and P^{-1} A(mu_max), with c widened by `safety`.
/// Throws IndefinitePencil if the interval reaches zero.
SpectrumEstimate estimate_spectrum(const SylvesterOperator& op, const Factorization& precond,
                                   std::span<const double> v, const SpectrumOptions& options = {});
SpectrumEstimate estimate_spectrum(const SylvesterOperator& op, const Factorization& precond,
                                   std::span<const double> v, double safety);

struct ChebyshevConfig {
    double d = 1.0;  // interval center
    double c = 0.1;  // interval half-width
    std::size_t max_rank = 9;
    double trunc_tol = 1e-12;
    std::size_t max_iter = 50;
    double residual_tol = 1e-10;

    void validate() const;
};

struct SubsetSolveResult {
    LowRankFactors s_hat;
    std::size_t iterations = 0;
    double final_residual = 0.0;          // ||P^{-1}(B - A(S))||_F / ||P^{-1} B||_F
    std::vector<double> residual_history; // one entry per iteration, after the update
    double d = 1.0;
    double c = 0.0;
    bool converged = false;
};

/// Chebyshev semi-iteration for P^{-1} A(S) = P^{-1} B on [d - c, d + c] with
/// low-rank iterates truncated after every factor-growing step. c == 0 gives
/// preconditioned Richardson with step 1/d. Throws Diverged when the residual
/// climbs 10x above its running minimum.
SubsetSolveResult chebyshev_solve(const SylvesterOperator& op, const Factorization& precond,
                                  const LowRankFactors& rhs, const ChebyshevConfig& cfg);

/// Exact solution of the matrix equation by one factorization per column.
DenseMatrix direct_subset_solve(const SylvesterOperator& op, const DenseMatrix& rhs);

struct SubsetStepOptions {
    ChebyshevConfig cheb{};  // d and c are overwritten by the spectrum estimate
    SpectrumOptions spectrum{};
    PreconditionerAnchor anchor = PreconditionerAnchor::Mean;
};

struct SubsetStep {
    Vector x_med;
    LowRankFactors s_hat;
    SpectrumEstimate spectrum;
    std::size_t cheb_iterations = 0;
    double cheb_residual = 0.0;
    bool cheb_converged = false;
    std::vector<double> cheb_history;
    double spectrum_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// One matrix-equation Newton step on subset k from x_med (1,...,1):
/// operator, right-hand side, preconditioner, spectrum, Chebyshev solve.
/// The subset approximation is x_med (1,...,1) + s_hat, rank <= 1 + max_rank.
SubsetStep subset_newton_step(const ParametricProblem& p, const ParameterPartition& partition, std::size_t k,
                              std::span<const double> x_med, const SubsetStepOptions& options);

}  // namespace lrn
