#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrnewton/partition.hpp"
#include "lrnewton/sparse.hpp"
#include "lrnewton/vector_ops.hpp"

namespace lrn {

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
};

/// Quadratic state-dependent term N(x) of a parametric problem. Its Jacobian
/// is linear in x and vanishes outside the fluid block.
class NonlinearTerm {
public:
    virtual ~NonlinearTerm() = default;
    virtual std::size_t size() const noexcept = 0;
    virtual Vector evaluate(std::span<const double> x) const = 0;
    virtual SparseMatrix jacobian(std::span<const double> x) const = 0;
    /// Unknowns the term reads from; rows and columns outside are zero in the Jacobian.
    virtual IndexRange fluid_block() const noexcept = 0;
};

/// Central-difference convection x_i (x_{i+1} - x_{i-1}) * coefficient on
/// rows [0, rows). Row 0's left neighbour is a Dirichlet node whose linear
/// contribution lives in A0, so it reads as zero here. The last row's right
/// neighbour (index `rows`) is the interface unknown.
class CentralConvection final : public NonlinearTerm {
public:
    CentralConvection(std::size_t n_dof, std::size_t rows, double coefficient);

    std::size_t size() const noexcept override { return n_dof_; }
    Vector evaluate(std::span<const double> x) const override;
    SparseMatrix jacobian(std::span<const double> x) const override;
    IndexRange fluid_block() const noexcept override { return {0, rows_ + 1}; }

private:
    std::size_t n_dof_;
    std::size_t rows_;
    double coefficient_;
};

struct PhysicalConstants {
    double rho_f = 12.5;     // fluid density
    double nu_f = 0.04;      // kinematic viscosity
    double lambda_s = 2e5;   // first Lame parameter (diagnostic only)
};

/// g(x, mu) = A0 x + (mu - mu_ref) A1 x + rho_f N(x) - b_D. Immutable.
class ParametricProblem {
public:
    ParametricProblem(SparseMatrix a0, SparseMatrix a1, Vector dirichlet_rhs, PhysicalConstants constants,
                      double mu_ref, std::shared_ptr<const NonlinearTerm> nonlinear);

    std::size_t n_dof() const noexcept { return b_d_.size(); }
    const SparseMatrix& a0() const noexcept { return a0_; }
    const SparseMatrix& a1() const noexcept { return a1_; }
    const Vector& dirichlet_rhs() const noexcept { return b_d_; }
    const PhysicalConstants& constants() const noexcept { return constants_; }
    double rho_f() const noexcept { return constants_.rho_f; }
    double mu_ref() const noexcept { return mu_ref_; }
    const NonlinearTerm& nonlinear() const noexcept { return *nonlinear_; }

private:
    SparseMatrix a0_;
    SparseMatrix a1_;
    Vector b_d_;
    PhysicalConstants constants_;
    double mu_ref_;
    std::shared_ptr<const NonlinearTerm> nonlinear_;
};

Vector residual(const ParametricProblem& p, std::span<const double> x, double mu);
/// A0 + (mu - mu_ref) A1 + rho_f A_conv(x)
SparseMatrix jacobian(const ParametricProblem& p, std::span<const double> x, double mu);
/// Jacobian of N at x (without the rho_f factor).
SparseMatrix assemble_conv(const ParametricProblem& p, std::span<const double> x);

/// ||g(x, mu)||_2 / ||g(b_D, mu)||_2. Falls back to the absolute norm when the
/// reference residual is exactly zero (homogeneous data).
double relative_residual(const ParametricProblem& p, std::span<const double> x, double mu);
double reference_residual_norm(const ParametricProblem& p, double mu);

struct ModelConfig {
    std::string model = "burgers-fsi-1d";
    std::size_t n_f = 200;
    std::size_t n_s = 200;
    double v_in = 1.0;
    PhysicalConstants constants{};
    double mu_min = 20000.0;
    double mu_max = 60000.0;
    std::size_t num_params = 200;
    std::optional<std::vector<double>> mu_values;  // overrides the uniform grid

    /// Throws InvalidArgument on an unusable configuration.
    void validate() const;
    ParameterSet parameters() const;
};

/// 1D fluid-structure analog. Fluid on (0,1): rho_f(-nu_f v'' + v v') = 0,
/// v(0) = v_in; solid on (1,2): -mu u'' = 0, u(2) = 0; a shared interface
/// unknown w with flux balance rho_f nu_f (w - v_last)/h_f + mu (w - u_first)/h_s = 0.
///
/// Unknown order: fluid interior (n_f - 1), interface, solid interior (n_s - 1).
/// Fluid rows are divided by rho_f nu_f / h_f^2 and solid rows by mu / h_s^2
/// (stencils (-1, 2, -1)), so b_D holds v_in in the first fluid row and b_D is
/// a usable initial guess. The linear part of the convection at the inflow node
/// goes to A0; A1 holds the solid rows and the solid half of the interface row.
ParametricProblem build_burgers_fsi_1d(const ModelConfig& cfg);

/// lambda / (2 (lambda + mu))
double poisson_ratio(double lambda_s, double mu_s);

}  // namespace lrn
