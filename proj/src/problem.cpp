#include "lrnewton/problem.hpp"

#include <cmath>
#include <string>

#include "lrnewton/errors.hpp"

namespace lrn {

namespace {

void check_state(const ParametricProblem& p, std::span<const double> x, const char* where) {
    if (x.size() != p.n_dof()) {
        throw DimensionMismatch(std::string(where) + ": state has " + std::to_string(x.size()) +
                                " entries, problem has " + std::to_string(p.n_dof()));
    }
    if (!all_finite(x)) throw NonFinite(std::string(where) + ": state has non-finite entries", 0);
}

}  // namespace

CentralConvection::CentralConvection(std::size_t n_dof, std::size_t rows, double coefficient)
    : n_dof_(n_dof), rows_(rows), coefficient_(coefficient) {
    if (rows_ + 1 > n_dof_) throw InvalidArgument("CentralConvection: fluid block exceeds the unknown count");
}

Vector CentralConvection::evaluate(std::span<const double> x) const {
    if (x.size() != n_dof_) throw DimensionMismatch("CentralConvection::evaluate: wrong state size");
    Vector y(n_dof_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double left = i > 0 ? x[i - 1] : 0.0;
        y[i] = coefficient_ * x[i] * (x[i + 1] - left);
    }
    return y;
}

SparseMatrix CentralConvection::jacobian(std::span<const double> x) const {
    if (x.size() != n_dof_) throw DimensionMismatch("CentralConvection::jacobian: wrong state size");
    std::vector<std::size_t> offsets(n_dof_ + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    cols.reserve(3 * rows_);
    vals.reserve(3 * rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double left = i > 0 ? x[i - 1] : 0.0;
        if (i > 0) {
            cols.push_back(i - 1);
            vals.push_back(-coefficient_ * x[i]);
        }
        cols.push_back(i);
        vals.push_back(coefficient_ * (x[i + 1] - left));
        cols.push_back(i + 1);
        vals.push_back(coefficient_ * x[i]);
        offsets[i + 1] = cols.size();
    }
    for (std::size_t i = rows_; i < n_dof_; ++i) offsets[i + 1] = cols.size();
    return SparseMatrix(n_dof_, n_dof_, std::move(offsets), std::move(cols), std::move(vals));
}

ParametricProblem::ParametricProblem(SparseMatrix a0, SparseMatrix a1, Vector dirichlet_rhs,
                                     PhysicalConstants constants, double mu_ref,
                                     std::shared_ptr<const NonlinearTerm> nonlinear)
    : a0_(std::move(a0)), a1_(std::move(a1)), b_d_(std::move(dirichlet_rhs)), constants_(constants),
      mu_ref_(mu_ref), nonlinear_(std::move(nonlinear)) {
    const std::size_t n = b_d_.size();
    if (!nonlinear_) throw InvalidArgument("ParametricProblem: missing nonlinear term");
    if (a0_.n_rows() != n || a0_.n_cols() != n || a1_.n_rows() != n || a1_.n_cols() != n ||
        nonlinear_->size() != n) {
        throw DimensionMismatch("ParametricProblem: A0, A1, N and b_D must share one dimension");
    }
}

Vector residual(const ParametricProblem& p, std::span<const double> x, double mu) {
    check_state(p, x, "residual");
    Vector g = spmv(p.a0(), x);
    const Vector a1x = spmv(p.a1(), x);
    axpy(mu - p.mu_ref(), a1x, g);
    const Vector nx = p.nonlinear().evaluate(x);
    axpy(p.rho_f(), nx, g);
    axpy(-1.0, p.dirichlet_rhs(), g);
    return g;
}

SparseMatrix assemble_conv(const ParametricProblem& p, std::span<const double> x) {
    check_state(p, x, "assemble_conv");
    return p.nonlinear().jacobian(x);
}

SparseMatrix jacobian(const ParametricProblem& p, std::span<const double> x, double mu) {
    const SparseMatrix conv = assemble_conv(p, x);
    return linear_combination({{1.0, p.a0()}, {mu - p.mu_ref(), p.a1()}, {p.rho_f(), conv}});
}

double reference_residual_norm(const ParametricProblem& p, double mu) {
    return norm2(residual(p, p.dirichlet_rhs(), mu));
}

double relative_residual(const ParametricProblem& p, std::span<const double> x, double mu) {
    const double num = norm2(residual(p, x, mu));
    const double den = reference_residual_norm(p, mu);
    return den > 0.0 ? num / den : num;
}

void ModelConfig::validate() const {
    if (model != "burgers-fsi-1d") throw InvalidArgument("unknown model '" + model + "'");
    if (n_f < 2 || n_s < 2) throw InvalidArgument("model needs at least 2 fluid and 2 solid cells");
    if (!std::isfinite(v_in)) throw InvalidArgument("v_in must be finite");
    if (!(constants.rho_f > 0.0) || !(constants.nu_f > 0.0)) throw InvalidArgument("rho_f and nu_f must be positive");
    if (!std::isfinite(constants.lambda_s)) throw InvalidArgument("lambda_s must be finite");
    if (mu_values) {
        (void)ParameterSet(*mu_values);
    } else {
        if (!(mu_min < mu_max) || !std::isfinite(mu_min) || !std::isfinite(mu_max)) {
            throw InvalidArgument("parameter interval is degenerate");
        }
        if (num_params == 0) throw InvalidArgument("num_params must be positive");
    }
}

ParameterSet ModelConfig::parameters() const {
    if (mu_values) return ParameterSet(*mu_values);
    return ParameterSet::uniform(mu_min, mu_max, num_params);
}

ParametricProblem build_burgers_fsi_1d(const ModelConfig& cfg) {
    cfg.validate();
    const double rho = cfg.constants.rho_f;
    const double nu = cfg.constants.nu_f;
    const double hf = 1.0 / static_cast<double>(cfg.n_f);
    const double hs = 1.0 / static_cast<double>(cfg.n_s);
    const std::size_t n_fluid = cfg.n_f - 1;
    const std::size_t iw = n_fluid;
    const std::size_t n_solid = cfg.n_s - 1;
    const std::size_t n = n_fluid + 1 + n_solid;

    std::vector<Triplet> a0;
    std::vector<Triplet> a1;
    Vector b_d(n, 0.0);

    for (std::size_t i = 0; i < n_fluid; ++i) {
        if (i > 0) a0.push_back({i, i - 1, -1.0});
        a0.push_back({i, i, 2.0});
        a0.push_back({i, i + 1, -1.0});
    }
    // v_0 = v_in: diffusion moves it to the right-hand side, convection leaves
    // the linear term -(h_f / 2 nu_f) v_in v_1 in A0.
    b_d[0] = cfg.v_in;
    a0.push_back({0, 0, -hf / (2.0 * nu) * cfg.v_in});

    a0.push_back({iw, iw, rho * nu / hf});
    a0.push_back({iw, iw - 1, -rho * nu / hf});
    a1.push_back({iw, iw, 1.0 / hs});
    a1.push_back({iw, iw + 1, -1.0 / hs});

    for (std::size_t j = 0; j < n_solid; ++j) {
        const std::size_t r = iw + 1 + j;
        a1.push_back({r, r - 1, -1.0});
        a1.push_back({r, r, 2.0});
        if (j + 1 < n_solid) a1.push_back({r, r + 1, -1.0});
    }

    auto conv = std::make_shared<CentralConvection>(n, n_fluid, hf / (2.0 * nu * rho));
    return ParametricProblem(SparseMatrix::from_triplets(n, n, std::move(a0)),
                             SparseMatrix::from_triplets(n, n, std::move(a1)), std::move(b_d), cfg.constants,
                             /*mu_ref=*/0.0, std::move(conv));
}

double poisson_ratio(double lambda_s, double mu_s) {
    const double denom = lambda_s + mu_s;
    if (!(denom > 0.0)) throw InvalidArgument("poisson_ratio: lambda_s + mu_s must be positive");
    return lambda_s / (2.0 * denom);
}

}  // namespace lrn
