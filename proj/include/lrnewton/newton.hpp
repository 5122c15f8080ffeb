#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lrnewton/partition.hpp"
#include "lrnewton/problem.hpp"

namespace lrn {

enum class InitialGuess { Zero, DirichletData, WarmStart };

struct NewtonConfig {
    double tol = 1e-4;  // relative residual target
    std::size_t max_iter = 50;
    InitialGuess initial = InitialGuess::DirichletData;
    Vector warm_start;  // used when initial == WarmStart

    void validate(std::size_t n_dof) const;
};

struct NewtonResult {
    Vector x;
    std::size_t iterations = 0;
    std::vector<double> residual_history;  // relative residual of x_0, x_1, ...
    bool converged = false;
    std::string error;  // set by baseline_sweep when the solve threw
};

/// Undamped Newton iteration J(x_{j-1}, mu) s = -g(x_{j-1}, mu), x_j = x_{j-1} + s,
/// stopping once the relative residual is at most cfg.tol.
/// Throws SingularMatrix from the linear solve and NonFinite (with the
/// iteration index) when an iterate blows up.
NewtonResult newton_solve(const ParametricProblem& p, double mu, const NewtonConfig& cfg);

/// One Newton solve per parameter in ascending order. With warm_start the
/// previous converged solution seeds the next problem. A failing parameter is
/// recorded (converged = false, error set) and the sweep continues.
std::vector<NewtonResult> baseline_sweep(const ParametricProblem& p, const ParameterSet& s, const NewtonConfig& cfg,
                                         bool warm_start);

std::size_t total_iterations(const std::vector<NewtonResult>& results);

}  // namespace lrn
