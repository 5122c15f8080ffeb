#include "lrnewton/newton.hpp"

#include <numeric>

#include "lrnewton/errors.hpp"
#include "lrnewton/lu.hpp"

namespace lrn {

void NewtonConfig::validate(std::size_t n_dof) const {
    if (!(tol > 0.0)) throw InvalidArgument("Newton tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("Newton max_iter must be at least 1");
    if (initial == InitialGuess::WarmStart && warm_start.size() != n_dof) {
        throw DimensionMismatch("Newton warm start vector has the wrong length");
    }
}

NewtonResult newton_solve(const ParametricProblem& p, double mu, const NewtonConfig& cfg) {
    cfg.validate(p.n_dof());
    NewtonResult out;
    switch (cfg.initial) {
        case InitialGuess::Zero: out.x.assign(p.n_dof(), 0.0); break;
        case InitialGuess::DirichletData: out.x = p.dirichlet_rhs(); break;
        case InitialGuess::WarmStart: out.x = cfg.warm_start; break;
    }
    if (!all_finite(out.x)) throw NonFinite("Newton initial guess is not finite", 0);

    const double ref = reference_residual_norm(p, mu);
    const auto rel = [ref](double r) { return ref > 0.0 ? r / ref : r; };

    Vector g = residual(p, out.x, mu);
    out.residual_history.push_back(rel(norm2(g)));
    while (out.residual_history.back() > cfg.tol && out.iterations < cfg.max_iter) {
        const Factorization lu(jacobian(p, out.x, mu));
        Vector step = lu.solve(g);
        axpy(-1.0, step, out.x);
        ++out.iterations;
        if (!all_finite(out.x)) {
            throw NonFinite("Newton iterate became non-finite at mu = " + std::to_string(mu), out.iterations);
        }
        g = residual(p, out.x, mu);
        out.residual_history.push_back(rel(norm2(g)));
    }
    out.converged = out.residual_history.back() <= cfg.tol;
    return out;
}

std::vector<NewtonResult> baseline_sweep(const ParametricProblem& p, const ParameterSet& s, const NewtonConfig& cfg,
                                         bool warm_start) {
    std::vector<NewtonResult> results;
    results.reserve(s.size());
    NewtonConfig local = cfg;
    for (std::size_t i = 0; i < s.size(); ++i) {
        try {
            results.push_back(newton_solve(p, s[i], local));
        } catch (const Error& e) {
            NewtonResult failed;
            failed.error = e.what();
            results.push_back(std::move(failed));
            continue;
        }
        if (warm_start && results.back().converged) {
            local.initial = InitialGuess::WarmStart;
            local.warm_start = results.back().x;
        }
    }
    return results;
}

std::size_t total_iterations(const std::vector<NewtonResult>& results) {
    return std::accumulate(results.begin(), results.end(), std::size_t{0},
                           [](std::size_t acc, const NewtonResult& r) { return acc + r.iterations; });
}

}  // namespace lrn
