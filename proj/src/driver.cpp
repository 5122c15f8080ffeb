#include "lrnewton/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "lrnewton/errors.hpp"

namespace lrn {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Runs task(k) for k in [0, count) on up to `workers` threads. Each k is
/// handled by exactly one thread; the task is responsible for its own errors.
template <typename Task>
void for_each_subset(std::size_t count, std::size_t workers, Task&& task) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) task(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) task(k);
        });
    }
}

NewtonConfig median_config(const Algorithm1Config& cfg) {
    NewtonConfig n;
    n.tol = cfg.newton_tol;
    n.max_iter = cfg.newton_max_iter;
    n.initial = InitialGuess::DirichletData;
    return n;
}

NotConverged not_converged(double mu, const NewtonResult& r) {
    return NotConverged("median Newton at mu = " + std::to_string(mu) + " stopped at relative residual " +
                        std::to_string(r.residual_history.back()) + " after " + std::to_string(r.iterations) +
                        " iterations");
}

NewtonResult median_newton(const ParametricProblem& p, double mu, const NewtonConfig& cfg) {
    NewtonResult r = newton_solve(p, mu, cfg);
    if (!r.converged) throw not_converged(mu, r);
    return r;
}

}  // namespace

void Algorithm1Config::validate() const {
    if (subsets == 0) throw InvalidArgument("number of subsets must be positive");
    if (!(newton_tol > 0.0)) throw InvalidArgument("Newton tolerance must be positive");
    if (rank < 1) throw InvalidArgument("rank must be at least 1");
    if (!(safety >= 1.0)) throw InvalidArgument("safety factor must be at least 1");
    if (!(trunc_tol >= 0.0) || !(cheb_tol >= 0.0)) throw InvalidArgument("tolerances must be non-negative");
}

BlockApproximation::BlockApproximation(ParameterPartition partition, std::vector<SubsetBlock> blocks)
    : partition_(std::move(partition)), blocks_(std::move(blocks)) {
    if (blocks_.size() != partition_.num_subsets()) {
        throw DimensionMismatch("BlockApproximation: one block per subset required");
    }
}

bool BlockApproximation::has_column(std::size_t i) const { return blocks_[partition_.subset_of(i)].ok; }

Vector BlockApproximation::column(std::size_t i) const {
    const std::size_t k = partition_.subset_of(i);
    const SubsetBlock& b = blocks_[k];
    if (!b.ok) throw Error("column " + std::to_string(i) + " is missing: subset " + std::to_string(k) + " failed");
    Vector x = b.x_med;
    if (b.s_hat.rank() > 0) {
        const Vector s = b.s_hat.column(i - partition_.begin(k));
        axpy(1.0, s, x);
    }
    return x;
}

std::size_t BlockApproximation::global_rank() const {
    std::size_t r = 0;
    for (const auto& b : blocks_) {
        if (b.ok) r += 1 + b.s_hat.rank();
    }
    return r;
}

bool RunReport::partial_failure() const {
    return std::any_of(subsets.begin(), subsets.end(), [](const SubsetReport& s) { return s.failed; });
}

Algorithm1Result run_algorithm1(const ParametricProblem& p, const ParameterSet& s, const Algorithm1Config& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    ParameterPartition partition = split(s, cfg.subsets);
    const std::size_t k_count = partition.num_subsets();
    const NewtonConfig med_cfg = median_config(cfg);

    SubsetStepOptions step_opts;
    step_opts.cheb.max_rank = std::max<std::size_t>(cfg.rank - 1, 1);
    step_opts.cheb.trunc_tol = cfg.trunc_tol;
    step_opts.cheb.max_iter = cfg.cheb_max_iter;
    step_opts.cheb.residual_tol = cfg.cheb_tol;
    step_opts.spectrum.safety = cfg.safety;
    step_opts.spectrum.arnoldi.seed = cfg.seed;
    step_opts.anchor = cfg.anchor;

    std::vector<SubsetBlock> blocks(k_count);
    std::vector<SubsetReport> reports(k_count);
    for_each_subset(k_count, cfg.workers, [&](std::size_t k) {
        SubsetReport& rep = reports[k];
        SubsetBlock& blk = blocks[k];
        rep.subset = k;
        rep.begin = partition.begin(k);
        rep.end = partition.end(k);
        rep.mu_median = partition.median_value(k);
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const NewtonResult med = newton_solve(p, rep.mu_median, med_cfg);
            rep.newton_seconds = seconds_since(t0);
            rep.newton_iterations = med.iterations;
            rep.newton_residual = med.residual_history.back();
            rep.newton_converged = med.converged;
            if (!med.converged) throw not_converged(rep.mu_median, med);

            SubsetStep step = subset_newton_step(p, partition, k, med.x, step_opts);
            rep.cheb_iterations = step.cheb_iterations;
            rep.cheb_residual = step.cheb_residual;
            rep.cheb_converged = step.cheb_converged;
            rep.d = step.spectrum.d;
            rep.c = step.spectrum.c;
            rep.lambda_lo = step.spectrum.lambda_lo;
            rep.lambda_hi = step.spectrum.lambda_hi;
            rep.spectrum_seconds = step.spectrum_seconds;
            rep.cheb_seconds = step.solve_seconds;
            rep.rank = 1 + step.s_hat.rank();
            blk.x_med = std::move(step.x_med);
            blk.s_hat = std::move(step.s_hat);
            blk.ok = true;
        } catch (const std::exception& e) {
            rep.failed = true;
            rep.error = e.what();
            blk.ok = false;
            blk.error = e.what();
        }
    });

    Algorithm1Result out{BlockApproximation(partition, std::move(blocks)), RunReport{}};
    RunReport& report = out.report;
    report.subsets = std::move(reports);
    for (const auto& rep : report.subsets) {
        report.median_newton_steps += rep.newton_iterations;
        if (!rep.failed) ++report.matrix_equation_steps;
    }
    report.total_newton_steps = report.median_newton_steps + report.matrix_equation_steps;

    const std::vector<double> rel = evaluate(p, out.approximation, s);
    report.parameters.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        report.parameters[i] = ParameterRow{i, s[i], partition.subset_of(i), rel[i]};
    }
    report.wall_seconds = seconds_since(t_start);
    return out;
}

std::vector<double> evaluate(const ParametricProblem& p, const BlockApproximation& x, const ParameterSet& s) {
    if (x.num_columns() != s.size()) throw DimensionMismatch("evaluate: approximation and parameter set differ");
    std::vector<double> rel(s.size(), kMissing);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (x.has_column(i)) rel[i] = relative_residual(p, x.column(i), s[i]);
    }
    return rel;
}

std::vector<ResidualRow> algorithm1_rows(const RunReport& report) {
    std::vector<ResidualRow> rows;
    rows.reserve(report.parameters.size());
    for (const auto& r : report.parameters) {
        rows.push_back({r.index, r.mu, static_cast<long>(r.subset), r.rel_residual, "algorithm1"});
    }
    return rows;
}

std::vector<ResidualRow> baseline_rows(const ParametricProblem& p, const ParameterSet& s,
                                       const std::vector<NewtonResult>& results, const ParameterPartition* partition) {
    if (results.size() != s.size()) throw DimensionMismatch("baseline_rows: one result per parameter required");
    std::vector<ResidualRow> rows;
    rows.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double rel = results[i].error.empty() ? relative_residual(p, results[i].x, s[i]) : kMissing;
        const long subset = partition ? static_cast<long>(partition->subset_of(i)) : -1;
        rows.push_back({i, s[i], subset, rel, "baseline"});
    }
    return rows;
}

ComparisonReport compare(const ParametricProblem& p, const ParameterSet& s, const NewtonConfig& newton_cfg,
                         bool warm_start, const Algorithm1Config& alg1_cfg) {
    ComparisonReport out;
    const auto t0 = std::chrono::steady_clock::now();
    out.baseline = baseline_sweep(p, s, newton_cfg, warm_start);
    out.baseline_seconds = seconds_since(t0);
    out.baseline_steps = total_iterations(out.baseline);
    out.algorithm1 = run_algorithm1(p, s, alg1_cfg);

    out.rows = algorithm1_rows(out.algorithm1->report);
    auto base = baseline_rows(p, s, out.baseline, &out.algorithm1->approximation.partition());
    out.rows.insert(out.rows.end(), base.begin(), base.end());
    return out;
}

std::vector<std::vector<double>> exact_singular_values(const ParametricProblem& p,
                                                       const ParameterPartition& partition,
                                                       const NewtonConfig& median_cfg) {
    if (p.n_dof() > kDenseEigThreshold) {
        throw InvalidArgument("singular value export needs N <= " + std::to_string(kDenseEigThreshold) + " (N = " +
                              std::to_string(p.n_dof()) + ")");
    }
    std::vector<std::vector<double>> out(partition.num_subsets());
    for (std::size_t k = 0; k < partition.num_subsets(); ++k) {
        const NewtonResult med = median_newton(p, partition.median_value(k), median_cfg);
        const SubsetShifts subset = subset_diag(partition, k, p.mu_ref());
        const SylvesterOperator op = make_subset_operator(p, subset, med.x);
        const DenseMatrix rhs = build_rhs(p, med.x, subset.values).to_dense();
        out[k] = singular_values(direct_subset_solve(op, rhs));
    }
    return out;
}

std::vector<SubsetReport> spectrum_survey(const ParametricProblem& p, const ParameterSet& s,
                                          const Algorithm1Config& cfg) {
    cfg.validate();
    const ParameterPartition partition = split(s, cfg.subsets);
    const NewtonConfig med_cfg = median_config(cfg);
    SpectrumOptions opts;
    opts.safety = cfg.safety;
    opts.arnoldi.seed = cfg.seed;

    std::vector<SubsetReport> reports(partition.num_subsets());
    for_each_subset(reports.size(), cfg.workers, [&](std::size_t k) {
        SubsetReport& rep = reports[k];
        rep.subset = k;
        rep.begin = partition.begin(k);
        rep.end = partition.end(k);
        rep.mu_median = partition.median_value(k);
        try {
            auto t0 = std::chrono::steady_clock::now();
            const NewtonResult med = median_newton(p, rep.mu_median, med_cfg);
            rep.newton_seconds = seconds_since(t0);
            rep.newton_iterations = med.iterations;
            rep.newton_residual = med.residual_history.back();
            rep.newton_converged = true;
            t0 = std::chrono::steady_clock::now();
            const SubsetShifts subset = subset_diag(partition, k, p.mu_ref());
            const SylvesterOperator op = make_subset_operator(p, subset, med.x);
            const Factorization precond = mean_preconditioner(op, subset.values, cfg.anchor);
            const SpectrumEstimate est = estimate_spectrum(op, precond, subset.values, opts);
            rep.spectrum_seconds = seconds_since(t0);
            rep.d = est.d;
            rep.c = est.c;
            rep.lambda_lo = est.lambda_lo;
            rep.lambda_hi = est.lambda_hi;
        } catch (const std::exception& e) {
            rep.failed = true;
            rep.error = e.what();
        }
    });
    return reports;
}

}  // namespace lrn
