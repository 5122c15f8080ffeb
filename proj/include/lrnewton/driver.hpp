#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrnewton/lowrank.hpp"
#include "lrnewton/matrixeq.hpp"
#include "lrnewton/newton.hpp"
#include "lrnewton/partition.hpp"
#include "lrnewton/problem.hpp"

namespace lrn {

struct Algorithm1Config {
    std::size_t subsets = 8;
    double newton_tol = 1e-4;
    std::size_t newton_max_iter = 50;
    std::size_t rank = 10;  // per-subset rank R_k; the correction gets R_k - 1
    std::size_t cheb_max_iter = 50;
    double cheb_tol = 1e-10;
    double trunc_tol = 1e-12;
    double safety = 1.1;
    std::size_t workers = 1;
    std::uint64_t seed = 42;  // Krylov start vector (large problems only)
    PreconditionerAnchor anchor = PreconditionerAnchor::Mean;

    void validate() const;
};

/// Per-subset piece of the global approximation: x_med (1,...,1) + s_hat.
struct SubsetBlock {
    bool ok = false;
    std::string error;
    Vector x_med;
    LowRankFactors s_hat;
};

/// Global approximation [X_1 | ... | X_K] kept in factored form.
class BlockApproximation {
public:
    BlockApproximation(ParameterPartition partition, std::vector<SubsetBlock> blocks);

    const ParameterPartition& partition() const noexcept { return partition_; }
    const std::vector<SubsetBlock>& blocks() const noexcept { return blocks_; }
    std::size_t num_columns() const noexcept { return partition_.parent().size(); }

    bool has_column(std::size_t i) const;
    /// Approximation for global parameter index i. Throws if its subset failed.
    Vector column(std::size_t i) const;
    /// Sum over successful subsets of 1 + rank(s_hat).
    std::size_t global_rank() const;

private:
    ParameterPartition partition_;
    std::vector<SubsetBlock> blocks_;
};

struct ParameterRow {
    std::size_t index = 0;
    double mu = 0.0;
    std::size_t subset = 0;
    double rel_residual = 0.0;  // NaN when the subset failed
};

struct SubsetReport {
    std::size_t subset = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    double mu_median = 0.0;
    std::size_t newton_iterations = 0;
    double newton_residual = 0.0;
    bool newton_converged = false;
    std::size_t cheb_iterations = 0;
    double cheb_residual = 0.0;
    bool cheb_converged = false;
    double d = 0.0;
    double c = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    std::size_t rank = 0;
    double newton_seconds = 0.0;
    double spectrum_seconds = 0.0;
    double cheb_seconds = 0.0;
    bool failed = false;
    std::string error;
};

struct RunReport {
    std::vector<ParameterRow> parameters;
    std::vector<SubsetReport> subsets;
    std::size_t median_newton_steps = 0;
    std::size_t matrix_equation_steps = 0;
    std::size_t total_newton_steps = 0;
    double wall_seconds = 0.0;

    bool partial_failure() const;
};

struct Algorithm1Result {
    BlockApproximation approximation;
    RunReport report;
};

/// Split, median Newton to newton_tol, one low-rank matrix-equation Newton
/// step per subset, assemble. Subsets run on up to cfg.workers threads; a
/// failing subset is reported and leaves its columns missing.
Algorithm1Result run_algorithm1(const ParametricProblem& p, const ParameterSet& s, const Algorithm1Config& cfg);

/// Relative residual ||g(x_i, mu_i)|| / ||g(b_D, mu_i)|| per parameter (NaN where missing).
std::vector<double> evaluate(const ParametricProblem& p, const BlockApproximation& x, const ParameterSet& s);

/// One CSV row of a residual report.
struct ResidualRow {
    std::size_t index = 0;
    double mu = 0.0;
    long subset = -1;
    double rel_residual = 0.0;
    std::string method;
};

struct ComparisonReport {
    std::vector<NewtonResult> baseline;
    std::size_t baseline_steps = 0;
    double baseline_seconds = 0.0;
    std::optional<Algorithm1Result> algorithm1;
    std::vector<ResidualRow> rows;
};

std::vector<ResidualRow> algorithm1_rows(const RunReport& report);
std::vector<ResidualRow> baseline_rows(const ParametricProblem& p, const ParameterSet& s,
                                       const std::vector<NewtonResult>& results,
                                       const ParameterPartition* partition = nullptr);

/// Baseline sweep and the block low-rank method on identical inputs.
ComparisonReport compare(const ParametricProblem& p, const ParameterSet& s, const NewtonConfig& newton_cfg,
                         bool warm_start, const Algorithm1Config& alg1_cfg);

/// Singular values (descending) of the exact correction S_k of every subset,
/// from a column-wise direct solve around the median Newton approximation.
/// Refuses problems above the dense threshold.
std::vector<std::vector<double>> exact_singular_values(const ParametricProblem& p,
                                                       const ParameterPartition& partition,
                                                       const NewtonConfig& median_cfg);

/// Median Newton plus spectrum estimate per subset, no matrix-equation solve.
std::vector<SubsetReport> spectrum_survey(const ParametricProblem& p, const ParameterSet& s,
                                          const Algorithm1Config& cfg);

}  // namespace lrn
