// Command-line harness: the block low-rank method, the consecutive-Newton baseline, their
// comparison, the singular-value diagnostic and the spectrum survey.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "lrnewton/driver.hpp"
#include "lrnewton/errors.hpp"
#include "lrnewton/report.hpp"
#include "lrnewton/simd/kernels.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitHard = 1;
constexpr int kExitPartial = 2;

// Reads a flat JSON object as CLI11 config items. Keys are option long names
// with or without the leading dashes; underscores are accepted for dashes.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty() || opt->get_configurable() == false) continue;
            const std::string& name = opt->get_lnames().front();
            if (opt->count() > 0) {
                const auto& res = opt->results();
                j[name] = res.size() == 1 ? json(res.front()) : json(res);
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            input >> j;
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            item.name = normalize(key);
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar(v, key));
            } else {
                item.inputs.push_back(scalar(value, key));
            }
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    static std::string normalize(std::string key) {
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        for (char& c : key) {
            if (c == '_') c = '-';
        }
        return key;
    }

    static std::string scalar(const json& v, const std::string& key) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("config key '" + key + "' must be a string, number or boolean");
    }
};

struct Options {
    lrn::ModelConfig model;
    lrn::Algorithm1Config alg1;
    std::optional<double> newton_tol;
    double baseline_tol = 1e-12;
    std::size_t newton_max_iter = 50;
    bool warm_start = true;
    std::optional<std::string> out;
    std::string summary = "summary.json";
};

void add_options(CLI::App& app, Options& o) {
    auto& m = o.model;
    auto& a = o.alg1;
    app.add_option("--model", m.model, "Model preset")->check(CLI::IsMember({"burgers-fsi-1d"}))->capture_default_str();
    app.add_option("--nf", m.n_f, "Fluid cells")->check(CLI::Range(2, 1 << 24))->capture_default_str();
    app.add_option("--ns", m.n_s, "Solid cells")->check(CLI::Range(2, 1 << 24))->capture_default_str();
    app.add_option("--v-in", m.v_in, "Inflow velocity")->capture_default_str();
    app.add_option("--rho-f", m.constants.rho_f, "Fluid density")->capture_default_str();
    app.add_option("--nu-f", m.constants.nu_f, "Kinematic viscosity")->capture_default_str();
    app.add_option("--lambda-s", m.constants.lambda_s, "First Lame parameter")->capture_default_str();
    app.add_option("--mu-min", m.mu_min, "Smallest shear modulus")->capture_default_str();
    app.add_option("--mu-max", m.mu_max, "Largest shear modulus")->capture_default_str();
    app.add_option("--num-params", m.num_params, "Number of shear moduli")->capture_default_str();
    app.add_option("--subsets", a.subsets, "Number of subsets K")->capture_default_str();
    app.add_option("--rank", a.rank, "Rank per subset R")->capture_default_str();
    app.add_option("--newton-tol", o.newton_tol,
                   "Relative residual target (run/compare/svd/spectrum: 1e-4, baseline: 1e-12)");
    app.add_option("--baseline-tol", o.baseline_tol, "Baseline tolerance used by compare")->capture_default_str();
    app.add_option("--newton-max-iter", o.newton_max_iter, "Newton iteration cap")->capture_default_str();
    app.add_option("--cheb-max-iter", a.cheb_max_iter, "Chebyshev iteration cap")->capture_default_str();
    app.add_option("--cheb-tol", a.cheb_tol, "Chebyshev relative residual target")->capture_default_str();
    app.add_option("--trunc-tol", a.trunc_tol, "Relative truncation tolerance")->capture_default_str();
    app.add_option("--safety", a.safety, "Widening factor for the spectral half-width")->capture_default_str();
    app.add_option("--workers", a.workers, "Concurrent subset pipelines")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", a.seed, "Seed of the Krylov start vector")->capture_default_str();
    app.add_flag("--warm-start,!--no-warm-start", o.warm_start, "Seed each baseline solve with the previous one")
        ->capture_default_str();
    app.add_option("--out", o.out, "CSV output (results.csv, or singular_values.csv for svd)");
    app.add_option("--summary", o.summary, "JSON summary output")->capture_default_str();
}

json config_echo(const Options& o, const std::string& command, double newton_tol) {
    const auto& m = o.model;
    const auto& a = o.alg1;
    return {{"command", command},
            {"model", m.model},
            {"nf", m.n_f},
            {"ns", m.n_s},
            {"n_dof", m.n_f + m.n_s - 1},
            {"v_in", m.v_in},
            {"rho_f", m.constants.rho_f},
            {"nu_f", m.constants.nu_f},
            {"lambda_s", m.constants.lambda_s},
            {"mu_min", m.mu_min},
            {"mu_max", m.mu_max},
            {"num_params", m.num_params},
            {"subsets", a.subsets},
            {"rank", a.rank},
            {"newton_tol", newton_tol},
            {"baseline_tol", o.baseline_tol},
            {"newton_max_iter", o.newton_max_iter},
            {"cheb_max_iter", a.cheb_max_iter},
            {"cheb_tol", a.cheb_tol},
            {"trunc_tol", a.trunc_tol},
            {"safety", a.safety},
            {"workers", a.workers},
            {"seed", a.seed},
            {"warm_start", o.warm_start},
            {"poisson_ratio_min", lrn::poisson_ratio(m.constants.lambda_s, m.mu_min)},
            {"poisson_ratio_max", lrn::poisson_ratio(m.constants.lambda_s, m.mu_max)},
            {"simd", lrn::simd::active_kernels().name}};
}

json baseline_summary(const lrn::ParametricProblem& p, const lrn::ParameterSet& s,
                      const std::vector<lrn::NewtonResult>& results, double seconds) {
    double worst = 0.0;
    std::size_t failed = 0;
    json errors = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (!r.converged) {
            ++failed;
            errors.push_back({{"index", i}, {"mu", s[i]}, {"error", r.error.empty() ? "not converged" : r.error}});
        }
        if (r.error.empty()) worst = std::max(worst, lrn::relative_residual(p, r.x, s[i]));
    }
    return {{"newton_steps", lrn::total_iterations(results)},
            {"wall_seconds", seconds},
            {"max_rel_residual", worst},
            {"failed", failed},
            {"failures", errors}};
}

bool any_unconverged(const std::vector<lrn::NewtonResult>& results) {
    for (const auto& r : results) {
        if (!r.converged) return true;
    }
    return false;
}

lrn::NewtonConfig newton_config(double tol, std::size_t max_iter) {
    lrn::NewtonConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    return cfg;
}

void print_subsets(const std::vector<lrn::SubsetReport>& subsets) {
    std::printf("%6s %9s %12s %6s %10s %10s %6s %10s %s\n", "subset", "mu_med", "newton_res", "its", "d", "c",
                "cheb", "cheb_res", "status");
    for (const auto& s : subsets) {
        std::printf("%6zu %9.1f %12.3e %6zu %10.6f %10.6f %6zu %10.3e %s\n", s.subset, s.mu_median, s.newton_residual,
                    s.newton_iterations, s.d, s.c, s.cheb_iterations, s.cheb_residual,
                    s.failed ? ("FAILED: " + s.error).c_str() : "ok");
    }
}

int cmd_run(const Options& o) {
    const double tol = o.newton_tol.value_or(1e-4);
    lrn::Algorithm1Config cfg = o.alg1;
    cfg.newton_tol = tol;
    cfg.newton_max_iter = o.newton_max_iter;
    const auto p = lrn::build_burgers_fsi_1d(o.model);
    const auto s = o.model.parameters();
    const auto res = lrn::run_algorithm1(p, s, cfg);
    lrn::export_csv(lrn::algorithm1_rows(res.report), o.out.value_or("results.csv"));
    json summary = {{"config", config_echo(o, "run", tol)}, {"algorithm1", lrn::to_json(res.report)}};
    summary["algorithm1"]["global_rank"] = res.approximation.global_rank();
    lrn::write_json(summary, o.summary);
    print_subsets(res.report.subsets);
    std::printf("newton steps: %zu (median %zu + matrix equation %zu), wall %.3f s\n", res.report.total_newton_steps,
                res.report.median_newton_steps, res.report.matrix_equation_steps, res.report.wall_seconds);
    return res.report.partial_failure() ? kExitPartial : kExitOk;
}

int cmd_baseline(const Options& o) {
    const double tol = o.newton_tol.value_or(1e-12);
    const auto p = lrn::build_burgers_fsi_1d(o.model);
    const auto s = o.model.parameters();
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = lrn::baseline_sweep(p, s, newton_config(tol, o.newton_max_iter), o.warm_start);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    lrn::export_csv(lrn::baseline_rows(p, s, results), o.out.value_or("results.csv"));
    const json base = baseline_summary(p, s, results, seconds);
    lrn::write_json({{"config", config_echo(o, "baseline", tol)}, {"baseline", base}}, o.summary);
    std::printf("baseline: %zu newton steps, max relative residual %.3e, %zu failed, wall %.3f s\n",
                lrn::total_iterations(results), base["max_rel_residual"].get<double>(), base["failed"].get<std::size_t>(),
                seconds);
    return any_unconverged(results) ? kExitPartial : kExitOk;
}

int cmd_compare(const Options& o) {
    const double tol = o.newton_tol.value_or(1e-4);
    lrn::Algorithm1Config cfg = o.alg1;
    cfg.newton_tol = tol;
    cfg.newton_max_iter = o.newton_max_iter;
    const auto p = lrn::build_burgers_fsi_1d(o.model);
    const auto s = o.model.parameters();
    const auto cmp = lrn::compare(p, s, newton_config(o.baseline_tol, o.newton_max_iter), o.warm_start, cfg);
    lrn::export_csv(cmp.rows, o.out.value_or("results.csv"));
    const auto& alg = cmp.algorithm1->report;
    json summary = {{"config", config_echo(o, "compare", tol)},
                    {"baseline", baseline_summary(p, s, cmp.baseline, cmp.baseline_seconds)},
                    {"algorithm1", lrn::to_json(alg)}};
    const double ratio = alg.total_newton_steps > 0
                             ? static_cast<double>(cmp.baseline_steps) / static_cast<double>(alg.total_newton_steps)
                             : 0.0;
    summary["step_ratio"] = ratio;
    lrn::write_json(summary, o.summary);
    print_subsets(alg.subsets);
    std::printf("baseline %zu newton steps (%.3f s), low-rank %zu newton steps (%.3f s), ratio %.2f\n",
                cmp.baseline_steps, cmp.baseline_seconds, alg.total_newton_steps, alg.wall_seconds, ratio);
    return alg.partial_failure() || any_unconverged(cmp.baseline) ? kExitPartial : kExitOk;
}

int cmd_svd(const Options& o) {
    const double tol = o.newton_tol.value_or(1e-4);
    const auto p = lrn::build_burgers_fsi_1d(o.model);
    const auto partition = lrn::split(o.model.parameters(), o.alg1.subsets);
    const auto sigma = lrn::exact_singular_values(p, partition, newton_config(tol, o.newton_max_iter));
    lrn::write_singular_values_csv(sigma, o.out.value_or("singular_values.csv"));
    json decay = json::array();
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        const auto& sk = sigma[k];
        const std::size_t j = std::min<std::size_t>(o.alg1.rank, sk.size());
        const double ratio = sk.empty() || sk.front() == 0.0 ? 0.0 : sk[j - 1] / sk.front();
        decay.push_back({{"subset", k}, {"sigma_1", sk.empty() ? 0.0 : sk.front()}, {"j", j}, {"ratio", ratio}});
        std::printf("subset %zu: sigma_1 = %.6e, sigma_%zu / sigma_1 = %.3e\n", k, sk.empty() ? 0.0 : sk.front(), j,
                    ratio);
    }
    lrn::write_json({{"config", config_echo(o, "svd", tol)}, {"decay", decay}}, o.summary);
    return kExitOk;
}

int cmd_spectrum(const Options& o) {
    const double tol = o.newton_tol.value_or(1e-4);
    lrn::Algorithm1Config cfg = o.alg1;
    cfg.newton_tol = tol;
    cfg.newton_max_iter = o.newton_max_iter;
    const auto p = lrn::build_burgers_fsi_1d(o.model);
    const auto subsets = lrn::spectrum_survey(p, o.model.parameters(), cfg);
    json list = json::array();
    bool failed = false;
    for (const auto& s : subsets) {
        list.push_back(lrn::to_json(s));
        failed = failed || s.failed;
    }
    lrn::write_json({{"config", config_echo(o, "spectrum", tol)}, {"subsets", list}}, o.summary);
    std::printf("%6s %9s %12s %12s %12s %12s\n", "subset", "mu_med", "lambda_lo", "lambda_hi", "d", "c");
    for (const auto& s : subsets) {
        if (s.failed) {
            std::printf("%6zu %9.1f FAILED: %s\n", s.subset, s.mu_median, s.error.c_str());
        } else {
            std::printf("%6zu %9.1f %12.8f %12.8f %12.8f %12.8f\n", s.subset, s.mu_median, s.lambda_lo, s.lambda_hi,
                        s.d, s.c);
        }
    }
    return failed ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-rank Newton solver for parameter-dependent nonlinear systems"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with option values; command-line flags take precedence");
    app.require_subcommand(1);

    Options o;
    add_options(app, o);

    auto* run = app.add_subcommand("run", "Block low-rank Newton over the parameter set")->fallthrough();
    auto* baseline = app.add_subcommand("baseline", "One Newton solve per parameter")->fallthrough();
    auto* compare = app.add_subcommand("compare", "Baseline and block low-rank runs into one CSV")->fallthrough();
    auto* svd = app.add_subcommand("svd", "Singular values of the exact per-subset corrections")->fallthrough();
    auto* spectrum = app.add_subcommand("spectrum", "Estimated (d, c) per subset")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitHard;
    }

    try {
        if (*run) return cmd_run(o);
        if (*baseline) return cmd_baseline(o);
        if (*compare) return cmd_compare(o);
        if (*svd) return cmd_svd(o);
        if (*spectrum) return cmd_spectrum(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitHard;
    }
    return kExitHard;
}
