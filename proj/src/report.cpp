#include "lrnewton/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "lrnewton/errors.hpp"

namespace lrn {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

nlohmann::json real_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void export_csv(std::vector<ResidualRow> rows, const std::filesystem::path& path) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResidualRow& a, const ResidualRow& b) {
        return std::tie(a.index, a.method) < std::tie(b.index, b.method);
    });
    auto out = open_for_write(path);
    out << "index,mu,subset,rel_residual,method\n";
    for (const auto& r : rows) {
        out << r.index << ',' << format_real(r.mu) << ',' << r.subset << ',' << format_real(r.rel_residual) << ','
            << r.method << '\n';
    }
    finish(out, path);
}

std::vector<ResidualRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line != "index,mu,subset,rel_residual,method") {
        throw Error("'" + path.string() + "' is not a residual CSV");
    }
    std::vector<ResidualRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[5];
        for (auto& field : f) std::getline(ss, field, ',');
        rows.push_back({std::stoul(f[0]), std::strtod(f[1].c_str(), nullptr), std::stol(f[2]),
                        std::strtod(f[3].c_str(), nullptr), f[4]});
    }
    return rows;
}

void write_singular_values_csv(const std::vector<std::vector<double>>& sigma, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "subset,j,sigma\n";
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        for (std::size_t j = 0; j < sigma[k].size(); ++j) out << k << ',' << j + 1 << ',' << format_real(sigma[k][j]) << '\n';
    }
    finish(out, path);
}

void export_singular_values(const ParametricProblem& p, const ParameterPartition& partition,
                            const NewtonConfig& median_cfg, const std::filesystem::path& path) {
    write_singular_values_csv(exact_singular_values(p, partition, median_cfg), path);
}

nlohmann::json to_json(const SubsetReport& s) {
    nlohmann::json j;
    j["subset"] = s.subset;
    j["begin"] = s.begin;
    j["end"] = s.end;
    j["mu_median"] = s.mu_median;
    j["newton_iterations"] = s.newton_iterations;
    j["newton_residual"] = real_or_null(s.newton_residual);
    j["cheb_iterations"] = s.cheb_iterations;
    j["cheb_residual"] = real_or_null(s.cheb_residual);
    j["cheb_converged"] = s.cheb_converged;
    j["d"] = s.d;
    j["c"] = s.c;
    j["lambda_lo"] = s.lambda_lo;
    j["lambda_hi"] = s.lambda_hi;
    j["rank"] = s.rank;
    j["seconds"] = {{"median_newton", s.newton_seconds}, {"spectrum", s.spectrum_seconds}, {"chebyshev", s.cheb_seconds}};
    j["failed"] = s.failed;
    if (s.failed) j["error"] = s.error;
    return j;
}

nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j;
    j["totals"] = {{"median_newton_steps", r.median_newton_steps},
                   {"matrix_equation_steps", r.matrix_equation_steps},
                   {"newton_steps", r.total_newton_steps},
                   {"wall_seconds", r.wall_seconds}};
    double worst = 0.0;
    std::size_t missing = 0;
    for (const auto& p : r.parameters) {
        if (std::isfinite(p.rel_residual)) {
            worst = std::max(worst, p.rel_residual);
        } else {
            ++missing;
        }
    }
    j["max_rel_residual"] = worst;
    j["missing_columns"] = missing;
    j["subsets"] = nlohmann::json::array();
    for (const auto& s : r.subsets) j["subsets"].push_back(to_json(s));
    return j;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

}  // namespace lrn
