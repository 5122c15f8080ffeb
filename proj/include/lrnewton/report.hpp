#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrnewton/driver.hpp"

namespace lrn {

/// Header `index,mu,subset,rel_residual,method`; rows sorted by (index, method);
/// reals printed with 17 significant digits. Throws Error with the path on I/O failure.
void export_csv(std::vector<ResidualRow> rows, const std::filesystem::path& path);

/// Header `subset,j,sigma`, j 1-based.
void write_singular_values_csv(const std::vector<std::vector<double>>& sigma, const std::filesystem::path& path);

/// exact_singular_values followed by write_singular_values_csv.
void export_singular_values(const ParametricProblem& p, const ParameterPartition& partition,
                            const NewtonConfig& median_cfg, const std::filesystem::path& path);

std::vector<ResidualRow> read_csv(const std::filesystem::path& path);

nlohmann::json to_json(const SubsetReport& s);
nlohmann::json to_json(const RunReport& r);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

std::string format_real(double v);

}  // namespace lrn
