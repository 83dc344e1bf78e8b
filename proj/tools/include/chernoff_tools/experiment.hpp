#pragma once

#include "chernoff/properties.hpp"
#include "chernoff/rates.hpp"
#include "chernoff_tools/config.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace chernoff::tools {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { exit_pass = 0, exit_fail = 1, exit_inconclusive = 2, exit_config = 3 };

int exit_code(Verdict v);

std::string sha256_hex(const std::string& bytes);

std::vector<BoundReport> experiment_bounds(const ExperimentConfig& cfg);

struct RunResult {
  RateReport report;
  std::optional<HolderReport> holder;
  double oracle_uncertainty = 0.0;
  std::vector<std::string> files;
};

// Runs the experiment and writes error_curve.csv, rate_report.json, bound_report.json
// and manifest.json into out_dir.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& config_text,
                         const std::string& out_dir);

nlohmann::ordered_json bound_json(const BoundReport& b);
nlohmann::ordered_json rate_json(const RateReport& r, const std::optional<HolderReport>& holder);
nlohmann::ordered_json properties_json(const std::vector<PropertyResult>& results);

std::string error_curve_csv(const RateReport& r);

// Reads h,e_plus,e_minus[,...] rows; the header line is required.
ErrorCurve read_error_curve(const std::string& csv);

}  // namespace chernoff::tools
