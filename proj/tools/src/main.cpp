#include "chernoff/error.hpp"
#include "chernoff/mollifier.hpp"
#include "chernoff/properties.hpp"
#include "chernoff_tools/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace chernoff;
using namespace chernoff::tools;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& path, std::string out) {
  const std::string text = slurp(path);
  const ExperimentConfig cfg = parse_config(text);
  if (out.empty()) out = "out/" + cfg.name;
  const RunResult res = run_experiment(cfg, text, out);
  const auto& r = res.report;
  std::cout << cfg.name << ": verdict " << verdict_name(r.verdict) << ", slope " << r.fit.slope
            << " (target " << r.gamma_target << " - " << r.slope_tolerance << "), oracle uncertainty "
            << res.oracle_uncertainty << "\n";
  for (std::size_t i = 0; i < r.bounds.size(); ++i)
    std::cout << "  " << r.bounds[i].theorem << (r.bounds[i].side == Side::upper ? " upper" : " lower")
              << ": gamma " << r.bounds[i].gamma << ", c " << r.bounds[i].constant << ", max ratio "
              << r.checks[i].max_ratio << (r.checks[i].all_pass ? "" : "  VIOLATED") << "\n";
  if (res.holder)
    std::cout << "  time regularity: ratio " << res.holder->max_ratio << " vs c " << res.holder->c << "\n";
  std::cout << "  artifacts in " << out << "\n";
  return exit_code(r.verdict);
}

int cmd_invariants(const std::string& path, bool negated, std::size_t instances) {
  const ExperimentConfig cfg = load_config(path);
  std::shared_ptr<const StepOperator> op = cfg.make_operator();
  if (negated) op = std::make_shared<NegatedOperator>(op);
  PropertySuiteOptions opts;
  opts.seed = cfg.seed;
  opts.instances = instances;
  const auto results = run_property_suite(*op, property_grid(cfg.dimension), opts);
  nlohmann::ordered_json j;
  j["operator"] = op->name();
  j["seed"] = cfg.seed;
  j["properties"] = properties_json(results);
  j["pass"] = all_pass(results);
  std::cout << j.dump(2) << "\n";
  return all_pass(results) ? exit_pass : exit_fail;
}

int cmd_bounds(const std::string& path) {
  const ExperimentConfig cfg = load_config(path);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& b : experiment_bounds(cfg)) j.push_back(bound_json(b));
  std::cout << j.dump(2) << "\n";
  return exit_pass;
}

int cmd_kernel(int d) {
  std::cout << MollifierKernel(d).table_csv();
  return exit_pass;
}

int cmd_rates(const std::string& path, std::optional<double> gamma, double tol, double noise) {
  const ErrorCurve curve = read_error_curve(slurp(path));
  const RateFit fit = fit_rate(curve, Which::max, noise);
  nlohmann::ordered_json j;
  j["conclusive"] = fit.conclusive;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["points_used"] = fit.used;
  int code = fit.conclusive ? exit_pass : exit_inconclusive;
  if (gamma && fit.conclusive) {
    const bool ok = fit.slope >= *gamma - tol;
    j["gamma"] = *gamma;
    j["slope_pass"] = ok;
    code = ok ? exit_pass : exit_fail;
  }
  std::cout << j.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chernoff approximation experiments for convex monotone semigroups"};
  app.require_subcommand(1);

  std::string config, out, csv;
  bool negated = false;
  std::size_t instances = 1000;
  int dimension = 1;
  std::optional<double> gamma;
  double slope_tol = 0.05, noise = 10.0;

  auto* run = app.add_subcommand("run", "run a rate experiment and write its artifacts");
  run->add_option("config", config, "experiment config (INI)")->required();
  run->add_option("-o,--out", out, "artifact directory (default out/<name>)");

  auto* inv = app.add_subcommand("check-invariants", "randomized operator property suite");
  inv->add_option("config", config, "experiment config (INI)")->required();
  inv->add_flag("--negated", negated, "run the suite on the negated operator (negative control)");
  inv->add_option("-n,--instances", instances, "random instances per property");

  auto* bnd = app.add_subcommand("bounds", "print rate exponents and constants as JSON");
  bnd->add_option("config", config, "experiment config (INI)")->required();

  auto* ker = app.add_subcommand("kernel-constants", "print the mollifier b_{k,l} table as CSV");
  ker->add_option("-d,--dimension", dimension, "space dimension")->check(CLI::IsMember({1, 2}));

  auto* rat = app.add_subcommand("rates", "fit a convergence rate to an existing error curve CSV");
  rat->add_option("csv", csv, "CSV with columns h,e_plus,e_minus")->required();
  rat->add_option("--gamma", gamma, "theoretical exponent for the slope gate");
  rat->add_option("--slope-tolerance", slope_tol, "absolute slope tolerance");
  rat->add_option("--noise-multiplier", noise, "noise floor multiplier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*run) return cmd_run(config, out);
    if (*inv) return cmd_invariants(config, negated, instances);
    if (*bnd) return cmd_bounds(config);
    if (*ker) return cmd_kernel(dimension);
    if (*rat) return cmd_rates(csv, gamma, slope_tol, noise);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  }
  return exit_config;
}
