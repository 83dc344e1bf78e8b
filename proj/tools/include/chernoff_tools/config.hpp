#pragma once

#include "chernoff/convex_expectation.hpp"
#include "chernoff/nisio.hpp"
#include "chernoff/reference.hpp"
#include "chernoff/weight.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chernoff::tools {

enum class OperatorKind { nisio, lln, clt };
enum class ReferenceKind { fine_oracle, heat_exact, gheat_convex, maximally_distributed, clt_limit };

struct PayoffSpec {
  std::string kind = "min_abs";  // min_abs, abs, cos, square, neg_square, linear
  double cap = 1.0;
  double scale = 1.0;
  SpatialFunction function() const;
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  double t = 1.0;
  std::vector<double> h_list;

  int dimension = 1;
  std::array<double, 2> lower{};
  std::array<double, 2> upper{};
  std::array<std::size_t, 2> count{1, 1};

  std::string weight = "one";
  double q = 1.0;

  PayoffSpec payoff;

  OperatorKind op = OperatorKind::nisio;
  std::vector<Control> controls;
  std::vector<Scenario> scenarios;
  bool smooth = true;
  KernelOptions kernel;
  std::size_t quad_nodes = 32;
  std::optional<GeneratorBounds> bounds_override;

  ReferenceKind reference = ReferenceKind::fine_oracle;
  double h_fine = 0.0;

  double slope_tolerance = 0.05;
  double noise_multiplier = 10.0;
  double noise_floor = 0.0;
  std::optional<double> interior_margin;
  std::optional<double> r;
  double eps0 = 1.0;
  bool record_trajectory = false;

  Grid grid() const;
  WeightFunction kappa() const;
  GridFunction initial() const;
  std::shared_ptr<StepOperator> make_operator() const;
  NisioFamily family() const;
  ScenarioConvexExpectation expectation() const;
  double margin() const;
  Box region() const;
  double lipschitz_r() const;
};

// Parses the INI text; every offending field is listed in the thrown ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace chernoff::tools
