#pragma once

#include "chernoff/bounds.hpp"
#include "chernoff/step_operator.hpp"
#include "chernoff/weight.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace chernoff {

struct ErrorPoint {
  double h = 0.0;
  double e_plus = 0.0;   // ||(S - I_n)^+||_kappa
  double e_minus = 0.0;  // ||(S - I_n)^-||_kappa
  double uncertainty = 0.0;

  double error() const { return e_plus > e_minus ? e_plus : e_minus; }
};

struct ErrorCurve {
  std::vector<ErrorPoint> points;  // h strictly decreasing
};

// Iterates op at every h and compares with the reference on the region.
ErrorCurve measure_errors(const StepOperator& op, const GridFunction& f, double t,
                          const std::vector<double>& h_list, const GridFunction& reference,
                          double reference_uncertainty, const WeightFunction& kappa,
                          const std::optional<Box>& region = std::nullopt);

enum class Which { max, plus, minus };

struct RateFit {
  bool conclusive = false;
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;
};

// OLS of log e on log h over the finest half (at least 3) of the points with
// e > noise_multiplier * uncertainty and e > noise_floor.
RateFit fit_rate(const ErrorCurve& curve, Which which = Which::max, double noise_multiplier = 10.0,
                 double noise_floor = 0.0);

struct BoundCheck {
  std::vector<char> checked;  // h^gamma <= eps0
  std::vector<char> pass;
  std::vector<double> bound_value;
  double max_ratio = 0.0;     // max e / (c h^gamma) over checked points
  bool all_pass = true;
};

// Compares the side of the curve matching bound.side with c h^gamma.
BoundCheck verify_bound(const ErrorCurve& curve, const BoundReport& bound, double eps0 = 1.0);

struct HolderReport {
  double max_ratio = 0.0;  // max ||u(s) - u(t)||_kappa / (|s - t| + h)^alpha
  double c = 0.0;
  std::size_t pairs = 0;
  bool pass = false;
};

// pairs holds sample indices; empty means every pair with |s - t| <= 1.
HolderReport holder_check(const SpaceTimeFunction& u, double h, double alpha, double c,
                          const WeightFunction& kappa, const std::optional<Box>& region = std::nullopt,
                          std::vector<std::pair<std::size_t, std::size_t>> pairs = {},
                          double tolerance = 1.01);

enum class Verdict { pass, fail, inconclusive };

const char* verdict_name(Verdict v);

struct RateReport {
  ErrorCurve curve;
  RateFit fit;
  RateFit fit_plus;
  RateFit fit_minus;
  std::vector<BoundReport> bounds;
  std::vector<BoundCheck> checks;
  double slope_tolerance = 0.05;
  double noise_multiplier = 10.0;
  double noise_floor = 0.0;
  double gamma_target = 0.0;          // max gamma over the bounds
  bool at_noise_floor = false;        // every error <= noise_floor; no rate to measure
  bool oracle_inconclusive = false;   // uncertainty > 10% of the smallest error
  Verdict verdict = Verdict::inconclusive;
};

RateReport assemble_rate_report(const ErrorCurve& curve, const std::vector<BoundReport>& bounds,
                                double eps0 = 1.0, double slope_tolerance = 0.05,
                                double noise_multiplier = 10.0, double noise_floor = 0.0);

}  // namespace chernoff
