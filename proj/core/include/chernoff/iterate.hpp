#pragma once

#include "chernoff/step_operator.hpp"
#include "chernoff/weight.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace chernoff {

// k = max{k : k h <= t}; no fractional final step.
struct Partition {
  double t = 0.0;
  double h = 0.0;
  std::size_t k = 0;
};

Partition partition(double t, double h);

struct IterateResult {
  GridFunction value;
  std::optional<SpaceTimeFunction> trajectory;  // iterates at j h, j = 0..k
};

// I(h)^k f with k from partition(t, h).
IterateResult chernoff_iterate(const StepOperator& op, const GridFunction& f, double t, double h,
                               bool record = false);

struct ComparisonReport {
  bool vacuous = false;          // a residual certificate failed
  bool pass = false;
  double max_excess = 0.0;       // max over lattice times of lhs - rhs
  double min_slack = 0.0;        // min over lattice times of rhs - lhs
  std::vector<double> lhs;       // ||(u - v)^+||_kappa at j h
  std::vector<double> rhs;       // e^{omega t}(initial gap + t sup ||(f - g)^+||_kappa)
};

// Discrete comparison on the h lattice. f_bound[j - 1] bounds (u_j - I(h)u_{j-1})/h from above,
// g_bound[j - 1] bounds (v_j - I(h)v_{j-1})/h from below.
ComparisonReport discrete_comparison_check(const StepOperator& op, const SpaceTimeFunction& u,
                                           const SpaceTimeFunction& v,
                                           const std::vector<GridFunction>& f_bound,
                                           const std::vector<GridFunction>& g_bound, double h,
                                           double T, const WeightFunction& kappa, double omega = 0.0,
                                           double tolerance = 1e-9);

}  // namespace chernoff
