#pragma once

#include "chernoff/step_operator.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace chernoff {

struct PropertyResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  double max_violation = 0.0;

  bool pass() const { return failures == 0; }
};

struct PropertySuiteOptions {
  std::size_t instances = 1000;
  std::uint64_t seed = 0;
  double t_max = 0.05;      // step sizes drawn from (0, t_max]
  double tolerance = 1e-9;
  double omega = 0.0;
};

// Small grid used by the suite: 129 points on [-4, 4] in 1D, 33 x 33 in 2D.
Grid property_grid(int d);

// monotone, convex, zero, contraction, lipschitz, translation, lambda, kappa_shift, jensen.
std::vector<PropertyResult> run_property_suite(const StepOperator& op, const Grid& grid,
                                               const PropertySuiteOptions& opts = {});

bool all_pass(const std::vector<PropertyResult>& results);

// -I(t)f; a negative control for the monotonicity check.
class NegatedOperator : public StepOperator {
 public:
  explicit NegatedOperator(std::shared_ptr<const StepOperator> inner) : inner_(std::move(inner)) {}
  GridFunction apply(const GridFunction& f, double t) const override { return -inner_->apply(f, t); }
  std::string name() const override { return "negated-" + inner_->name(); }

 private:
  std::shared_ptr<const StepOperator> inner_;
};

}  // namespace chernoff
