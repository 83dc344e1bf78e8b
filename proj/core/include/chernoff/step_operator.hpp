#pragma once

#include "chernoff/grid_function.hpp"

#include <functional>
#include <string>

namespace chernoff {

using BoundStep = std::function<GridFunction(const GridFunction&)>;

// A family (I(t))_{t >= 0} of one-step operators on grid functions.
class StepOperator {
 public:
  virtual ~StepOperator() = default;

  virtual GridFunction apply(const GridFunction& f, double t) const = 0;

  // Evaluator for a fixed (grid, t) that can be reused across iterations.
  virtual BoundStep bind(const Grid& grid, double t) const {
    (void)grid;
    return [this, t](const GridFunction& f) { return apply(f, t); };
  }

  virtual std::string name() const = 0;
};

}  // namespace chernoff
