#pragma once

#include "chernoff/grid.hpp"

#include <span>
#include <vector>

namespace chernoff {

enum class WeightKind { one, inverse_polynomial };

// kappa(x) = 1 or (1 + |x|^2)^(-q/2), tabulated on a grid with c_kappa.
class WeightFunction {
 public:
  static WeightFunction one(const Grid& grid);
  static WeightFunction inverse_polynomial(const Grid& grid, double q);

  WeightKind kind() const { return kind_; }
  double q() const { return q_; }
  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double c_kappa() const { return c_kappa_; }

  double evaluate(std::span<const double> x) const;

 private:
  WeightFunction(Grid grid, WeightKind kind, double q);

  Grid grid_;
  WeightKind kind_;
  double q_;
  std::vector<double> values_;
  double c_kappa_ = 1.0;
};

// Discrete sup of kappa(x)/kappa(x - y) over grid x and lattice offsets |y| <= 1.
// offset_refinement > 1 scans offsets on a finer lattice.
double kappa_constant(const WeightFunction& kappa, int offset_refinement = 1);

}  // namespace chernoff
