#include "chernoff/weight.hpp"

#include "chernoff/error.hpp"

#include <algorithm>
#include <cmath>

namespace chernoff {

namespace {

double kappa_closed(WeightKind kind, double q, double r2) {
  if (kind == WeightKind::one) return 1.0;
  return std::pow(1.0 + r2, -0.5 * q);
}

}  // namespace

WeightFunction::WeightFunction(Grid grid, WeightKind kind, double q)
    : grid_(grid), kind_(kind), q_(q), values_(grid.size()) {
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    auto x = grid_.point(i);
    values_[i] = kappa_closed(kind_, q_, x[0] * x[0] + x[1] * x[1]);
  }
  c_kappa_ = kappa_constant(*this);
}

WeightFunction WeightFunction::one(const Grid& grid) {
  return WeightFunction(grid, WeightKind::one, 0.0);
}

WeightFunction WeightFunction::inverse_polynomial(const Grid& grid, double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("weight exponent q must be positive");
  return WeightFunction(grid, WeightKind::inverse_polynomial, q);
}

double WeightFunction::evaluate(std::span<const double> x) const {
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  return kappa_closed(kind_, q_, r2);
}

double kappa_constant(const WeightFunction& kappa, int offset_refinement) {
  const Grid& g = kappa.grid();
  const int d = g.dimension();
  for (int a = 0; a < d; ++a) {
    if (g.upper(a) - g.lower(a) < 2.0)
      throw DomainError("grid must span a ball of radius 1 to compute c_kappa");
  }
  if (kappa.kind() == WeightKind::one) return 1.0;
  if (offset_refinement < 1) throw DomainError("offset refinement must be >= 1");

  std::array<double, 2> step{g.spacing(0) / offset_refinement, 0.0};
  std::array<long, 2> reach{static_cast<long>(std::floor(1.0 / step[0])), 0};
  if (d == 2) {
    step[1] = g.spacing(1) / offset_refinement;
    reach[1] = static_cast<long>(std::floor(1.0 / step[1]));
  }
  const double q = kappa.q();
  double best = 1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto x = g.point(i);
    const double nx = 1.0 + x[0] * x[0] + x[1] * x[1];
    for (long a = -reach[0]; a <= reach[0]; ++a) {
      const double y0 = a * step[0];
      for (long b = -reach[1]; b <= reach[1]; ++b) {
        const double y1 = b * step[1];
        if (y0 * y0 + y1 * y1 > 1.0) continue;
        const double z0 = x[0] - y0, z1 = x[1] - y1;
        const double ratio = std::pow((1.0 + z0 * z0 + z1 * z1) / nx, 0.5 * q);
        best = std::max(best, ratio);
      }
    }
  }
  return best;
}

}  // namespace chernoff
