#include "chernoff/norms.hpp"

#include "chernoff/error.hpp"

#include <algorithm>
#include <cmath>

namespace chernoff {

namespace {

template <class Map>
double scan(const GridFunction& f, const WeightFunction& kappa, const std::optional<Box>& region,
            Map map) {
  if (f.grid() != kappa.grid()) throw DomainError("function and weight live on different grids");
  const Grid& g = f.grid();
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (region && !region->contains(g.point(i), g.dimension())) continue;
    best = std::max(best, map(f[i]) * kappa[i]);
  }
  return best;
}

}  // namespace

double weighted_norm(const GridFunction& f, const WeightFunction& kappa,
                     const std::optional<Box>& region) {
  return scan(f, kappa, region, [](double v) { return std::abs(v); });
}

double positive_part_norm(const GridFunction& f, const WeightFunction& kappa,
                          const std::optional<Box>& region) {
  return scan(f, kappa, region, [](double v) { return std::max(v, 0.0); });
}

double negative_part_norm(const GridFunction& f, const WeightFunction& kappa,
                          const std::optional<Box>& region) {
  return scan(f, kappa, region, [](double v) { return std::max(-v, 0.0); });
}

double lipschitz_estimate(const GridFunction& f) {
  const Grid& g = f.grid();
  const auto& v = f.values();
  double best = 0.0;
  if (g.dimension() == 1) {
    const double h = g.spacing(0);
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      best = std::max(best, std::abs(v[i + 1] - v[i]) / h);
    return best;
  }
  const std::size_t n0 = g.count(0), n1 = g.count(1);
  const double h0 = g.spacing(0), h1 = g.spacing(1);
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      const double c = v[i * n1 + j];
      if (i + 1 < n0) best = std::max(best, std::abs(v[(i + 1) * n1 + j] - c) / h0);
      if (j + 1 < n1) best = std::max(best, std::abs(v[i * n1 + j + 1] - c) / h1);
    }
  }
  return best;
}

}  // namespace chernoff
