#include "chernoff/iterate.hpp"

#include "chernoff/error.hpp"
#include "chernoff/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chernoff {

Partition partition(double t, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("partition step h must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("partition time t must be non-negative");
  auto k = static_cast<std::size_t>(std::floor(t / h));
  // Guard against t/h landing just below an integer.
  if (static_cast<double>(k + 1) * h <= t * (1.0 + 1e-14)) ++k;
  while (k > 0 && static_cast<double>(k) * h > t * (1.0 + 1e-14)) --k;
  return {t, h, k};
}

IterateResult chernoff_iterate(const StepOperator& op, const GridFunction& f, double t, double h,
                               bool record) {
  const Partition p = partition(t, h);
  IterateResult out{f, std::nullopt};
  std::vector<double> times;
  std::vector<GridFunction> samples;
  if (record) {
    times.push_back(0.0);
    samples.push_back(f);
  }
  if (p.k > 0) {
    const BoundStep step = op.bind(f.grid(), h);
    for (std::size_t j = 1; j <= p.k; ++j) {
      try {
        out.value = step(out.value);
      } catch (const std::exception& e) {
        throw NumericError(op.name() + " step " + std::to_string(j) + " failed: " + e.what());
      }
      if (record) {
        times.push_back(static_cast<double>(j) * h);
        samples.push_back(out.value);
      }
    }
  }
  if (record) out.trajectory.emplace(std::move(times), std::move(samples));
  return out;
}

ComparisonReport discrete_comparison_check(const StepOperator& op, const SpaceTimeFunction& u,
                                           const SpaceTimeFunction& v,
                                           const std::vector<GridFunction>& f_bound,
                                           const std::vector<GridFunction>& g_bound, double h,
                                           double T, const WeightFunction& kappa, double omega,
                                           double tolerance) {
  if (!(h > 0.0)) throw DomainError("comparison step h must be positive");
  if (u.size() != v.size()) throw DomainError("u and v need the same number of lattice times");
  const std::size_t n = std::min(u.size(), partition(T, h).k + 1);
  if (f_bound.size() + 1 < n || g_bound.size() + 1 < n)
    throw DomainError("one residual bound per lattice step is required");
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(u.times()[j] - static_cast<double>(j) * h) > 1e-12 * (1.0 + T) ||
        std::abs(v.times()[j] - static_cast<double>(j) * h) > 1e-12 * (1.0 + T))
      throw DomainError("trajectories must be sampled at j h");

  ComparisonReport rep;
  const BoundStep step = op.bind(u.grid(), h);
  const double slack = 1e-9;
  for (std::size_t j = 1; j < n; ++j) {
    const GridFunction ru = (1.0 / h) * (u.at(j) - step(u.at(j - 1)));
    const GridFunction rv = (1.0 / h) * (v.at(j) - step(v.at(j - 1)));
    for (std::size_t x = 0; x < ru.size(); ++x) {
      if (ru[x] > f_bound[j - 1][x] + slack * (1.0 + std::abs(ru[x]))) rep.vacuous = true;
      if (rv[x] < g_bound[j - 1][x] - slack * (1.0 + std::abs(rv[x]))) rep.vacuous = true;
    }
  }

  const double gap0 = positive_part_norm(u.at(0) - v.at(0), kappa);
  double forcing = 0.0;
  rep.min_slack = INFINITY;
  rep.max_excess = -INFINITY;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * h;
    if (j > 0) forcing = std::max(forcing, positive_part_norm(f_bound[j - 1] - g_bound[j - 1], kappa));
    const double lhs = positive_part_norm(u.at(j) - v.at(j), kappa);
    const double rhs = std::exp(omega * t) * (gap0 + t * forcing);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.min_slack = std::min(rep.min_slack, rhs - lhs);
    rep.max_excess = std::max(rep.max_excess, lhs - rhs);
  }
  rep.pass = !rep.vacuous && rep.max_excess <= tolerance;
  return rep;
}

}  // namespace chernoff
