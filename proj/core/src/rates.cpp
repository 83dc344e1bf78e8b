#include "chernoff/rates.hpp"

#include "chernoff/error.hpp"
#include "chernoff/iterate.hpp"
#include "chernoff/norms.hpp"

#include <algorithm>
#include <cmath>

namespace chernoff {

ErrorCurve measure_errors(const StepOperator& op, const GridFunction& f, double t,
                          const std::vector<double>& h_list, const GridFunction& reference,
                          double reference_uncertainty, const WeightFunction& kappa,
                          const std::optional<Box>& region) {
  if (h_list.empty()) throw DomainError("h list is empty");
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0)) throw DomainError("every h must be positive");
    if (i > 0 && !(h_list[i] < h_list[i - 1])) throw DomainError("h list must be strictly decreasing");
  }
  ErrorCurve curve;
  for (double h : h_list) {
    const GridFunction diff = reference - chernoff_iterate(op, f, t, h).value;
    curve.points.push_back({h, positive_part_norm(diff, kappa, region),
                            negative_part_norm(diff, kappa, region), reference_uncertainty});
  }
  return curve;
}

namespace {

double pick(const ErrorPoint& p, Which w) {
  switch (w) {
    case Which::plus: return p.e_plus;
    case Which::minus: return p.e_minus;
    case Which::max: break;
  }
  return p.error();
}

}  // namespace

RateFit fit_rate(const ErrorCurve& curve, Which which, double noise_multiplier, double noise_floor) {
  std::vector<std::pair<double, double>> usable;  // (h, e)
  for (const auto& p : curve.points) {
    const double e = pick(p, which);
    if (e > 0.0 && e > noise_floor && e > noise_multiplier * p.uncertainty) usable.emplace_back(p.h, e);
  }
  RateFit fit;
  if (usable.size() < 3) return fit;
  std::sort(usable.begin(), usable.end());  // finest first
  const std::size_t m = std::max<std::size_t>(3, (usable.size() + 1) / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(usable[i].first), y = std::log(usable[i].second);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(m);
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) return fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.used = m;
  fit.conclusive = true;
  return fit;
}

BoundCheck verify_bound(const ErrorCurve& curve, const BoundReport& bound, double eps0) {
  BoundCheck chk;
  for (const auto& p : curve.points) {
    const double hg = std::pow(p.h, bound.gamma);
    const double bv = bound.constant * hg;
    const bool admissible = hg <= eps0;
    const double e = bound.side == Side::upper ? p.e_plus : p.e_minus;
    const bool ok = !admissible || e <= bv * (1.0 + 1e-12);
    chk.checked.push_back(admissible ? 1 : 0);
    chk.pass.push_back(ok ? 1 : 0);
    chk.bound_value.push_back(bv);
    if (admissible) {
      chk.max_ratio = std::max(chk.max_ratio, bv > 0.0 ? e / bv : (e > 0.0 ? INFINITY : 0.0));
      chk.all_pass = chk.all_pass && ok;
    }
  }
  return chk;
}

HolderReport holder_check(const SpaceTimeFunction& u, double h, double alpha, double c,
                          const WeightFunction& kappa, const std::optional<Box>& region,
                          std::vector<std::pair<std::size_t, std::size_t>> pairs, double tolerance) {
  const auto& ts = u.times();
  if (pairs.empty())
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j)
        if (ts[j] - ts[i] <= 1.0 + 1e-12) pairs.emplace_back(i, j);
  HolderReport rep;
  rep.c = c;
  for (const auto& [i, j] : pairs) {
    if (i >= ts.size() || j >= ts.size()) throw DomainError("holder pair index out of range");
    const double gap = std::abs(ts[i] - ts[j]);
    const double denom = std::pow(gap + h, alpha);
    if (!(denom > 0.0)) continue;
    rep.max_ratio = std::max(rep.max_ratio, weighted_norm(u.at(i) - u.at(j), kappa, region) / denom);
    ++rep.pairs;
  }
  rep.pass = rep.max_ratio <= c * tolerance;
  return rep;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

RateReport assemble_rate_report(const ErrorCurve& curve, const std::vector<BoundReport>& bounds,
                                double eps0, double slope_tolerance, double noise_multiplier,
                                double noise_floor) {
  RateReport rep;
  rep.curve = curve;
  rep.bounds = bounds;
  rep.slope_tolerance = slope_tolerance;
  rep.noise_multiplier = noise_multiplier;
  rep.noise_floor = noise_floor;
  rep.fit = fit_rate(curve, Which::max, noise_multiplier, noise_floor);
  rep.fit_plus = fit_rate(curve, Which::plus, noise_multiplier, noise_floor);
  rep.fit_minus = fit_rate(curve, Which::minus, noise_multiplier, noise_floor);
  bool all = true;
  for (const auto& b : bounds) {
    rep.checks.push_back(verify_bound(curve, b, eps0));
    all = all && rep.checks.back().all_pass;
    rep.gamma_target = std::max(rep.gamma_target, b.gamma);
  }
  double smallest = INFINITY, unc = 0.0;
  for (const auto& p : curve.points) {
    smallest = std::min(smallest, p.error());
    unc = std::max(unc, p.uncertainty);
  }
  rep.oracle_inconclusive = !curve.points.empty() && unc > 0.1 * smallest;
  rep.at_noise_floor = !curve.points.empty() && std::all_of(curve.points.begin(), curve.points.end(),
                                                            [&](const ErrorPoint& p) { return p.error() <= noise_floor; });
  if (!all)
    rep.verdict = Verdict::fail;
  else if (rep.at_noise_floor)
    rep.verdict = Verdict::pass;
  else if (!rep.fit.conclusive || rep.oracle_inconclusive)
    rep.verdict = Verdict::inconclusive;
  else
    rep.verdict = rep.fit.slope >= rep.gamma_target - slope_tolerance ? Verdict::pass : Verdict::fail;
  return rep;
}

}  // namespace chernoff
