#include "chernoff/reference.hpp"

#include "chernoff/error.hpp"
#include "chernoff/gauss_hermite.hpp"
#include "chernoff/iterate.hpp"
#include "chernoff/norms.hpp"
#include "chernoff/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace chernoff {

namespace {

Mat2 sqrt_psd(const Mat2& c) {
  const double a = c[0][0], b = c[0][1], d = c[1][1];
  const double s = std::sqrt(std::max(a * d - b * b, 0.0));
  const double t = std::sqrt(std::max(a + d + 2.0 * s, 0.0));
  if (t == 0.0) return Mat2{};
  return Mat2{{{(a + s) / t, b / t}, {b / t, (d + s) / t}}};
}

double norm_cdf(double u) { return 0.5 * std::erfc(-u * M_SQRT1_2); }
double norm_pdf(double u) { return 0.3989422804014327 * std::exp(-0.5 * u * u); }

// E[f(c + s Z)] by adaptive Gauss-Kronrod; subdivision finds kinks that defeat Gauss-Hermite.
double expectation_1d(const SpatialFunction& f, double c, double s) {
  if (s == 0.0) return f(std::span<const double>(&c, 1));
  auto g = [&](double z) {
    const double y = c + s * z;
    return f(std::span<const double>(&y, 1)) * norm_pdf(z);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -14.0, 14.0, 20, 1e-13);
}

// Exact E[g(c + s Z)] for the piecewise-linear interpolant g with constant continuation.
double interpolant_expectation(const GridFunction& f, double c, double s) {
  const Grid& grid = f.grid();
  if (s == 0.0) return f.interpolate(std::span<const double>(&c, 1));
  const auto& v = f.values();
  const long n = static_cast<long>(grid.count(0));
  const double y0 = grid.lower(0), dx = grid.spacing(0);
  const long lo = std::clamp(static_cast<long>(std::floor((c - 12.0 * s - y0) / dx)), 0L, n - 1);
  const long hi = std::clamp(static_cast<long>(std::ceil((c + 12.0 * s - y0) / dx)), 0L, n - 1);
  double acc = v[0] * norm_cdf((y0 - c) / s) + v[n - 1] * norm_cdf((c - grid.coord(0, n - 1)) / s);
  double ua = (grid.coord(0, lo) - c) / s;
  double Pa = norm_cdf(ua), pa = norm_pdf(ua);
  for (long i = lo; i < hi; ++i) {
    const double a = grid.coord(0, i);
    const double ub = (grid.coord(0, i + 1) - c) / s;
    const double Pb = norm_cdf(ub), pb = norm_pdf(ub);
    const double beta = (v[i + 1] - v[i]) / dx;
    acc += (v[i] - beta * a + beta * c) * (Pb - Pa) - beta * s * (pb - pa);
    Pa = Pb;
    pa = pb;
  }
  return acc;
}

}  // namespace

GridFunction heat_exact(const SpatialFunction& f, const Grid& grid, const Control& c, double t,
                        std::size_t nodes) {
  if (t < 0.0) throw DomainError("heat_exact needs t >= 0");
  const int d = grid.dimension();
  std::vector<double> out(grid.size());
  if (t == 0.0) return GridFunction::sample(grid, f);
  const auto& rule = gauss_hermite(nodes);
  Mat2 cov = c.covariance();
  for (auto& row : cov)
    for (double& v : row) v *= t;
  const Mat2 r = sqrt_psd(cov);
  parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const auto x = grid.point(k);
      double acc = 0.0;
      if (d == 1) {
        acc = expectation_1d(f, x[0] + c.m[0] * t, r[0][0]);
      } else {
        for (std::size_t a = 0; a < rule.nodes.size(); ++a)
          for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double z0 = rule.nodes[a], z1 = rule.nodes[q];
            const double y[2] = {x[0] + c.m[0] * t + r[0][0] * z0 + r[0][1] * z1,
                                 x[1] + c.m[1] * t + r[1][0] * z0 + r[1][1] * z1};
            acc += rule.weights[a] * rule.weights[q] * f(std::span<const double>(y, 2));
          }
      }
      out[k] = acc;
    }
  }, 64);
  return GridFunction(grid, std::move(out));
}

GridFunction heat_exact(const GridFunction& f, const Control& c, double t, std::size_t nodes) {
  if (t < 0.0) throw DomainError("heat_exact needs t >= 0");
  if (f.grid().dimension() == 1) {
    const Grid& grid = f.grid();
    const double s = std::abs(c.sigma[0][0]) * std::sqrt(t);
    std::vector<double> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) out[k] = interpolant_expectation(f, grid.coord(0, k) + c.m[0] * t, s);
    }, 64);
    return GridFunction(grid, std::move(out));
  }
  return heat_exact([&f](std::span<const double> x) { return f.interpolate(x); }, f.grid(), c, t, nodes);
}

Curvature classify_curvature(const GridFunction& f, double tol) {
  if (f.grid().dimension() != 1) throw DomainError("curvature classification is 1D only");
  bool pos = false, neg = false;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double d2 = f[i + 1] - 2.0 * f[i] + f[i - 1];
    const double scale = tol * (1.0 + std::abs(f[i - 1]) + std::abs(f[i]) + std::abs(f[i + 1]));
    if (d2 > scale) pos = true;
    if (d2 < -scale) neg = true;
  }
  if (pos && neg) return Curvature::neither;
  if (pos) return Curvature::convex;
  if (neg) return Curvature::concave;
  return Curvature::linear;
}

namespace {

double pick_sigma(Curvature c, double sigma_min, double sigma_max) {
  if (!(sigma_min >= 0.0) || sigma_max < sigma_min)
    throw DomainError("need 0 <= sigma_min <= sigma_max");
  if (c == Curvature::neither)
    throw DomainError("payoff is neither convex nor concave; use the fine oracle");
  return c == Curvature::concave ? sigma_min : sigma_max;
}

}  // namespace

GridFunction gheat_convex_reference(const GridFunction& f, double sigma_min, double sigma_max, double t,
                                    std::size_t nodes) {
  const double s = pick_sigma(classify_curvature(f), sigma_min, sigma_max);
  return heat_exact(f, Control::scalar(s), t, nodes);
}

GridFunction gheat_convex_reference(const SpatialFunction& f, const Grid& grid, double sigma_min,
                                    double sigma_max, double t, std::size_t nodes) {
  const double s = pick_sigma(classify_curvature(GridFunction::sample(grid, f)), sigma_min, sigma_max);
  return heat_exact(f, grid, Control::scalar(s), t, nodes);
}

OracleResult fine_oracle(const StepOperator& op, const GridFunction& f, double t, double h_fine,
                         const std::optional<WeightFunction>& kappa, const std::optional<Box>& region) {
  if (!(h_fine > 0.0)) throw DomainError("oracle step must be positive");
  GridFunction fine = chernoff_iterate(op, f, t, h_fine).value;
  GridFunction coarse = chernoff_iterate(op, f, t, 2.0 * h_fine).value;
  const WeightFunction w = kappa ? *kappa : WeightFunction::one(f.grid());
  const double u = weighted_norm(fine - coarse, w, region);
  return {std::move(fine), std::move(coarse), u};
}

LimitReference clt_limit_reference(const ScenarioConvexExpectation& ce, const GridFunction& f,
                                   double h_fine, const std::optional<Box>& region) {
  if (ce.dimension() != 1 || f.grid().dimension() != 1)
    throw DomainError("clt limit reference is implemented for d = 1");
  if (!ce.is_zero_mean()) throw DomainError("clt limit needs zero-mean scenarios");
  bool gaussian_family = ce.is_sublinear();
  double smin = INFINITY, smax = 0.0;
  for (const auto& s : ce.scenarios()) {
    if (s.kind != ScenarioKind::gaussian) gaussian_family = false;
    const double sigma = std::sqrt(s.second_moment()[0][0]);
    smin = std::min(smin, sigma);
    smax = std::max(smax, sigma);
  }
  const Curvature c = classify_curvature(f);
  if (gaussian_family && c != Curvature::neither)
    return {gheat_convex_reference(f, smin, smax, 1.0), 0.0, true};
  CltOperator op(ce);
  auto o = fine_oracle(op, f, 1.0, h_fine, std::nullopt, region);
  return {std::move(o.value), o.uncertainty, false};
}

}  // namespace chernoff
