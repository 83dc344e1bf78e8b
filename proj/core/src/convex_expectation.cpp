#include "chernoff/convex_expectation.hpp"

#include "chernoff/error.hpp"
#include "chernoff/gauss_hermite.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace chernoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Symmetric square root of a 2x2 PSD matrix.
Mat2 sqrt_psd(const Mat2& c) {
  const double a = c[0][0], b = c[0][1], d = c[1][1];
  const double s = std::sqrt(std::max(a * d - b * b, 0.0));
  const double t = std::sqrt(std::max(a + d + 2.0 * s, 0.0));
  if (t == 0.0) return Mat2{};
  return Mat2{{{(a + s) / t, b / t}, {b / t, (d + s) / t}}};
}

double gaussian_abs_moment_1d(double mu, double sigma, int j) {
  if (sigma == 0.0) return std::pow(std::abs(mu), j);
  using boost::math::quadrature::gauss_kronrod;
  auto f = [=](double x) {
    const double z = (x - mu) / sigma;
    return std::pow(std::abs(x), j) * std::exp(-0.5 * z * z) / (sigma * 2.5066282746310002);
  };
  const double lo = mu - 14.0 * sigma, hi = mu + 14.0 * sigma;
  if (lo < 0.0 && hi > 0.0)
    return gauss_kronrod<double, 31>::integrate(f, lo, 0.0, 15, 1e-14) +
           gauss_kronrod<double, 31>::integrate(f, 0.0, hi, 15, 1e-14);
  return gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-14);
}

// E|m + R z|^j for z ~ N(0, I_2), R = cov^{1/2}; nested adaptive rules cope with the cone point.
double gaussian_abs_moment_2d(const Vec2& m, const Mat2& cov, int j) {
  if (j == 0) return 1.0;
  using boost::math::quadrature::gauss_kronrod;
  const Mat2 r = sqrt_psd(cov);
  auto phi = [](double z) { return std::exp(-0.5 * z * z) / 2.5066282746310002; };
  auto outer = [&](double z0) {
    auto inner = [&](double z1) {
      const double a = m[0] + r[0][0] * z0 + r[0][1] * z1;
      const double b = m[1] + r[1][0] * z0 + r[1][1] * z1;
      return std::pow(std::hypot(a, b), j) * phi(z1);
    };
    return phi(z0) * gauss_kronrod<double, 31>::integrate(inner, -14.0, 14.0, 12, 1e-13);
  };
  return gauss_kronrod<double, 31>::integrate(outer, -14.0, 14.0, 12, 1e-12);
}

LatticeKernel scaled_law_kernel(const Scenario& s, const Grid& grid, double scale,
                                const KernelOptions& opts) {
  switch (s.kind) {
    case ScenarioKind::point_mass:
      return point_lattice_kernel(grid, {s.mean[0] * scale, s.mean[1] * scale});
    case ScenarioKind::discrete: {
      std::vector<Vec2> atoms(s.atoms.size());
      for (std::size_t i = 0; i < atoms.size(); ++i)
        atoms[i] = {s.atoms[i][0] * scale, s.atoms[i][1] * scale};
      return discrete_lattice_kernel(grid, atoms, s.probs);
    }
    case ScenarioKind::gaussian: {
      Vec2 mean{s.mean[0] * scale, s.mean[1] * scale};
      const double s2 = scale * scale;
      Mat2 cov{{{s.cov[0][0] * s2, s.cov[0][1] * s2}, {s.cov[1][0] * s2, s.cov[1][1] * s2}}};
      return gaussian_lattice_kernel(grid, mean, cov, opts);
    }
  }
  throw DomainError("unknown scenario kind");
}

void require_grid(const ScenarioConvexExpectation& ce, const Grid& grid) {
  if (grid.dimension() != ce.dimension())
    throw DomainError("expectation and grid dimensions differ");
}

BoundStep bind_lattice(LatticeStep step) {
  auto shared = std::make_shared<LatticeStep>(std::move(step));
  return [shared](const GridFunction& f) { return shared->apply(f); };
}

}  // namespace

Scenario Scenario::point(int d, Vec2 location, double penalty) {
  Scenario s;
  s.kind = ScenarioKind::point_mass;
  s.d = d;
  s.mean = location;
  s.penalty = penalty;
  s.validate();
  return s;
}

Scenario Scenario::gaussian(int d, Vec2 mean, Mat2 cov, double penalty) {
  Scenario s;
  s.kind = ScenarioKind::gaussian;
  s.d = d;
  s.mean = mean;
  s.cov = cov;
  s.penalty = penalty;
  s.validate();
  return s;
}

Scenario Scenario::gaussian1d(double mean, double sigma, double penalty) {
  return gaussian(1, {mean, 0.0}, Mat2{{{sigma * sigma, 0.0}, {0.0, 0.0}}}, penalty);
}

Scenario Scenario::discrete(int d, std::vector<Vec2> atoms, std::vector<double> probs,
                            double penalty) {
  Scenario s;
  s.kind = ScenarioKind::discrete;
  s.d = d;
  s.atoms = std::move(atoms);
  s.probs = std::move(probs);
  s.penalty = penalty;
  s.validate();
  return s;
}

void Scenario::validate() const {
  if (d != 1 && d != 2) throw DomainError("scenario dimension must be 1 or 2");
  if (!(penalty >= 0.0) || !std::isfinite(penalty))
    throw DomainError("scenario penalty must be finite and non-negative");
  for (int a = 0; a < d; ++a)
    if (!std::isfinite(mean[a])) throw DomainError("scenario mean must be finite");
  if (kind == ScenarioKind::gaussian) {
    const double a = cov[0][0], b = cov[0][1], c = d == 2 ? cov[1][1] : 0.0;
    if (d == 2 && std::abs(cov[0][1] - cov[1][0]) > 1e-12 * std::max({1.0, a, c}))
      throw DomainError("covariance must be symmetric");
    if (a < 0.0 || c < 0.0 || (d == 2 && a * c - b * b < -1e-12 * std::max({1.0, a * c})))
      throw DomainError("covariance must be positive semidefinite");
  }
  if (kind == ScenarioKind::discrete) {
    if (atoms.empty() || atoms.size() != probs.size())
      throw DomainError("discrete scenario needs one probability per atom");
    double total = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0)) throw DomainError("discrete probabilities must be non-negative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("discrete probabilities must sum to 1");
  }
}

Vec2 Scenario::first_moment() const {
  if (kind != ScenarioKind::discrete) return mean;
  Vec2 m{};
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    m[0] += probs[i] * atoms[i][0];
    m[1] += probs[i] * atoms[i][1];
  }
  return m;
}

Mat2 Scenario::second_moment() const {
  Mat2 m{};
  auto add = [&](const Vec2& x, double p) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) m[a][b] += p * x[a] * x[b];
  };
  if (kind == ScenarioKind::discrete) {
    for (std::size_t i = 0; i < atoms.size(); ++i) add(atoms[i], probs[i]);
    return m;
  }
  add(mean, 1.0);
  if (kind == ScenarioKind::gaussian)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) m[a][b] += cov[a][b];
  return m;
}

ScenarioConvexExpectation::ScenarioConvexExpectation(std::vector<Scenario> scenarios,
                                                     QuadratureOptions quad, KernelOptions kernel)
    : d_(0), scenarios_(std::move(scenarios)), quad_(quad), kernel_(kernel) {
  if (scenarios_.empty()) throw DomainError("convex expectation needs at least one scenario");
  d_ = scenarios_.front().d;
  double min_alpha = kInf;
  for (const auto& s : scenarios_) {
    s.validate();
    if (s.d != d_) throw DomainError("all scenarios must share one dimension");
    min_alpha = std::min(min_alpha, s.penalty);
  }
  if (min_alpha != 0.0) throw DomainError("the smallest scenario penalty must be 0 so that E[0] = 0");
  if (quad_.gh_nodes < 1) throw DomainError("Gauss-Hermite node count must be positive");
}

bool ScenarioConvexExpectation::is_sublinear() const {
  return std::all_of(scenarios_.begin(), scenarios_.end(),
                     [](const Scenario& s) { return s.penalty == 0.0; });
}

bool ScenarioConvexExpectation::is_zero_mean() const {
  return std::all_of(scenarios_.begin(), scenarios_.end(), [](const Scenario& s) {
    auto m = s.first_moment();
    return std::abs(m[0]) <= 1e-12 && std::abs(m[1]) <= 1e-12;
  });
}

bool ScenarioConvexExpectation::third_moments_vanish() const {
  if (d_ != 1) return false;
  for (const auto& s : scenarios_) {
    double m3 = 0.0;
    switch (s.kind) {
      case ScenarioKind::point_mass: m3 = std::pow(s.mean[0], 3); break;
      case ScenarioKind::gaussian:
        m3 = std::pow(s.mean[0], 3) + 3.0 * s.mean[0] * s.cov[0][0];
        break;
      case ScenarioKind::discrete:
        for (std::size_t i = 0; i < s.atoms.size(); ++i) m3 += s.probs[i] * std::pow(s.atoms[i][0], 3);
        break;
    }
    if (std::abs(m3) > 1e-12) return false;
  }
  return true;
}

double ScenarioConvexExpectation::eval_scenario(std::size_t i, const Payoff& payoff) const {
  const Scenario& s = scenarios_.at(i);
  const auto dim = static_cast<std::size_t>(d_);
  double v = 0.0;
  switch (s.kind) {
    case ScenarioKind::point_mass: v = payoff(std::span<const double>(s.mean.data(), dim)); break;
    case ScenarioKind::discrete:
      for (std::size_t k = 0; k < s.atoms.size(); ++k)
        v += s.probs[k] * payoff(std::span<const double>(s.atoms[k].data(), dim));
      break;
    case ScenarioKind::gaussian: {
      const auto& rule = gauss_hermite(quad_.gh_nodes);
      if (d_ == 1) {
        const double sigma = std::sqrt(s.cov[0][0]);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double x = s.mean[0] + sigma * rule.nodes[k];
          v += rule.weights[k] * payoff(std::span<const double>(&x, 1));
        }
      } else {
        const Mat2 r = sqrt_psd(s.cov);
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
          for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
            const double z0 = rule.nodes[a], z1 = rule.nodes[b];
            const double x[2] = {s.mean[0] + r[0][0] * z0 + r[0][1] * z1,
                                 s.mean[1] + r[1][0] * z0 + r[1][1] * z1};
            v += rule.weights[a] * rule.weights[b] * payoff(std::span<const double>(x, 2));
          }
        }
      }
      break;
    }
  }
  if (!std::isfinite(v)) throw NumericError("scenario expectation is not finite");
  return v;
}

double ScenarioConvexExpectation::eval(const Payoff& payoff) const {
  double best = -kInf;
  for (std::size_t i = 0; i < scenarios_.size(); ++i)
    best = std::max(best, eval_scenario(i, payoff) - scenarios_[i].penalty);
  return best;
}

std::array<double, 5> ScenarioConvexExpectation::absolute_moments(std::size_t i) const {
  const Scenario& s = scenarios_.at(i);
  std::array<double, 5> m{};
  if (s.kind == ScenarioKind::gaussian && d_ == 1) {
    const double sigma = std::sqrt(s.cov[0][0]);
    for (int j = 0; j <= 4; ++j) m[static_cast<std::size_t>(j)] = gaussian_abs_moment_1d(s.mean[0], sigma, j);
    return m;
  }
  if (s.kind == ScenarioKind::gaussian) {
    for (int j = 0; j <= 4; ++j) m[static_cast<std::size_t>(j)] = gaussian_abs_moment_2d(s.mean, s.cov, j);
    return m;
  }
  for (int j = 0; j <= 4; ++j)
    m[static_cast<std::size_t>(j)] = eval_scenario(i, [this, j](std::span<const double> x) {
      const double r = d_ == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
      return std::pow(r, j);
    });
  return m;
}

double ScenarioConvexExpectation::eval_abs_polynomial(const std::array<double, 5>& coeffs) const {
  double best = -kInf;
  for (std::size_t i = 0; i < scenarios_.size(); ++i) {
    auto m = absolute_moments(i);
    double v = 0.0;
    for (std::size_t j = 0; j < 5; ++j) v += coeffs[j] * m[j];
    best = std::max(best, v - scenarios_[i].penalty);
  }
  return best;
}

double cexp_eval(const ScenarioConvexExpectation& ce, const ScenarioConvexExpectation::Payoff& payoff) {
  return ce.eval(payoff);
}

LatticeStep lln_lattice_step(const ScenarioConvexExpectation& ce, const Grid& grid, double t) {
  if (t < 0.0) throw DomainError("lln step needs t >= 0");
  require_grid(ce, grid);
  LatticeStep step;
  if (t == 0.0) return step;
  for (const auto& s : ce.scenarios())
    step.add(scaled_law_kernel(s, grid, t, ce.kernel_options()), t * s.penalty);
  return step;
}

LatticeStep clt_lattice_step(const ScenarioConvexExpectation& ce, const Grid& grid, double t) {
  if (t < 0.0) throw DomainError("clt step needs t >= 0");
  require_grid(ce, grid);
  LatticeStep step;
  if (t == 0.0) return step;
  const double root = std::sqrt(t);
  for (const auto& s : ce.scenarios()) {
    const bool centred = std::abs(s.mean[0]) == 0.0 && std::abs(s.mean[1]) == 0.0;
    if (s.kind == ScenarioKind::gaussian && centred) {
      // N(0, t cov) is a convolution semigroup in t, so dyadic powers apply.
      step.add(brownian_lattice_kernel(grid, {0.0, 0.0}, s.cov, t, ce.kernel_options()),
               t * s.penalty);
    } else {
      step.add(scaled_law_kernel(s, grid, root, ce.kernel_options()), t * s.penalty);
    }
  }
  return step;
}

GridFunction lln_step(const ScenarioConvexExpectation& ce, const GridFunction& f, double t) {
  return lln_lattice_step(ce, f.grid(), t).apply(f);
}

GridFunction clt_step(const ScenarioConvexExpectation& ce, const GridFunction& f, double t) {
  return clt_lattice_step(ce, f.grid(), t).apply(f);
}

BoundStep LlnOperator::bind(const Grid& grid, double t) const {
  return bind_lattice(lln_lattice_step(ce_, grid, t));
}

CltOperator::CltOperator(ScenarioConvexExpectation ce) : ce_(std::move(ce)) {
  if (!ce_.is_zero_mean())
    throw DomainError("clt step requires every scenario to have mean zero");
}

BoundStep CltOperator::bind(const Grid& grid, double t) const {
  return bind_lattice(clt_lattice_step(ce_, grid, t));
}

LegendreConjugate::LegendreConjugate(const ScenarioConvexExpectation& ce, std::size_t points)
    : d_(ce.dimension()), radius_(0.0), points_(points) {
  double mmax = 0.0;
  for (const auto& s : ce.scenarios()) {
    means_.push_back(s.first_moment());
    penalties_.push_back(s.penalty);
    mmax = std::max(mmax, std::hypot(means_.back()[0], means_.back()[1]));
  }
  radius_ = 4.0 * mmax + 4.0;
  if (points_ == 0) points_ = d_ == 1 ? 4096 : 256;
  if (points_ < 3) throw DomainError("Legendre z grid needs at least 3 points per axis");
}

double LegendreConjugate::g(double z0, double z1) const {
  double best = -kInf;
  for (std::size_t i = 0; i < means_.size(); ++i)
    best = std::max(best, z0 * means_[i][0] + z1 * means_[i][1] - penalties_[i]);
  return best;
}

double LegendreConjugate::support(std::span<const double> u) const {
  double best = -kInf;
  for (const auto& m : means_) best = std::max(best, m[0] * u[0] + (d_ == 2 ? m[1] * u[1] : 0.0));
  return best;
}

double LegendreConjugate::operator()(std::span<const double> y) const {
  const double y0 = y[0], y1 = d_ == 2 ? y[1] : 0.0;
  auto psi = [&](double z0, double z1) { return y0 * z0 + y1 * z1 - g(z0, z1); };
  const double step = 2.0 * radius_ / static_cast<double>(points_ - 1);
  double best = -kInf;
  double bz0 = 0.0, bz1 = 0.0;
  bool on_boundary = false;
  auto consider = [&](double z0, double z1, bool boundary) {
    const double v = psi(z0, z1);
    if (v > best) {
      best = v;
      bz0 = z0;
      bz1 = z1;
      on_boundary = boundary;
    }
  };
  // Kinks of the piecewise-affine g make the transform exact for finite scenario sets.
  const std::size_t n = means_.size();
  if (d_ == 1) {
    for (std::size_t k = 0; k < points_; ++k)
      consider(-radius_ + static_cast<double>(k) * step, 0.0, k == 0 || k + 1 == points_);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dm = means_[i][0] - means_[j][0];
        if (dm == 0.0) continue;
        const double z = (penalties_[i] - penalties_[j]) / dm;
        if (std::abs(z) < radius_) consider(z, 0.0, false);
      }
  } else {
    for (std::size_t a = 0; a < points_; ++a)
      for (std::size_t b = 0; b < points_; ++b)
        consider(-radius_ + static_cast<double>(a) * step, -radius_ + static_cast<double>(b) * step,
                 a == 0 || b == 0 || a + 1 == points_ || b + 1 == points_);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          const double a00 = means_[i][0] - means_[j][0], a01 = means_[i][1] - means_[j][1];
          const double a10 = means_[i][0] - means_[k][0], a11 = means_[i][1] - means_[k][1];
          const double det = a00 * a11 - a01 * a10;
          if (std::abs(det) < 1e-14) continue;
          const double r0 = penalties_[i] - penalties_[j], r1 = penalties_[i] - penalties_[k];
          const double z0 = (r0 * a11 - a01 * r1) / det, z1 = (a00 * r1 - r0 * a10) / det;
          if (std::abs(z0) < radius_ && std::abs(z1) < radius_) consider(z0, z1, false);
        }
  }
  if (on_boundary) {
    const double norm = std::hypot(bz0, bz1);
    const double u[2] = {bz0 / norm, bz1 / norm};
    const double slope = y0 * u[0] + y1 * u[1] - support(std::span<const double>(u, 2));
    const double scale = 1.0 + std::hypot(y0, y1);
    if (slope > 1e-12 * scale) return kInf;
    if (psi(1.5 * bz0, 1.5 * bz1) > best + 1e-12 * (1.0 + std::abs(best)))
      throw DomainError("Legendre z grid too narrow: conjugate still increasing at the boundary");
  }
  return best;
}

GridFunction maximally_distributed_limit(const ScenarioConvexExpectation& ce, const GridFunction& f,
                                         double t) {
  if (t < 0.0) throw DomainError("limit time must be non-negative");
  const Grid& g = f.grid();
  require_grid(ce, g);
  if (t == 0.0) return f;
  LegendreConjugate phi(ce);
  const int d = g.dimension();
  // Offsets reach the hull of the means scaled by t.
  std::array<long, 2> lo{0, 0}, hi{0, 0};
  for (int a = 0; a < d; ++a) {
    double mn = kInf, mx = -kInf;
    for (const auto& s : ce.scenarios()) {
      mn = std::min(mn, s.first_moment()[a]);
      mx = std::max(mx, s.first_moment()[a]);
    }
    lo[a] = static_cast<long>(std::floor(t * mn / g.spacing(a) - 1e-9));
    hi[a] = static_cast<long>(std::ceil(t * mx / g.spacing(a) + 1e-9));
  }
  struct Offset {
    long i, j;
    double cost;
  };
  std::vector<Offset> offsets;
  for (long i = lo[0]; i <= hi[0]; ++i)
    for (long j = lo[1]; j <= hi[1]; ++j) {
      const double y[2] = {i * g.spacing(0) / t, d == 2 ? j * g.spacing(1) / t : 0.0};
      const double c = phi(std::span<const double>(y, static_cast<std::size_t>(d)));
      if (std::isfinite(c)) offsets.push_back({i, j, t * c});
    }
  if (offsets.empty()) throw DomainError("conjugate is infinite at every lattice offset");
  const long n0 = static_cast<long>(g.count(0)), n1 = static_cast<long>(g.count(1));
  std::vector<double> out(g.size());
  for (long i = 0; i < n0; ++i)
    for (long j = 0; j < (d == 2 ? n1 : 1); ++j) {
      double best = -kInf;
      for (const auto& o : offsets) {
        const long ii = std::clamp(i + o.i, 0L, n0 - 1);
        const long jj = d == 2 ? std::clamp(j + o.j, 0L, n1 - 1) : 0;
        best = std::max(best, f[static_cast<std::size_t>(d == 2 ? ii * n1 + jj : ii)] - o.cost);
      }
      out[static_cast<std::size_t>(d == 2 ? i * n1 + j : i)] = best;
    }
  return GridFunction(g, std::move(out));
}

double g_function(const ScenarioConvexExpectation& ce, const Mat2& a) {
  double best = -kInf;
  for (const auto& s : ce.scenarios()) {
    const Mat2 m = s.second_moment();
    double tr = 0.0;
    for (int i = 0; i < ce.dimension(); ++i)
      for (int j = 0; j < ce.dimension(); ++j) tr += a[i][j] * m[j][i];
    best = std::max(best, 0.5 * tr - s.penalty);
  }
  return best;
}

GrowthCertificate growth_certificate(const ScenarioConvexExpectation& ce,
                                     const std::vector<double>& lambda_grid,
                                     const std::vector<std::array<double, 2>>& c_grid) {
  GrowthCertificate cert;
  cert.lambda_grid = lambda_grid.empty()
                         ? std::vector<double>{1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0, 1e3, 1e4}
                         : lambda_grid;
  cert.c_grid = c_grid.empty()
                    ? std::vector<std::array<double, 2>>{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0},
                                                         {1.0, 0.1}, {0.1, 1.0}, {1.0, 10.0},
                                                         {10.0, 1.0}, {0.01, 0.0}, {0.0, 0.01}}
                    : c_grid;
  for (double l : cert.lambda_grid)
    if (!(l >= 1.0)) throw DomainError("growth certificate lambda grid must be >= 1");

  std::vector<std::array<double, 5>> moments;
  for (std::size_t i = 0; i < ce.scenarios().size(); ++i) moments.push_back(ce.absolute_moments(i));
  auto expect = [&](double c1, double c2) {
    double best = -kInf;
    for (std::size_t i = 0; i < moments.size(); ++i)
      best = std::max(best, c1 * moments[i][2] + c2 * moments[i][3] - ce.scenarios()[i].penalty);
    return best;
  };
  auto linear_max = [&](double c1, double c2) {
    double best = -kInf;
    for (const auto& m : moments) best = std::max(best, c1 * m[2] + c2 * m[3]);
    return best;
  };

  for (int p = 1; p <= 3; ++p) {
    double a = 0.0;
    bool ok = true;
    for (const auto& c : cert.c_grid) {
      const double base = expect(c[0], c[1]);
      if (!(base > 0.0)) {
        if (linear_max(c[0], c[1]) > 0.0) ok = false;
        continue;
      }
      for (double l : cert.lambda_grid)
        a = std::max(a, expect(l * c[0], l * c[1]) / (std::pow(l, p) * base));
      if (p == 1) {
        const double asym = linear_max(c[0], c[1]) / base;
        cert.asymptotic_ratio = std::max(cert.asymptotic_ratio, asym);
        a = std::max(a, asym);
      }
    }
    if (ok && std::isfinite(a)) {
      cert.a = a;
      cert.p = p;
      cert.found = true;
      return cert;
    }
  }
  return cert;
}

}  // namespace chernoff
