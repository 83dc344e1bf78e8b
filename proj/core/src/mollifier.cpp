#include "chernoff/mollifier.hpp"

#include "chernoff/error.hpp"
#include "chernoff/lattice_kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace chernoff {

namespace {

constexpr std::size_t kCdfCells = 1024;

double pow_int(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Finite-difference stencils: (offset in steps, coefficient).
std::vector<std::pair<int, double>> stencil(int order) {
  switch (order) {
    case 0: return {{0, 1.0}};
    case 1: return {{-1, -0.5}, {1, 0.5}};
    case 2: return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
    case 3: return {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
    default: throw DomainError("finite-difference order above 3 is not supported");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct AxisWeights {
  long first = 0;
  std::vector<double> w;
};

// Normalized spatial weights beta(sqrt(d)(z_m - x)/eps2) for lattice points z_m.
AxisWeights axis_weights(const Grid& g, int axis, double x, double eps2, int d) {
  const double h = g.spacing(axis);
  const double radius = eps2 / std::sqrt(static_cast<double>(d));
  const double c = (x - g.lower(axis)) / h;
  const long lo = static_cast<long>(std::ceil(c - radius / h));
  const long hi = static_cast<long>(std::floor(c + radius / h));
  AxisWeights out{lo, {}};
  double total = 0.0;
  for (long m = lo; m <= hi; ++m) {
    const double z = (static_cast<double>(m) - c) * h / radius;
    const double w = MollifierKernel::beta(z);
    out.w.push_back(w);
    total += w;
  }
  if (!(total > 0.0)) {
    // Radius below one spacing: fall back to linear interpolation.
    const long i = static_cast<long>(std::floor(c));
    const double a = c - static_cast<double>(i);
    return AxisWeights{i, {1.0 - a, a}};
  }
  for (double& w : out.w) w /= total;
  return out;
}

double spatial_sum(const Grid& g, const std::vector<double>& field, std::span<const double> x,
                   double eps2) {
  const int d = g.dimension();
  auto w0 = axis_weights(g, 0, x[0], eps2, d);
  const long n0 = static_cast<long>(g.count(0));
  if (d == 1) {
    double acc = 0.0;
    for (std::size_t m = 0; m < w0.w.size(); ++m) {
      const long i = std::clamp(w0.first + static_cast<long>(m), 0L, n0 - 1);
      acc += w0.w[m] * field[static_cast<std::size_t>(i)];
    }
    return acc;
  }
  auto w1 = axis_weights(g, 1, x[1], eps2, d);
  const long n1 = static_cast<long>(g.count(1));
  double acc = 0.0;
  for (std::size_t a = 0; a < w0.w.size(); ++a) {
    const long i = std::clamp(w0.first + static_cast<long>(a), 0L, n0 - 1);
    double row = 0.0;
    for (std::size_t b = 0; b < w1.w.size(); ++b) {
      const long j = std::clamp(w1.first + static_cast<long>(b), 0L, n1 - 1);
      row += w1.w[b] * field[static_cast<std::size_t>(i * n1 + j)];
    }
    acc += w0.w[a] * row;
  }
  return acc;
}

void require_coverage(const SpaceTimeFunction& u, double t, double eps1) {
  const auto& ts = u.times();
  const double tol = 1e-12 * std::max(1.0, std::abs(ts.back()));
  if (t < ts.front() - tol || t + eps1 > ts.back() + tol) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "mollify needs samples on [%.6g, %.6g] but the trajectory covers [%.6g, %.6g]",
                  t, t + eps1, ts.front(), ts.back());
    throw DomainError(buf);
  }
}

// Time-averaged field sum_j W_j(t) u_j with exact cell integrals of the time profile.
std::vector<double> time_mix(const MollifierKernel& kernel, const SpaceTimeFunction& u,
                             double eps1, double t) {
  require_coverage(u, t, eps1);
  const auto& ts = u.times();
  std::vector<double> out(u.grid().size(), 0.0);
  const std::size_t j0 = u.index_at(std::min(t, ts.back()));
  for (std::size_t j = j0; j < ts.size(); ++j) {
    const double a = std::max(ts[j], t);
    const double b = j + 1 < ts.size() ? std::min(ts[j + 1], t + eps1) : t + eps1;
    if (a >= t + eps1) break;
    if (b <= a) continue;
    const double w = kernel.time_cdf((b - t) / eps1) - kernel.time_cdf((a - t) / eps1);
    if (w == 0.0) continue;
    const auto& v = u.at(j).values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * v[i];
  }
  return out;
}

}  // namespace

double MollifierKernel::beta(double z) {
  const double w = 1.0 - z * z;
  if (!(w > 0.0)) return 0.0;
  return std::exp(-1.0 / w);
}

double MollifierKernel::beta_derivative(int j, double z) {
  const double w = 1.0 - z * z;
  if (!(w > 1e-3)) return 0.0;  // beta < exp(-1000) underflows
  const double b = std::exp(-1.0 / w);
  const double g1 = -2.0 * z / (w * w);
  const double g2 = -2.0 / (w * w) - 8.0 * z * z / (w * w * w);
  const double g3 = -24.0 * z / (w * w * w) - 48.0 * z * z * z / (w * w * w * w);
  switch (j) {
    case 0: return b;
    case 1: return b * g1;
    case 2: return b * (g1 * g1 + g2);
    case 3: return b * (g1 * g1 * g1 + 3.0 * g1 * g2 + g3);
    default: throw DomainError("beta derivatives are tabulated up to order 3");
  }
}

MollifierKernel::MollifierKernel(int dimension) : d_(dimension), c_norm_(0.0) {
  if (d_ != 1 && d_ != 2) throw DomainError("mollifier dimension must be 1 or 2");
  constexpr int cells = 64;
  for (int c = 0; c < cells; ++c) {
    const double a = -1.0 + 2.0 * c / cells, b = -1.0 + 2.0 * (c + 1) / cells;
    beta_l1_[0] += boost::math::quadrature::gauss<double, 30>::integrate(beta, a, b);
  }
  // int |g'| is the total variation of g; beta^{(j-1)} vanishes at +-1, so sum its jumps
  // between consecutive zeros of beta^{(j)}.
  for (int j = 1; j <= 3; ++j) {
    auto dj = [j](double z) { return beta_derivative(j, z); };
    constexpr int scan = 4096;
    std::vector<double> knots{-1.0};
    double za = -1.0, fa = dj(za);
    for (int c = 0; c < scan; ++c) {
      const double zb = -1.0 + (2.0 * c + 1.0) / scan, fb = dj(zb);  // odd offsets miss z = 0
      if (fa * fb < 0.0) {
        boost::uintmax_t iters = 200;
        auto root = boost::math::tools::toms748_solve(dj, za, zb, fa, fb,
                                                      boost::math::tools::eps_tolerance<double>(), iters);
        knots.push_back(0.5 * (root.first + root.second));
      }
      za = zb;
      fa = fb;
    }
    knots.push_back(1.0);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
      total += std::abs(beta_derivative(j - 1, knots[i + 1]) - beta_derivative(j - 1, knots[i]));
    beta_l1_[static_cast<std::size_t>(j)] = total;
  }
  const double b0 = beta_l1_[0];
  const double dd = static_cast<double>(d_);
  c_norm_ = 2.0 * std::pow(dd, 0.5 * dd) / std::pow(b0, dd + 1.0);

  for (int k = 0; k <= kMaxK; ++k) {
    const double time_factor = std::ldexp(beta_l1_[static_cast<std::size_t>(k)] / b0, k);
    for (int l = 0; l <= kMaxL; ++l) {
      double best = 0.0;
      if (d_ == 1) {
        best = beta_l1_[static_cast<std::size_t>(l)] / b0;
      } else {
        for (int a = 0; a <= l; ++a)
          best = std::max(best, beta_l1_[static_cast<std::size_t>(a)] *
                                    beta_l1_[static_cast<std::size_t>(l - a)] / (b0 * b0));
      }
      table_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
          time_factor * std::pow(dd, 0.5 * l) * best;
    }
  }
  table_[0][0] = 1.0;

  cdf_nodes_.assign(kCdfCells + 1, 0.0);
  for (std::size_t c = 0; c < kCdfCells; ++c) {
    const double a = -1.0 + 2.0 * static_cast<double>(c) / kCdfCells;
    const double b = -1.0 + 2.0 * static_cast<double>(c + 1) / kCdfCells;
    cdf_nodes_[c + 1] = cdf_nodes_[c] + boost::math::quadrature::gauss<double, 20>::integrate(beta, a, b);
  }
}

double MollifierKernel::density(double s, std::span<const double> y) const {
  if (!(s > 0.0 && s < 1.0)) return 0.0;
  double v = c_norm_ * beta(2.0 * s - 1.0);
  const double sd = std::sqrt(static_cast<double>(d_));
  for (int i = 0; i < d_; ++i) v *= beta(sd * y[static_cast<std::size_t>(i)]);
  return v;
}

double MollifierKernel::kernel_constant(int k, int l) const {
  if (k < 0 || k > kMaxK || l < 0 || l > kMaxL)
    throw DomainError("kernel constants are tabulated for k <= 2, l <= 3");
  return table_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
}

double MollifierKernel::time_density(double s) const {
  return 2.0 * beta(2.0 * s - 1.0) / beta_l1_[0];
}

double MollifierKernel::time_cdf(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double z = 2.0 * s - 1.0;
  const double pos = (z + 1.0) * 0.5 * kCdfCells;
  auto c = static_cast<std::size_t>(pos);
  if (c >= kCdfCells) c = kCdfCells - 1;
  const double a = -1.0 + 2.0 * static_cast<double>(c) / kCdfCells;
  double v = cdf_nodes_[c];
  if (z > a) v += boost::math::quadrature::gauss<double, 20>::integrate(beta, a, z);
  return v / cdf_nodes_[kCdfCells];
}

std::string MollifierKernel::table_csv() const {
  std::ostringstream out;
  out << "k,l,value\n";
  char buf[64];
  for (int k = 0; k <= kMaxK; ++k) {
    for (int l = 0; l <= kMaxL; ++l) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", k, l, kernel_constant(k, l));
      out << buf;
    }
  }
  return out.str();
}

SpaceTimeFunction mollify(const MollifierKernel& kernel, const SpaceTimeFunction& u, Epsilon eps,
                          const std::vector<double>& output_times) {
  if (!(eps.eps1 > 0.0) || !(eps.eps2 > 0.0)) throw DomainError("epsilon radii must be positive");
  const Grid& g = u.grid();
  if (g.dimension() != kernel.dimension()) throw DomainError("kernel and grid dimensions differ");
  for (int a = 0; a < g.dimension(); ++a)
    if (g.upper(a) - g.lower(a) < 2.0 * eps.eps2)
      throw DomainError("grid is narrower than the spatial mollifier radius");
  if (output_times.empty()) throw DomainError("mollify needs at least one output time");

  // Spatial part as a lattice kernel (output on grid points).
  std::array<Kernel1D, 2> axes{Kernel1D{0, {1.0}}, Kernel1D{0, {1.0}}};
  for (int a = 0; a < g.dimension(); ++a) {
    auto w = axis_weights(g, a, g.lower(a), eps.eps2, g.dimension());
    axes[static_cast<std::size_t>(a)] = Kernel1D{w.first, w.w};
  }
  LatticeKernel space = LatticeKernel::separable(g.dimension(), axes[0], axes[1]);

  std::vector<GridFunction> out;
  out.reserve(output_times.size());
  for (double t : output_times) {
    auto mixed = time_mix(kernel, u, eps.eps1, t);
    std::vector<double> smooth;
    space.apply(g, mixed, smooth);
    out.emplace_back(g, std::move(smooth));
  }
  return SpaceTimeFunction(output_times, std::move(out));
}

double mollify_at(const MollifierKernel& kernel, const SpaceTimeFunction& u, Epsilon eps, double t,
                  std::span<const double> x) {
  if (!(eps.eps1 > 0.0) || !(eps.eps2 > 0.0)) throw DomainError("epsilon radii must be positive");
  auto mixed = time_mix(kernel, u, eps.eps1, t);
  return spatial_sum(u.grid(), mixed, x, eps.eps2);
}

DerivativeReport derivative_bound_check(const MollifierKernel& kernel, const SpaceTimeFunction& u,
                                        Epsilon eps, int k, int l,
                                        const DerivativeCheckOptions& opts) {
  if (k == 0 && l == 0) throw DomainError("(k, l) = (0, 0) is the identity; nothing to check");
  if (k < 0 || k > MollifierKernel::kMaxK || l < 0 || l > MollifierKernel::kMaxL)
    throw DomainError("derivative check supports k <= 2, l <= 3");
  const Grid& g = u.grid();
  const int d = g.dimension();
  const auto& ts = u.times();
  const double dt = eps.eps1 * opts.fd_fraction;
  const double dx = eps.eps2 * opts.fd_fraction;

  std::vector<double> times = opts.times;
  if (times.empty()) {
    const double lo = ts.front() + 2.0 * dt;
    const double hi = ts.back() - eps.eps1 - 2.0 * dt;
    if (hi < lo) throw DomainError("trajectory too short for the requested eps1");
    for (int i = 0; i < 5; ++i) times.push_back(lo + (hi - lo) * i / 4.0);
  }

  // Running Lipschitz envelope r(s) = max_{t_j <= s} Lip(u_j).
  auto r_at = [&](double s) {
    if (opts.r) return *opts.r;
    double r = 0.0;
    for (std::size_t j = 0; j < ts.size() && ts[j] <= s + 1e-12; ++j)
      r = std::max(r, u.at(j).lipschitz());
    return r;
  };
  auto osc_at = [&](double t) {
    const std::size_t j0 = u.index_at(t);
    double osc = 0.0;
    for (std::size_t j = j0 + 1; j < ts.size() && ts[j] <= t + eps.eps1; ++j)
      osc = std::max(osc, (u.at(j) - u.at(j0)).sup_norm());
    return osc;
  };

  // Spatial evaluation points: interior grid points, evenly thinned.
  const double margin = 4.0 * dx;
  std::vector<std::array<double, 2>> points;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto x = g.point(i);
    bool inside = true;
    for (int a = 0; a < d; ++a)
      inside = inside && x[a] >= g.lower(a) + margin && x[a] <= g.upper(a) - margin;
    if (inside) points.push_back(x);
  }
  if (points.empty()) throw DomainError("no interior points for the derivative check");
  if (points.size() > opts.max_points) {
    std::vector<std::array<double, 2>> thin;
    const double stride = static_cast<double>(points.size()) / static_cast<double>(opts.max_points);
    for (std::size_t i = 0; i < opts.max_points; ++i)
      thin.push_back(points[static_cast<std::size_t>(static_cast<double>(i) * stride)]);
    points = std::move(thin);
  }

  const auto tst = stencil(k);
  DerivativeReport rep;
  rep.k = k;
  rep.l = l;
  rep.ratio = 0.0;
  for (double t : times) {
    std::vector<std::vector<double>> fields;
    for (const auto& [off, c] : tst) {
      (void)c;
      fields.push_back(time_mix(kernel, u, eps.eps1, t + off * dt));
    }
    auto eval = [&](const std::vector<double>& field, std::array<double, 2> x) {
      return spatial_sum(g, field, std::span<const double>(x.data(), static_cast<std::size_t>(d)),
                         eps.eps2);
    };
    // Mixed derivative d_t^k d_0^a d_1^(l-a) at x.
    auto partial = [&](const std::array<double, 2>& x, int a) {
      const auto s0 = stencil(a);
      const auto s1 = stencil(l - a);
      double acc = 0.0;
      for (std::size_t ti = 0; ti < tst.size(); ++ti) {
        for (const auto& [o0, c0] : s0) {
          if (d == 1) {
            acc += tst[ti].second * c0 * eval(fields[ti], {x[0] + o0 * dx, 0.0});
            continue;
          }
          for (const auto& [o1, c1] : s1)
            acc += tst[ti].second * c0 * c1 * eval(fields[ti], {x[0] + o0 * dx, x[1] + o1 * dx});
        }
      }
      return acc / (pow_int(dt, k) * pow_int(dx, l));
    };
    double measured = 0.0;
    for (const auto& x : points) {
      double v;
      if (d == 1) {
        v = std::abs(partial(x, l));
      } else {
        double s2 = 0.0;
        for (int a = 0; a <= l; ++a) {
          const double p = partial(x, a);
          s2 += binomial(l, a) * p * p;
        }
        v = std::sqrt(s2);
      }
      measured = std::max(measured, v);
    }
    double bound, r;
    if (l >= 1) {
      r = r_at(t + eps.eps1);
      bound = std::pow(static_cast<double>(d), 0.5 * l) * r * kernel.kernel_constant(k, l - 1) *
              std::pow(eps.eps1, -k) * std::pow(eps.eps2, 1 - l);
    } else {
      r = osc_at(t);
      bound = r * kernel.kernel_constant(k, 0) * std::pow(eps.eps1, -k);
    }
    const double ratio = bound > 0.0 ? measured / bound : (measured > 1e-8 ? INFINITY : 0.0);
    if (ratio >= rep.ratio) {
      rep.ratio = ratio;
      rep.measured = measured;
      rep.bound = bound;
      rep.r = r;
    }
  }
  rep.pass = rep.ratio <= opts.tolerance;
  return rep;
}

}  // namespace chernoff
