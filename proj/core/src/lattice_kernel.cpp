#include "chernoff/lattice_kernel.hpp"

#include "chernoff/error.hpp"
#include "chernoff/gauss_hermite.hpp"
#include "chernoff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace chernoff {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double norm_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
double norm_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// psi(z) = E[(Z + z)^+] = z Phi(z) + phi(z); accurate for z <= 0.
double psi_left(double z) { return z * norm_cdf(z) + norm_pdf(z); }

void trim(Kernel1D& k) {
  std::size_t b = 0, e = k.weights.size();
  while (b < e && !(k.weights[b] > 0.0)) ++b;
  while (e > b && !(k.weights[e - 1] > 0.0)) --e;
  if (b == e) throw NumericError("lattice kernel has no mass");
  k.weights = std::vector<double>(k.weights.begin() + static_cast<long>(b),
                                  k.weights.begin() + static_cast<long>(e));
  k.offset += static_cast<long>(b);
}

void normalize(Kernel1D& k) {
  double m = 0.0;
  for (double& w : k.weights) {
    if (!(w > 0.0)) w = 0.0;
    m += w;
  }
  if (!(m > 0.0) || !std::isfinite(m)) throw NumericError("lattice kernel has no mass");
  for (double& w : k.weights) w /= m;
  trim(k);
}

// Exact Gaussian expectation of hat functions centred on the lattice.
Kernel1D interpolant_kernel(double mu, double s, double truncation) {
  if (s <= 0.0) return point_kernel(mu);
  const long lo = static_cast<long>(std::floor(mu - truncation * s)) - 1;
  const long hi = static_cast<long>(std::ceil(mu + truncation * s)) + 1;
  // second differences of C(a) = s psi((mu - a)/s); psi(z) - psi(-z) = z is linear,
  // so the right tail uses psi(-z) to avoid cancellation.
  std::vector<double> zs(static_cast<std::size_t>(hi - lo + 3));
  for (std::size_t i = 0; i < zs.size(); ++i)
    zs[i] = (mu - static_cast<double>(lo - 1 + static_cast<long>(i))) / s;
  Kernel1D k{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1))};
  for (std::size_t j = 0; j < k.weights.size(); ++j) {
    const double za = zs[j], zb = zs[j + 1], zc = zs[j + 2];
    double d2;
    if (zc >= 0.0)
      d2 = psi_left(-za) - 2.0 * psi_left(-zb) + psi_left(-zc);
    else if (za <= 0.0)
      d2 = psi_left(za) - 2.0 * psi_left(zb) + psi_left(zc);
    else
      d2 = (za * norm_cdf(za) + norm_pdf(za)) - 2.0 * (zb * norm_cdf(zb) + norm_pdf(zb)) +
           (zc * norm_cdf(zc) + norm_pdf(zc));
    k.weights[j] = s * d2;
  }
  normalize(k);
  return k;
}

Kernel1D hermite_kernel(double mu, double s, std::size_t m) {
  const auto& rule = gauss_hermite(m);
  std::vector<double> pos(rule.nodes.size());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = mu + s * rule.nodes[i];
  return discrete_kernel(pos, rule.weights);
}

bool near_zero(double v, double scale) { return std::abs(v) <= 1e-14 * std::max(scale, 1e-300); }

std::vector<Tap> to_taps(const std::map<std::pair<long, long>, double>& acc) {
  std::vector<Tap> taps;
  taps.reserve(acc.size());
  for (const auto& [key, w] : acc)
    if (w > 0.0) taps.push_back({key.first, key.second, w});
  return taps;
}

void split_bilinear(std::map<std::pair<long, long>, double>& acc, double x, double y, double p) {
  const double fx = std::floor(x), fy = std::floor(y);
  const double ax = x - fx, ay = y - fy;
  const long i = static_cast<long>(fx), j = static_cast<long>(fy);
  acc[{i, j}] += (1.0 - ax) * (1.0 - ay) * p;
  acc[{i + 1, j}] += ax * (1.0 - ay) * p;
  acc[{i, j + 1}] += (1.0 - ax) * ay * p;
  acc[{i + 1, j + 1}] += ax * ay * p;
}

LatticeKernel convolve_general(const LatticeKernel& a, const LatticeKernel& b) {
  std::map<std::pair<long, long>, double> acc;
  for (const auto& x : a.taps())
    for (const auto& y : b.taps()) acc[{x.di + y.di, x.dj + y.dj}] += x.w * y.w;
  return LatticeKernel::general(to_taps(acc));
}

// Convolution of one line of n values (stride apart) with constant continuation.
void convolve_line(const double* in, std::size_t stride, std::size_t n, const Kernel1D& k,
                   double* out, std::size_t out_stride, std::vector<double>& pad,
                   std::size_t begin, std::size_t end) {
  const long len = static_cast<long>(k.weights.size());
  const long left = std::max(0L, -k.offset);
  const long right = std::max(0L, k.offset + len - 1);
  const long total = static_cast<long>(n) + left + right;
  pad.resize(static_cast<std::size_t>(total));
  for (long p = 0; p < total; ++p) {
    long src = std::clamp(p - left, 0L, static_cast<long>(n) - 1);
    pad[static_cast<std::size_t>(p)] = in[static_cast<std::size_t>(src) * stride];
  }
  const double* w = k.weights.data();
  for (std::size_t i = begin; i < end; ++i) {
    const double* base = pad.data() + static_cast<long>(i) + k.offset + left;
    double acc = 0.0;
    for (long j = 0; j < len; ++j) acc += w[j] * base[j];
    out[i * out_stride] = acc;
  }
}

}  // namespace

double Kernel1D::mass() const {
  double m = 0.0;
  for (double w : weights) m += w;
  return m;
}

double Kernel1D::mean() const {
  double m = 0.0, s = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    m += weights[j];
    s += weights[j] * static_cast<double>(offset + static_cast<long>(j));
  }
  return s / m;
}

double Kernel1D::variance() const {
  const double mu = mean();
  double m = 0.0, s = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double x = static_cast<double>(offset + static_cast<long>(j)) - mu;
    m += weights[j];
    s += weights[j] * x * x;
  }
  return s / m;
}

LatticeKernel LatticeKernel::separable(int d, Kernel1D axis0, Kernel1D axis1) {
  LatticeKernel k;
  k.d_ = d;
  k.separable_ = true;
  k.axes_[0] = std::move(axis0);
  k.axes_[1] = d == 2 ? std::move(axis1) : Kernel1D{0, {1.0}};
  // Tap list for consumers that want the joint weights.
  for (std::size_t a = 0; a < k.axes_[0].weights.size(); ++a)
    for (std::size_t b = 0; b < k.axes_[1].weights.size(); ++b)
      k.taps_.push_back({k.axes_[0].offset + static_cast<long>(a),
                         k.axes_[1].offset + static_cast<long>(b),
                         k.axes_[0].weights[a] * k.axes_[1].weights[b]});
  return k;
}

LatticeKernel LatticeKernel::general(std::vector<Tap> taps) {
  if (taps.empty()) throw NumericError("lattice kernel has no taps");
  LatticeKernel k;
  k.d_ = 2;
  k.separable_ = false;
  k.taps_ = std::move(taps);
  return k;
}

void LatticeKernel::apply(const Grid& grid, const std::vector<double>& in,
                          std::vector<double>& out) const {
  out.assign(in.size(), 0.0);
  if (grid.dimension() != d_) throw DomainError("kernel and grid dimensions differ");
  if (d_ == 1) {
    const std::size_t n = grid.count(0);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
      std::vector<double> pad;
      convolve_line(in.data(), 1, n, axes_[0], out.data(), 1, pad, b, e);
    });
    return;
  }
  const std::size_t n0 = grid.count(0), n1 = grid.count(1);
  if (separable_) {
    std::vector<double> tmp(in.size());
    parallel_for(n0, [&](std::size_t b, std::size_t e) {
      std::vector<double> pad;
      for (std::size_t i = b; i < e; ++i)
        convolve_line(in.data() + i * n1, 1, n1, axes_[1], tmp.data() + i * n1, 1, pad, 0, n1);
    }, 16);
    parallel_for(n1, [&](std::size_t b, std::size_t e) {
      std::vector<double> pad;
      for (std::size_t j = b; j < e; ++j)
        convolve_line(tmp.data() + j, n1, n0, axes_[0], out.data() + j, n1, pad, 0, n0);
    }, 16);
    return;
  }
  parallel_for(n0, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      for (std::size_t j = 0; j < n1; ++j) {
        double acc = 0.0;
        for (const auto& t : taps_) {
          const long ii = std::clamp(static_cast<long>(i) + t.di, 0L, static_cast<long>(n0) - 1);
          const long jj = std::clamp(static_cast<long>(j) + t.dj, 0L, static_cast<long>(n1) - 1);
          acc += t.w * in[static_cast<std::size_t>(ii) * n1 + static_cast<std::size_t>(jj)];
        }
        out[i * n1 + j] = acc;
      }
    }
  }, 16);
}

Kernel1D point_kernel(double mu) { return discrete_kernel({mu}, {1.0}); }

Kernel1D discrete_kernel(const std::vector<double>& positions, const std::vector<double>& probs) {
  if (positions.empty() || positions.size() != probs.size())
    throw DomainError("discrete kernel needs matching positions and probabilities");
  double lo = positions.front(), hi = positions.front();
  for (double x : positions) {
    if (!std::isfinite(x)) throw NumericError("non-finite kernel position");
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const long base = static_cast<long>(std::floor(lo));
  Kernel1D k{base, std::vector<double>(static_cast<std::size_t>(std::floor(hi) - base + 2), 0.0)};
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double f = std::floor(positions[i]);
    const double a = positions[i] - f;
    const auto idx = static_cast<std::size_t>(static_cast<long>(f) - base);
    k.weights[idx] += (1.0 - a) * probs[i];
    k.weights[idx + 1] += a * probs[i];
  }
  trim(k);
  return k;
}

Kernel1D gaussian_kernel(double mu, double variance, const KernelOptions& opts) {
  if (!(variance >= 0.0) || !std::isfinite(variance) || !std::isfinite(mu))
    throw DomainError("Gaussian kernel needs a finite mean and non-negative variance");
  if (variance == 0.0) return point_kernel(mu);
  auto build = [&](double s) {
    return opts.rule == GaussianRule::interpolant ? interpolant_kernel(mu, s, opts.truncation)
                                                  : hermite_kernel(mu, s, opts.gh_nodes);
  };
  Kernel1D k0 = build(0.0);
  if (k0.variance() >= variance) return k0;
  double lo = 0.0, hi = std::sqrt(variance);
  while (build(hi).variance() < variance) hi *= 1.25;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (build(mid).variance() < variance)
      lo = mid;
    else
      hi = mid;
  }
  return build(0.5 * (lo + hi));
}

Kernel1D convolve(const Kernel1D& a, const Kernel1D& b) {
  Kernel1D k{a.offset + b.offset, std::vector<double>(a.weights.size() + b.weights.size() - 1)};
  for (std::size_t i = 0; i < a.weights.size(); ++i)
    for (std::size_t j = 0; j < b.weights.size(); ++j) k.weights[i + j] += a.weights[i] * b.weights[j];
  // Tails below double resolution carry no information.
  double peak = 0.0;
  for (double w : k.weights) peak = std::max(peak, w);
  for (double& w : k.weights)
    if (w < 1e-300 || w < peak * 1e-22) w = 0.0;
  trim(k);
  return k;
}

Kernel1D convolution_power_of_two(const Kernel1D& k, int j) {
  Kernel1D out = k;
  for (int i = 0; i < j; ++i) out = convolve(out, out);
  return out;
}

LatticeKernel point_lattice_kernel(const Grid& grid, const Vec2& location) {
  return discrete_lattice_kernel(grid, {location}, {1.0});
}

LatticeKernel discrete_lattice_kernel(const Grid& grid, const std::vector<Vec2>& atoms,
                                      const std::vector<double>& probs) {
  if (atoms.size() != probs.size() || atoms.empty())
    throw DomainError("discrete law needs matching atoms and probabilities");
  if (grid.dimension() == 1) {
    std::vector<double> pos(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) pos[i] = atoms[i][0] / grid.spacing(0);
    return LatticeKernel::separable(1, discrete_kernel(pos, probs));
  }
  if (atoms.size() == 1) {
    return LatticeKernel::separable(2, point_kernel(atoms[0][0] / grid.spacing(0)),
                                    point_kernel(atoms[0][1] / grid.spacing(1)));
  }
  std::map<std::pair<long, long>, double> acc;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    split_bilinear(acc, atoms[i][0] / grid.spacing(0), atoms[i][1] / grid.spacing(1), probs[i]);
  return LatticeKernel::general(to_taps(acc));
}

LatticeKernel gaussian_lattice_kernel(const Grid& grid, const Vec2& mean, const Mat2& cov,
                                      const KernelOptions& opts) {
  const double h0 = grid.spacing(0);
  if (grid.dimension() == 1)
    return LatticeKernel::separable(1, gaussian_kernel(mean[0] / h0, cov[0][0] / (h0 * h0), opts));
  const double h1 = grid.spacing(1);
  const double scale = std::max(std::abs(cov[0][0]), std::abs(cov[1][1]));
  if (std::abs(cov[0][1] - cov[1][0]) > 1e-12 * std::max(scale, 1.0))
    throw DomainError("covariance must be symmetric");
  if (near_zero(cov[0][1], scale)) {
    return LatticeKernel::separable(2, gaussian_kernel(mean[0] / h0, cov[0][0] / (h0 * h0), opts),
                                    gaussian_kernel(mean[1] / h1, cov[1][1] / (h1 * h1), opts));
  }
  // Correlated case: tensor Gauss-Hermite through a symmetric square root, bilinear split.
  const double a = cov[0][0], b = cov[0][1], c = cov[1][1];
  const double tr = a + c, det = a * c - b * b;
  if (det < -1e-12 * scale * scale || a < 0.0 || c < 0.0)
    throw DomainError("covariance must be positive semidefinite");
  const double s = std::sqrt(std::max(det, 0.0));
  const double tt = std::sqrt(tr + 2.0 * s);
  const double r00 = (a + s) / tt, r01 = b / tt, r11 = (c + s) / tt;
  const auto& rule = gauss_hermite(opts.gh_nodes);
  std::map<std::pair<long, long>, double> acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double z0 = rule.nodes[i], z1 = rule.nodes[j];
      const double x = mean[0] + r00 * z0 + r01 * z1;
      const double y = mean[1] + r01 * z0 + r11 * z1;
      split_bilinear(acc, x / h0, y / h1, rule.weights[i] * rule.weights[j]);
    }
  }
  return LatticeKernel::general(to_taps(acc));
}

LatticeKernel brownian_lattice_kernel(const Grid& grid, const Vec2& drift, const Mat2& cov_rate,
                                      double t, const KernelOptions& opts) {
  if (t < 0.0) throw DomainError("time step must be non-negative");
  auto scaled = [&](double s) {
    Vec2 mean{drift[0] * s, drift[1] * s};
    Mat2 cov{{{cov_rate[0][0] * s, cov_rate[0][1] * s}, {cov_rate[1][0] * s, cov_rate[1][1] * s}}};
    return gaussian_lattice_kernel(grid, mean, cov, opts);
  };
  if (opts.base_step > 0.0 && t >= opts.base_step) {
    const double ratio = t / opts.base_step;
    const int j = static_cast<int>(std::lround(std::log2(ratio)));
    if (j >= 0 && std::abs(std::ldexp(opts.base_step, j) - t) <= 1e-12 * t) {
      LatticeKernel base = scaled(opts.base_step);
      if (base.is_separable())
        return LatticeKernel::separable(grid.dimension(), convolution_power_of_two(base.axis(0), j),
                                        convolution_power_of_two(base.axis(1), j));
      LatticeKernel out = base;
      for (int i = 0; i < j; ++i) out = convolve_general(out, out);
      return out;
    }
  }
  return scaled(t);
}

void LatticeStep::add(LatticeKernel kernel, double constant) {
  if (!std::isfinite(constant)) throw DomainError("step constant must be finite");
  kernels_.push_back(std::move(kernel));
  constants_.push_back(constant);
}

GridFunction LatticeStep::apply(const GridFunction& f) const { return apply(f, nullptr); }

GridFunction LatticeStep::apply(const GridFunction& f, std::vector<std::size_t>* argmax) const {
  if (kernels_.empty()) {
    if (argmax) argmax->assign(f.size(), 0);
    return f;
  }
  std::vector<double> best, tmp;
  if (argmax) argmax->assign(f.size(), 0);
  for (std::size_t k = 0; k < kernels_.size(); ++k) {
    kernels_[k].apply(f.grid(), f.values(), tmp);
    if (k == 0) {
      best.resize(tmp.size());
      for (std::size_t i = 0; i < tmp.size(); ++i) best[i] = tmp[i] - constants_[0];
      continue;
    }
    for (std::size_t i = 0; i < tmp.size(); ++i) {
      const double v = tmp[i] - constants_[k];
      if (v > best[i]) {
        best[i] = v;
        if (argmax) (*argmax)[i] = k;
      }
    }
  }
  return GridFunction(f.grid(), std::move(best));
}

}  // namespace chernoff
