#include "chernoff/nisio.hpp"

#include "chernoff/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace chernoff {

Control Control::scalar(double sigma, double m) {
  Control c;
  c.sigma[0][0] = sigma;
  c.m[0] = m;
  return c;
}

Mat2 Control::covariance() const {
  Mat2 a{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) a[i][j] += sigma[i][k] * sigma[j][k];
  return a;
}

GeneratorBounds NisioFamily::derived_bounds(int d, double s2, double mm, bool constant_coefficients) {
  const double dd = static_cast<double>(d);
  const double rd = std::sqrt(dd);
  GeneratorBounds b;
  b.v1 = mm * rd;
  b.v2 = 0.5 * s2 * dd;
  b.w1 = mm * rd;
  b.w2 = (mm + 0.5 * s2) * dd;
  b.w3 = 0.5 * s2 * dd * rd;
  if (constant_coefficients) {
    b.has_vtilde = true;
    b.vt = {0.0, mm * mm * dd, s2 * mm * dd * rd, 0.25 * s2 * s2 * dd * dd};
  }
  return b;
}

NisioFamily::NisioFamily(int d, std::vector<Control> controls, bool constant_coefficients)
    : d_(d), controls_(std::move(controls)), constant_(constant_coefficients) {
  if (d != 1 && d != 2) throw DomainError("Nisio family dimension must be 1 or 2");
  if (controls_.empty()) throw DomainError("Nisio family needs at least one control");
  for (auto& c : controls_) {
    if (d == 1) {
      c.sigma[0][1] = c.sigma[1][0] = c.sigma[1][1] = 0.0;
      c.m[1] = 0.0;
    }
    for (const auto& row : c.sigma)
      for (double v : row)
        if (!std::isfinite(v)) throw DomainError("control sigma must be finite");
    if (!std::isfinite(c.m[0]) || !std::isfinite(c.m[1])) throw DomainError("control drift must be finite");
    const Mat2 a = c.covariance();
    sup_trace_ = std::max(sup_trace_, a[0][0] + a[1][1]);
    sup_drift_ = std::max(sup_drift_, std::hypot(c.m[0], c.m[1]));
  }
  bounds_ = derived_bounds(d, sup_trace_, sup_drift_, constant_);
}

namespace {

LatticeKernel control_kernel(const Control& c, const Grid& grid, double t, const KernelOptions& opts) {
  return brownian_lattice_kernel(grid, c.m, c.covariance(), t, opts);
}

void require_dimension(int d, const Grid& grid) {
  if (grid.dimension() != d) throw DomainError("family and grid dimensions differ");
}

}  // namespace

GridFunction linear_step(const Control& c, const GridFunction& f, double t, const KernelOptions& opts) {
  if (t < 0.0) throw DomainError("step time must be non-negative");
  if (t == 0.0) return f;
  LatticeStep step;
  step.add(control_kernel(c, f.grid(), t, opts), 0.0);
  return step.apply(f);
}

LatticeStep nisio_lattice_step(const NisioFamily& family, const Grid& grid, double t,
                               const KernelOptions& opts) {
  if (t < 0.0) throw DomainError("step time must be non-negative");
  require_dimension(family.dimension(), grid);
  LatticeStep step;
  if (t == 0.0) return step;
  for (const auto& c : family.controls()) step.add(control_kernel(c, grid, t, opts), 0.0);
  return step;
}

GridFunction nisio_step(const NisioFamily& family, const GridFunction& f, double t,
                        const KernelOptions& opts) {
  return nisio_lattice_step(family, f.grid(), t, opts).apply(f);
}

BoundStep NisioOperator::bind(const Grid& grid, double t) const {
  auto step = std::make_shared<LatticeStep>(nisio_lattice_step(family_, grid, t, opts_));
  return [step](const GridFunction& f) { return step->apply(f); };
}

LinearOperator::LinearOperator(int d, Control c, KernelOptions opts)
    : inner_(NisioFamily(d, {c}), opts) {}

GridFunction LinearOperator::apply(const GridFunction& f, double t) const { return inner_.apply(f, t); }

BoundStep LinearOperator::bind(const Grid& grid, double t) const { return inner_.bind(grid, t); }

namespace {

struct Stencil {
  const GridFunction& f;
  std::size_t n1;
  double h0, h1;

  double at(std::size_t i, std::size_t j) const { return f[i * n1 + j]; }
  double d0(std::size_t i, std::size_t j) const { return (at(i + 1, j) - at(i - 1, j)) / (2 * h0); }
  double d1(std::size_t i, std::size_t j) const { return (at(i, j + 1) - at(i, j - 1)) / (2 * h1); }
  double d00(std::size_t i, std::size_t j) const {
    return (at(i + 1, j) - 2 * at(i, j) + at(i - 1, j)) / (h0 * h0);
  }
  double d11(std::size_t i, std::size_t j) const {
    return (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (h1 * h1);
  }
  double d01(std::size_t i, std::size_t j) const {
    return (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) / (4 * h0 * h1);
  }
};

template <class Fn>
void for_interior(const Grid& g, Fn&& fn) {
  const std::size_t n0 = g.count(0);
  if (g.dimension() == 1) {
    for (std::size_t i = 1; i + 1 < n0; ++i) fn(i, std::size_t{0});
    return;
  }
  const std::size_t n1 = g.count(1);
  for (std::size_t i = 1; i + 1 < n0; ++i)
    for (std::size_t j = 1; j + 1 < n1; ++j) fn(i, j);
}

}  // namespace

GeneratorResult generator_apply(const NisioFamily& family, const GridFunction& f) {
  const Grid& g = f.grid();
  require_dimension(family.dimension(), g);
  const bool two = g.dimension() == 2;
  Stencil s{f, two ? g.count(1) : 1, g.spacing(0), two ? g.spacing(1) : 1.0};
  std::vector<double> out(g.size(), 0.0);
  std::vector<char> interior(g.size(), 0);
  for_interior(g, [&](std::size_t i, std::size_t j) {
    double best = -INFINITY;
    for (const auto& c : family.controls()) {
      const Mat2 a = c.covariance();
      double v = 0.5 * a[0][0] * s.d00(i, j) + c.m[0] * s.d0(i, j);
      if (two) v += 0.5 * a[1][1] * s.d11(i, j) + a[0][1] * s.d01(i, j) + c.m[1] * s.d1(i, j);
      best = std::max(best, v);
    }
    out[i * s.n1 + j] = best;
    interior[i * s.n1 + j] = 1;
  });
  return {GridFunction(g, std::move(out)), std::move(interior)};
}

double derivative_sup(const GridFunction& f, int order, const std::optional<Box>& region) {
  if (order != 1 && order != 2) throw DomainError("derivative order must be 1 or 2");
  const Grid& g = f.grid();
  const bool two = g.dimension() == 2;
  Stencil s{f, two ? g.count(1) : 1, g.spacing(0), two ? g.spacing(1) : 1.0};
  double best = 0.0;
  for_interior(g, [&](std::size_t i, std::size_t j) {
    if (region && !region->contains(g.point(i * s.n1 + j), g.dimension())) return;
    if (order == 1) {
      best = std::max(best, std::abs(s.d0(i, j)));
      if (two) best = std::max(best, std::abs(s.d1(i, j)));
    } else {
      best = std::max(best, std::abs(s.d00(i, j)));
      if (two) best = std::max({best, std::abs(s.d11(i, j)), std::abs(s.d01(i, j))});
    }
  });
  return best;
}

ConsistencyReport consistency_residual(const NisioFamily& family, const GridFunction& f, double h,
                                       const std::optional<Box>& region, const KernelOptions& opts,
                                       double tolerance) {
  if (!(h > 0.0)) throw DomainError("consistency step h must be positive");
  const GridFunction step = nisio_step(family, f, h, opts);
  const Grid& g = f.grid();
  ConsistencyReport rep;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (region && !region->contains(g.point(k), g.dimension())) continue;
    rep.residual = std::max(rep.residual, std::abs(step[k] - f[k]) / h);
  }
  const auto& b = family.bounds();
  rep.cap = std::exp(b.omega) * (b.v1 * derivative_sup(f, 1, region) + b.v2 * derivative_sup(f, 2, region));
  rep.pass = rep.residual <= rep.cap * (1.0 + tolerance) + 1e-9;
  return rep;
}

}  // namespace chernoff
