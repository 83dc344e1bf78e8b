#include "chernoff/grid_function.hpp"

#include "chernoff/error.hpp"
#include "chernoff/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chernoff {

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.grid() != b.grid()) throw DomainError("grid functions live on different grids");
}

// Cell index and local coordinate for multilinear interpolation with clamping.
std::pair<std::size_t, double> locate(const Grid& g, int axis, double x) {
  const std::size_t n = g.count(axis);
  double s = (x - g.lower(axis)) / g.spacing(axis);
  if (!(s > 0.0)) return {0, 0.0};
  if (s >= static_cast<double>(n - 1)) return {n - 2, 1.0};
  auto i = static_cast<std::size_t>(s);
  if (i > n - 2) i = n - 2;
  return {i, s - static_cast<double>(i)};
}

}  // namespace

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  refresh();
}

GridFunction GridFunction::zero(const Grid& grid) { return constant(grid, 0.0); }

GridFunction GridFunction::constant(const Grid& grid, double c) {
  return GridFunction(grid, std::vector<double>(grid.size(), c));
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<double(std::span<const double>)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto x = grid.point(i);
    v[i] = f(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dimension())));
  }
  return GridFunction(grid, std::move(v));
}

void GridFunction::set_values(std::vector<double> values) {
  values_ = std::move(values);
  refresh();
}

void GridFunction::refresh() {
  if (values_.size() != grid_.size())
    throw DomainError("value array has " + std::to_string(values_.size()) +
                      " entries, grid has " + std::to_string(grid_.size()));
  double s = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericError("grid function has a non-finite value");
    s = std::max(s, std::abs(v));
  }
  sup_norm_ = s;
  lipschitz_ = lipschitz_estimate(*this);
}

double GridFunction::interpolate(std::span<const double> x) const {
  if (grid_.dimension() == 1) {
    auto [i, w] = locate(grid_, 0, x[0]);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
  }
  auto [i, wx] = locate(grid_, 0, x[0]);
  auto [j, wy] = locate(grid_, 1, x[1]);
  const std::size_t n1 = grid_.count(1);
  const double f00 = values_[i * n1 + j], f01 = values_[i * n1 + j + 1];
  const double f10 = values_[(i + 1) * n1 + j], f11 = values_[(i + 1) * n1 + j + 1];
  return (1.0 - wx) * ((1.0 - wy) * f00 + wy * f01) + wx * ((1.0 - wy) * f10 + wy * f11);
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator*(double s, const GridFunction& a) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator+(const GridFunction& a, double c) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + c;
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator-(const GridFunction& a) { return -1.0 * a; }

SpaceTimeFunction::SpaceTimeFunction(std::vector<double> times, std::vector<GridFunction> samples)
    : times_(std::move(times)), samples_(std::move(samples)) {
  if (times_.empty() || times_.size() != samples_.size())
    throw DomainError("space-time function needs one grid function per time sample");
  for (std::size_t j = 0; j < times_.size(); ++j) {
    if (j > 0 && !(times_[j] > times_[j - 1]))
      throw DomainError("time samples must be strictly increasing");
    if (samples_[j].grid() != samples_.front().grid())
      throw DomainError("all samples of a space-time function must share one grid");
  }
}

std::size_t SpaceTimeFunction::index_at(double s) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), s);
  if (it == times_.begin()) throw DomainError("time " + std::to_string(s) + " precedes samples");
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

}  // namespace chernoff
