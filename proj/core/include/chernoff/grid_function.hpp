#pragma once

#include "chernoff/grid.hpp"

#include <functional>
#include <span>
#include <vector>

namespace chernoff {

class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);

  static GridFunction zero(const Grid& grid);
  static GridFunction constant(const Grid& grid, double c);
  static GridFunction sample(const Grid& grid,
                             const std::function<double(std::span<const double>)>& f);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double sup_norm() const { return sup_norm_; }
  double lipschitz() const { return lipschitz_; }

  // Piecewise multilinear interpolant, constant continuation outside the box.
  double interpolate(std::span<const double> x) const;

  void set_values(std::vector<double> values);

 private:
  void refresh();

  Grid grid_;
  std::vector<double> values_;
  double sup_norm_ = 0.0;
  double lipschitz_ = 0.0;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);
GridFunction operator+(const GridFunction& a, double c);
GridFunction operator-(const GridFunction& a);

// Piecewise-constant-in-time trajectory: u(s) = samples[j] for s in [t_j, t_{j+1}).
class SpaceTimeFunction {
 public:
  SpaceTimeFunction(std::vector<double> times, std::vector<GridFunction> samples);

  const Grid& grid() const { return samples_.front().grid(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<GridFunction>& samples() const { return samples_; }
  std::size_t size() const { return times_.size(); }
  const GridFunction& at(std::size_t j) const { return samples_[j]; }

  // Index of the sample covering time s.
  std::size_t index_at(double s) const;

 private:
  std::vector<double> times_;
  std::vector<GridFunction> samples_;
};

}  // namespace chernoff
