#include "chernoff/grid.hpp"

#include "chernoff/error.hpp"

#include <cmath>
#include <string>

namespace chernoff {

Grid::Grid(int dimension, std::array<double, 2> lower, std::array<double, 2> upper,
           std::array<std::size_t, 2> count)
    : d_(dimension), lower_(lower), upper_(upper), count_(count), spacing_{0.0, 0.0}, size_(1) {
  if (d_ != 1 && d_ != 2) throw DomainError("grid dimension must be 1 or 2");
  for (int a = 0; a < d_; ++a) {
    if (!std::isfinite(lower_[a]) || !std::isfinite(upper_[a]) || !(lower_[a] < upper_[a]))
      throw DomainError("grid axis " + std::to_string(a) + ": need lower < upper");
    if (count_[a] < 2)
      throw DomainError("grid axis " + std::to_string(a) + ": need at least 2 points");
    spacing_[a] = (upper_[a] - lower_[a]) / static_cast<double>(count_[a] - 1);
    size_ *= count_[a];
  }
  if (d_ == 1) {
    lower_[1] = upper_[1] = 0.0;
    count_[1] = 1;
  }
  if (size_ < 4) throw DomainError("grid needs at least 4 points in total");
}

Grid Grid::line(double lower, double upper, std::size_t count) {
  return Grid(1, {lower, 0.0}, {upper, 0.0}, {count, 1});
}

Grid Grid::plane(std::array<double, 2> lower, std::array<double, 2> upper,
                 std::array<std::size_t, 2> count) {
  return Grid(2, lower, upper, count);
}

std::array<std::size_t, 2> Grid::unflatten(std::size_t flat) const {
  if (d_ == 1) return {flat, 0};
  return {flat / count_[1], flat % count_[1]};
}

std::array<double, 2> Grid::point(std::size_t flat) const {
  auto idx = unflatten(flat);
  std::array<double, 2> x{coord(0, idx[0]), 0.0};
  if (d_ == 2) x[1] = coord(1, idx[1]);
  return x;
}

bool Grid::operator==(const Grid& other) const {
  if (d_ != other.d_) return false;
  for (int a = 0; a < d_; ++a) {
    if (count_[a] != other.count_[a] || lower_[a] != other.lower_[a] ||
        upper_[a] != other.upper_[a])
      return false;
  }
  return true;
}

Box interior_box(const Grid& grid, double margin) {
  Box box;
  for (int a = 0; a < grid.dimension(); ++a) {
    box.lower[a] = grid.lower(a) + margin;
    box.upper[a] = grid.upper(a) - margin;
    if (box.lower[a] > box.upper[a])
      throw DomainError("interior margin " + std::to_string(margin) +
                        " leaves no interior on axis " + std::to_string(a));
  }
  return box;
}

}  // namespace chernoff
