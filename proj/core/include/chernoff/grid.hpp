#pragma once

#include <array>
#include <cstddef>

namespace chernoff {

// Uniform tensor grid on a box in dimension 1 or 2.
// Flat index of (i0, i1) is i0 * count[1] + i1.
class Grid {
 public:
  Grid(int dimension, std::array<double, 2> lower, std::array<double, 2> upper,
       std::array<std::size_t, 2> count);

  static Grid line(double lower, double upper, std::size_t count);
  static Grid plane(std::array<double, 2> lower, std::array<double, 2> upper,
                    std::array<std::size_t, 2> count);

  int dimension() const { return d_; }
  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return upper_[axis]; }
  std::size_t count(int axis) const { return count_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  std::size_t size() const { return size_; }

  double coord(int axis, std::size_t i) const {
    return lower_[axis] + static_cast<double>(i) * spacing_[axis];
  }
  std::array<std::size_t, 2> unflatten(std::size_t flat) const;
  std::array<double, 2> point(std::size_t flat) const;

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  int d_;
  std::array<double, 2> lower_;
  std::array<double, 2> upper_;
  std::array<std::size_t, 2> count_;
  std::array<double, 2> spacing_;
  std::size_t size_;
};

// Axis-aligned box used to restrict norms to an interior subdomain.
struct Box {
  std::array<double, 2> lower{};
  std::array<double, 2> upper{};

  bool contains(const std::array<double, 2>& x, int d) const {
    for (int a = 0; a < d; ++a)
      if (x[a] < lower[a] || x[a] > upper[a]) return false;
    return true;
  }
};

// Grid box shrunk by margin on every side.
Box interior_box(const Grid& grid, double margin);

}  // namespace chernoff
