#pragma once

#include "chernoff/grid_function.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace chernoff {

// How a Gaussian expectation of a grid function is turned into lattice weights.
//   interpolant:   exact expectation of the piecewise-linear interpolant.
//   gauss_hermite: M-node rule, nodes split linearly onto neighbouring points.
// Both rules rescale the Gaussian so the lattice variance equals the target.
enum class GaussianRule { interpolant, gauss_hermite };

struct KernelOptions {
  GaussianRule rule = GaussianRule::interpolant;
  std::size_t gh_nodes = 32;
  // When positive, kernels for t = base_step * 2^j are built as 2^j-fold
  // convolution powers of the base kernel (exact lattice semigroup).
  double base_step = 0.0;
  double truncation = 8.0;  // standard deviations kept by the interpolant rule
};

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

// Weights at lattice offsets offset, offset+1, ...
struct Kernel1D {
  long offset = 0;
  std::vector<double> weights;

  double mass() const;
  double mean() const;
  double variance() const;
};

struct Tap {
  long di;
  long dj;
  double w;
};

class LatticeKernel {
 public:
  static LatticeKernel separable(int d, Kernel1D axis0, Kernel1D axis1 = Kernel1D{0, {1.0}});
  static LatticeKernel general(std::vector<Tap> taps);

  int dimension() const { return d_; }
  bool is_separable() const { return separable_; }
  const Kernel1D& axis(int a) const { return axes_[a]; }
  const std::vector<Tap>& taps() const { return taps_; }

  // out[x] = sum_y w(y) in[clamp(x + y)].
  void apply(const Grid& grid, const std::vector<double>& in, std::vector<double>& out) const;

 private:
  int d_ = 1;
  bool separable_ = true;
  std::array<Kernel1D, 2> axes_{};
  std::vector<Tap> taps_;
};

// 1D builders in lattice units (positions divided by spacing).
Kernel1D point_kernel(double mu);
Kernel1D discrete_kernel(const std::vector<double>& positions, const std::vector<double>& probs);
Kernel1D gaussian_kernel(double mu, double variance, const KernelOptions& opts);
Kernel1D convolve(const Kernel1D& a, const Kernel1D& b);
Kernel1D convolution_power_of_two(const Kernel1D& k, int j);

// Builders in grid coordinates.
LatticeKernel point_lattice_kernel(const Grid& grid, const Vec2& location);
LatticeKernel discrete_lattice_kernel(const Grid& grid, const std::vector<Vec2>& atoms,
                                      const std::vector<double>& probs);
LatticeKernel gaussian_lattice_kernel(const Grid& grid, const Vec2& mean, const Mat2& cov,
                                      const KernelOptions& opts);
// Law of m*t + sigma W_t; uses convolution powers when opts.base_step divides t dyadically.
LatticeKernel brownian_lattice_kernel(const Grid& grid, const Vec2& drift, const Mat2& cov_rate,
                                      double t, const KernelOptions& opts);

// One monotone step: out = max_k (K_k f - c_k); empty means identity.
class LatticeStep {
 public:
  void add(LatticeKernel kernel, double constant);
  bool is_identity() const { return kernels_.empty(); }
  std::size_t size() const { return kernels_.size(); }
  GridFunction apply(const GridFunction& f) const;
  // Also reports which branch attained the max (first wins on ties).
  GridFunction apply(const GridFunction& f, std::vector<std::size_t>* argmax) const;

 private:
  std::vector<LatticeKernel> kernels_;
  std::vector<double> constants_;
};

}  // namespace chernoff
