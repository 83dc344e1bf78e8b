#pragma once

#include "chernoff/grid_function.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chernoff {

// eta(s, y) = c_norm * beta(2s - 1) * prod_i beta(sqrt(d) y_i), beta(z) = exp(-1/(1 - z^2)).
// Support is [0,1] x [-1/sqrt(d), 1/sqrt(d)]^d, inside [0,1] x B(1).
class MollifierKernel {
 public:
  static constexpr int kMaxK = 2;
  static constexpr int kMaxL = 3;

  explicit MollifierKernel(int dimension);

  int dimension() const { return d_; }
  double normalization() const { return c_norm_; }
  double density(double s, std::span<const double> y) const;

  // b_{k,l} = max_{|alpha| = l} || d_t^k D^alpha eta ||_{L^1}
  double kernel_constant(int k, int l) const;
  // B_j = int_{-1}^{1} |beta^{(j)}(z)| dz
  double beta_l1(int j) const { return beta_l1_[static_cast<std::size_t>(j)]; }

  // Normalized time profile on [0,1] and its distribution function.
  double time_density(double s) const;
  double time_cdf(double s) const;

  std::string table_csv() const;

  static double beta(double z);
  static double beta_derivative(int j, double z);

 private:
  int d_;
  double c_norm_;
  std::array<double, 4> beta_l1_{};
  std::array<std::array<double, kMaxL + 1>, kMaxK + 1> table_{};
  std::vector<double> cdf_nodes_;  // int_{-1}^{z_k} beta on a uniform z grid
};

struct Epsilon {
  double eps1;  // time radius
  double eps2;  // space radius
};

// u^eps(t, x) = int u(t + s, x + y) eta^eps(s, y) ds dy. Time integrals are exact for
// the piecewise-constant trajectory, space integrals are normalized lattice sums with
// constant continuation.
SpaceTimeFunction mollify(const MollifierKernel& kernel, const SpaceTimeFunction& u, Epsilon eps,
                          const std::vector<double>& output_times);

// Pointwise evaluation at an arbitrary (t, x).
double mollify_at(const MollifierKernel& kernel, const SpaceTimeFunction& u, Epsilon eps, double t,
                  std::span<const double> x);

struct DerivativeCheckOptions {
  std::vector<double> times;          // output times; empty picks a few admissible ones
  std::optional<double> r;            // Lipschitz constant; default is the running envelope
  std::size_t max_points = 400;       // spatial evaluation points per time
  double fd_fraction = 1.0 / 64.0;    // finite-difference step relative to eps
  double tolerance = 1.05;            // pass iff measured <= bound * tolerance
};

struct DerivativeReport {
  int k = 0;
  int l = 0;
  double measured = 0.0;  // at the worst time
  double bound = 0.0;     // at the worst time
  double ratio = 0.0;     // max over times of measured / bound
  double r = 0.0;
  bool pass = false;
};

// For l >= 1 the bound is d^{l/2} r(t + eps1) b_{k,l-1} eps1^{-k} eps2^{1-l}.
// For l = 0, k >= 1 it is osc(t) b_{k,0} eps1^{-k} with
// osc(t) = sup_{s <= eps1} ||u(t + s) - u(t)||_inf.
DerivativeReport derivative_bound_check(const MollifierKernel& kernel, const SpaceTimeFunction& u,
                                        Epsilon eps, int k, int l,
                                        const DerivativeCheckOptions& opts = {});

}  // namespace chernoff
