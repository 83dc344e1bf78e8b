#pragma once

#include "chernoff/lattice_kernel.hpp"
#include "chernoff/step_operator.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace chernoff {

// One control (sigma, m). sigma is d x d; only the top-left block is used in 1D.
struct Control {
  Mat2 sigma{};
  Vec2 m{};

  static Control scalar(double sigma, double m = 0.0);
  Mat2 covariance() const;  // sigma sigma^T
};

struct GeneratorBounds {
  double v1 = 0.0, v2 = 0.0;
  double w1 = 0.0, w2 = 0.0, w3 = 0.0;
  std::array<double, 4> vt{};  // v~_1..v~_4, only meaningful when has_vtilde
  bool has_vtilde = false;
  double omega = 0.0;
  double L = 0.0;
  double eps0 = 1.0;
};

class NisioFamily {
 public:
  // constant_coefficients enables the second-order v~ constants.
  NisioFamily(int d, std::vector<Control> controls, bool constant_coefficients = true);

  int dimension() const { return d_; }
  const std::vector<Control>& controls() const { return controls_; }
  bool constant_coefficients() const { return constant_; }
  bool second_order() const { return sup_trace_ > 0.0; }

  double sup_trace() const { return sup_trace_; }  // sup tr(sigma sigma^T)
  double sup_drift() const { return sup_drift_; }  // sup |m|

  const GeneratorBounds& bounds() const { return bounds_; }
  void set_bounds(const GeneratorBounds& b) { bounds_ = b; }

  // Bounds derived from the control set for the constant-coefficient family.
  static GeneratorBounds derived_bounds(int d, double sup_trace, double sup_drift,
                                        bool constant_coefficients);

 private:
  int d_;
  std::vector<Control> controls_;
  bool constant_;
  double sup_trace_ = 0.0;
  double sup_drift_ = 0.0;
  GeneratorBounds bounds_;
};

// E[f(x + sigma W_t + m t)] on the lattice.
GridFunction linear_step(const Control& c, const GridFunction& f, double t,
                         const KernelOptions& opts = {});
// max over controls of linear_step; t = 0 is the identity.
GridFunction nisio_step(const NisioFamily& family, const GridFunction& f, double t,
                        const KernelOptions& opts = {});
LatticeStep nisio_lattice_step(const NisioFamily& family, const Grid& grid, double t,
                               const KernelOptions& opts = {});

class NisioOperator : public StepOperator {
 public:
  explicit NisioOperator(NisioFamily family, KernelOptions opts = {})
      : family_(std::move(family)), opts_(opts) {}
  GridFunction apply(const GridFunction& f, double t) const override {
    return nisio_step(family_, f, t, opts_);
  }
  BoundStep bind(const Grid& grid, double t) const override;
  std::string name() const override { return "nisio"; }
  const NisioFamily& family() const { return family_; }
  const KernelOptions& kernel_options() const { return opts_; }

 private:
  NisioFamily family_;
  KernelOptions opts_;
};

// Single control as a linear step operator.
class LinearOperator : public StepOperator {
 public:
  LinearOperator(int d, Control c, KernelOptions opts = {});
  GridFunction apply(const GridFunction& f, double t) const override;
  BoundStep bind(const Grid& grid, double t) const override;
  std::string name() const override { return "linear"; }

 private:
  NisioOperator inner_;
};

struct GeneratorResult {
  GridFunction value;
  std::vector<char> interior;  // 0 on points where the stencil leaves the grid
};

// (Af)(x) = max over controls of 1/2 tr(sigma sigma^T D^2 f) + m.Df, central differences.
GeneratorResult generator_apply(const NisioFamily& family, const GridFunction& f);

// Sup over interior points of max_alpha |d^alpha f|, |alpha| = order (1 or 2).
double derivative_sup(const GridFunction& f, int order, const std::optional<Box>& region = std::nullopt);

struct ConsistencyReport {
  double residual = 0.0;  // sup |I(h)f - f| / h on the region
  double cap = 0.0;       // e^omega (v1 |Df| + v2 |D^2 f|)
  bool pass = false;
};

ConsistencyReport consistency_residual(const NisioFamily& family, const GridFunction& f, double h,
                                       const std::optional<Box>& region = std::nullopt,
                                       const KernelOptions& opts = {}, double tolerance = 1e-6);

}  // namespace chernoff
