#pragma once

#include "chernoff/lattice_kernel.hpp"
#include "chernoff/step_operator.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace chernoff {

enum class ScenarioKind { point_mass, gaussian, discrete };

// Law of xi under one scenario plus its penalty alpha >= 0.
struct Scenario {
  ScenarioKind kind = ScenarioKind::point_mass;
  int d = 1;
  Vec2 mean{};                 // point mass location or Gaussian mean
  Mat2 cov{};                  // Gaussian covariance sigma sigma^T
  std::vector<Vec2> atoms;     // discrete support
  std::vector<double> probs;   // discrete probabilities
  double penalty = 0.0;

  static Scenario point(int d, Vec2 location, double penalty = 0.0);
  static Scenario gaussian(int d, Vec2 mean, Mat2 cov, double penalty = 0.0);
  static Scenario gaussian1d(double mean, double sigma, double penalty = 0.0);
  static Scenario discrete(int d, std::vector<Vec2> atoms, std::vector<double> probs,
                           double penalty = 0.0);

  void validate() const;
  Vec2 first_moment() const;
  Mat2 second_moment() const;  // E[xi xi^T]
};

struct QuadratureOptions {
  std::size_t gh_nodes = 32;
};

// E[X] = max_i (E_i[X] - alpha_i) over a finite scenario list.
class ScenarioConvexExpectation {
 public:
  using Payoff = std::function<double(std::span<const double>)>;

  explicit ScenarioConvexExpectation(std::vector<Scenario> scenarios, QuadratureOptions quad = {},
                                     KernelOptions kernel = {});

  int dimension() const { return d_; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  const KernelOptions& kernel_options() const { return kernel_; }
  const QuadratureOptions& quadrature() const { return quad_; }

  bool is_sublinear() const;
  bool is_zero_mean() const;
  bool third_moments_vanish() const;

  double eval_scenario(std::size_t i, const Payoff& payoff) const;  // E_i[payoff]
  double eval(const Payoff& payoff) const;                          // cexp_eval

  // E_i[|xi|^j] for j = 0..4, exact for atoms, quadrature for Gaussians.
  std::array<double, 5> absolute_moments(std::size_t i) const;
  // max_i (sum_j c_j E_i[|xi|^j] - alpha_i)
  double eval_abs_polynomial(const std::array<double, 5>& coeffs) const;

 private:
  int d_;
  std::vector<Scenario> scenarios_;
  QuadratureOptions quad_;
  KernelOptions kernel_;
};

double cexp_eval(const ScenarioConvexExpectation& ce, const ScenarioConvexExpectation::Payoff& payoff);

// (I(t)f)(x) = max_i (E_i[f(x + t xi)] - t alpha_i); I(0) = id.
GridFunction lln_step(const ScenarioConvexExpectation& ce, const GridFunction& f, double t);
// (I(t)f)(x) = max_i (E_i[f(x + sqrt(t) xi)] - t alpha_i); I(0) = id.
GridFunction clt_step(const ScenarioConvexExpectation& ce, const GridFunction& f, double t);

LatticeStep lln_lattice_step(const ScenarioConvexExpectation& ce, const Grid& grid, double t);
LatticeStep clt_lattice_step(const ScenarioConvexExpectation& ce, const Grid& grid, double t);

class LlnOperator : public StepOperator {
 public:
  explicit LlnOperator(ScenarioConvexExpectation ce) : ce_(std::move(ce)) {}
  GridFunction apply(const GridFunction& f, double t) const override { return lln_step(ce_, f, t); }
  BoundStep bind(const Grid& grid, double t) const override;
  std::string name() const override { return "lln"; }
  const ScenarioConvexExpectation& expectation() const { return ce_; }

 private:
  ScenarioConvexExpectation ce_;
};

class CltOperator : public StepOperator {
 public:
  // Requires every scenario to have mean zero.
  explicit CltOperator(ScenarioConvexExpectation ce);
  GridFunction apply(const GridFunction& f, double t) const override { return clt_step(ce_, f, t); }
  BoundStep bind(const Grid& grid, double t) const override;
  std::string name() const override { return "clt"; }
  const ScenarioConvexExpectation& expectation() const { return ce_; }

 private:
  ScenarioConvexExpectation ce_;
};

// phi(y) = sup_z (y.z - E[z.xi]) by a discrete Legendre transform on a symmetric z grid.
class LegendreConjugate {
 public:
  explicit LegendreConjugate(const ScenarioConvexExpectation& ce, std::size_t points = 0);
  // +infinity outside the certified domain. Throws DomainError when the z grid is too narrow.
  double operator()(std::span<const double> y) const;
  double radius() const { return radius_; }

 private:
  double support(std::span<const double> u) const;  // max_i m_i.u
  double g(double z0, double z1) const;               // E[z.xi] = max_i (z.m_i - alpha_i)

  int d_;
  std::vector<Vec2> means_;
  std::vector<double> penalties_;
  double radius_;
  std::size_t points_;
};

// x -> sup_y (f(x + y) - t phi(y / t)) over lattice offsets y.
GridFunction maximally_distributed_limit(const ScenarioConvexExpectation& ce, const GridFunction& f,
                                         double t = 1.0);

// G(a) = E[1/2 xi^T a xi]
double g_function(const ScenarioConvexExpectation& ce, const Mat2& a);

struct GrowthCertificate {
  double a = 0.0;
  double p = 1.0;
  bool found = false;
  std::vector<double> lambda_grid;
  std::vector<std::array<double, 2>> c_grid;
  double asymptotic_ratio = 0.0;  // lim_{lambda -> inf} E[lambda X] / (lambda E[X]) sup over c
};

// Smallest p in {1,2,3} and a with E[lambda X] <= a lambda^p E[X] for X = c1|xi|^2 + c2|xi|^3
// on the tested grids; for p = 1 the asymptotic ratio is folded in.
GrowthCertificate growth_certificate(const ScenarioConvexExpectation& ce,
                                     const std::vector<double>& lambda_grid = {},
                                     const std::vector<std::array<double, 2>>& c_grid = {});

}  // namespace chernoff
