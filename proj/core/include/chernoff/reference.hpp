#pragma once

#include "chernoff/convex_expectation.hpp"
#include "chernoff/nisio.hpp"
#include "chernoff/weight.hpp"

#include <functional>
#include <optional>
#include <span>

namespace chernoff {

using SpatialFunction = std::function<double(std::span<const double>)>;

// E[f(x + sigma W_t + m t)], no iteration. In 1D the callable form uses adaptive Gauss-Kronrod
// and the grid form integrates the piecewise-linear interpolant exactly; in 2D both use tensor
// Gauss-Hermite with M nodes per axis (the grid form on the interpolant).
GridFunction heat_exact(const SpatialFunction& f, const Grid& grid, const Control& c, double t,
                        std::size_t nodes = 128);
GridFunction heat_exact(const GridFunction& f, const Control& c, double t, std::size_t nodes = 128);

enum class Curvature { convex, concave, linear, neither };

// Sign of the discrete second differences (1D), up to tol.
Curvature classify_curvature(const GridFunction& f, double tol = 1e-12);

// Worst-case volatility: sigma_max for convex f, sigma_min for concave f. 1D only.
GridFunction gheat_convex_reference(const GridFunction& f, double sigma_min, double sigma_max, double t,
                                    std::size_t nodes = 128);
GridFunction gheat_convex_reference(const SpatialFunction& f, const Grid& grid, double sigma_min,
                                    double sigma_max, double t, std::size_t nodes = 128);

struct OracleResult {
  GridFunction value;        // iterate at h_fine
  GridFunction coarse;       // iterate at 2 h_fine
  double uncertainty = 0.0;  // ||value - coarse||_kappa on the region
};

OracleResult fine_oracle(const StepOperator& op, const GridFunction& f, double t, double h_fine,
                         const std::optional<WeightFunction>& kappa = std::nullopt,
                         const std::optional<Box>& region = std::nullopt);

struct LimitReference {
  GridFunction value;
  double uncertainty = 0.0;
  bool closed_form = false;
};

// S(1)f for the G-heat limit of a sublinear zero-mean Gaussian family in 1D. Uses the
// worst-case-volatility formula for convex or concave f, the fine CLT oracle otherwise.
LimitReference clt_limit_reference(const ScenarioConvexExpectation& ce, const GridFunction& f,
                                   double h_fine, const std::optional<Box>& region = std::nullopt);

}  // namespace chernoff
