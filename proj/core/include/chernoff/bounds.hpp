#pragma once

#include "chernoff/convex_expectation.hpp"
#include "chernoff/mollifier.hpp"
#include "chernoff/nisio.hpp"

#include <functional>
#include <string>
#include <vector>

namespace chernoff {

// lower bounds (S - I)^-, upper bounds (S - I)^+.
enum class Side { lower, upper };

struct ExponentPair {
  double alpha;
  double beta;
};

struct RateParameters {
  double p = 0.0;
  std::function<double(double)> a1 = [](double) { return 0.0; };
  double a2 = 0.0;
  std::vector<ExponentPair> exponents_lower;
  std::vector<ExponentPair> exponents_upper;
  std::vector<std::function<double(double, double)>> theta_lower;  // theta_i(r, t)
  std::vector<std::function<double(double, double)>> theta_upper;
  double omega = 0.0;
  double L = 0.0;
  double eps0 = 1.0;
  double h0 = 1.0;
  double c_kappa = 1.0;
};

struct Addend {
  std::string id;  // row of transcription_table()
  double value;
};

struct BoundReport {
  std::string theorem;
  Side side = Side::upper;
  double gamma = 0.0;
  double constant = 0.0;  // sum of terms
  double eps1 = 0.0;
  double h0 = 0.0;
  double r = 0.0;
  double t = 0.0;
  std::vector<Addend> terms;
};

struct TranscriptionRow {
  std::string id;
  std::string formula;
};

// One row per addend used by the evaluators below.
const std::vector<TranscriptionRow>& transcription_table();

double general_rate_exponent(const RateParameters& params, Side side);
// Requires r >= 1.
BoundReport general_rate_constant(const RateParameters& params, const MollifierKernel& kernel, double r,
                                  double t, Side side);

struct HolderParameters {
  double alpha;
  double c;
};

HolderParameters holder_parameters(const MollifierKernel& kernel, double r, double T, double omega,
                                   double a1, double a2, double p);

// Upper side only. smooth selects the second-order constant-coefficient variant.
BoundReport nisio_bounds(const GeneratorBounds& gb, const MollifierKernel& kernel, double r, double t,
                         double h0, bool smooth, double c_kappa = 1.0);

BoundReport lln_bounds(const ScenarioConvexExpectation& ce, const MollifierKernel& kernel, double r,
                       double t, Side side);

// symmetric selects the fourth-moment variant (d = 1, third moments zero).
BoundReport clt_bounds(const ScenarioConvexExpectation& ce, const GrowthCertificate& cert,
                       const MollifierKernel& kernel, double r, double t, bool symmetric, Side side);

// Growth data of the CLT step for time regularity: a1 = 0, a2 = a E[(d/2)|xi|^2], p.
HolderParameters clt_holder_parameters(const ScenarioConvexExpectation& ce, const GrowthCertificate& cert,
                                       const MollifierKernel& kernel, double r, double T);

}  // namespace chernoff
