#include "chernoff/bounds.hpp"

#include "chernoff/error.hpp"

#include <algorithm>
#include <cmath>

namespace chernoff {

const std::vector<TranscriptionRow>& transcription_table() {
  static const std::vector<TranscriptionRow> rows = {
      {"rate.1", "e^{w(t+h0)} (2r + a1(r) + a2 b01^p r^p)"},
      {"rate.2", "e^{w(t+eps1)} (1 + e^{w h0}) (3r + a1(r) + a2 b01^p r^p)"},
      {"rate.3.lower", "e^{wt} L r e^{w(t+eps1)} t"},
      {"rate.3.upper", "e^{wt} L r e^{w eps1} t"},
      {"rate.theta", "e^{wt} sum_i theta_i(r,t) t"},
      {"nisio.w", "e^{wt} c_rt/(1+alpha) e^{w(t+eps1)} sum_{i=1..3} w_i b_{0,i-1} t"},
      {"nisio.v", "e^{wt} (2 c_kappa c_rt + e^{wt} r)(sum_{i=1..2} v_i b_{1,i} + b20/2) t"},
      {"nisio2.vt", "e^{wt} 1/2 e^{w(t+eps1)} r sum_{i=1..4} vt_i b_{0,i-1} t"},
      {"lln.8r", "8r"},
      {"lln.5", "5 E[d^{1/2} r |xi|] t"},
      {"lln.b01", "E[1/2 d r b01 |xi|^2 + d^{1/2} r |xi|] t"},
      {"lln.b11", "E[(d^{1/2}(K c_r + r) b11 + d^{1/2} r)|xi|] t, K = 1 lower, 2 upper"},
      {"lln.b20", "1/2 (K c_r + r) b20 t"},
      {"clt.8r", "8r"},
      {"clt.3a", "3a E[(d/2)|xi|^2] b01^p r^p"},
      {"clt.2a", "2a E[(d/2) r b01 |xi|^2] t"},
      {"clt.b02", "a E[1/6 d^{3/2} r b02 |xi|^3 + (d/2) r b01 |xi|^2] t"},
      {"clt.b12", "a E[(d/2)((K c_r + r) b12 + r b01)|xi|^2]"},
      {"clt.b20", "1/2 (K c_r + r) b20"},
      {"clt2.8r", "8r"},
      {"clt2.3a", "3a E[1/2 |xi|^2] b01^p r^p"},
      {"clt2.2a", "2a E[1/2 r b01 |xi|^2] t"},
      {"clt2.b03", "a E[1/24 r b03 |xi|^4 + 1/2 r b01 |xi|^2]"},
      {"clt2.b12", "E[1/2((K c_r + r) b12 + r b01)|xi|^2]"},
      {"clt2.b20", "1/2 (K c_r + r) b20"},
  };
  return rows;
}

namespace {

double sum_terms(const std::vector<Addend>& terms) {
  double s = 0.0;
  for (const auto& a : terms) s += a.value;
  return s;
}

void finish(BoundReport& rep) { rep.constant = sum_terms(rep.terms); }

void require_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("Lipschitz constant r must be non-negative");
}

void require_t(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time t must be non-negative");
}

}  // namespace

double general_rate_exponent(const RateParameters& params, Side side) {
  const auto& ex = side == Side::lower ? params.exponents_lower : params.exponents_upper;
  if (ex.empty()) throw DomainError("exponent list is empty");
  if (!(params.p >= 0.0)) throw DomainError("p must be non-negative");
  double g = 1.0 / (1.0 + params.p);
  for (const auto& e : ex) {
    if (!(e.alpha > 0.0) || !(e.beta >= 0.0)) throw DomainError("exponents need alpha > 0, beta >= 0");
    g = std::min(g, e.alpha / (1.0 + e.beta));
  }
  return g;
}

BoundReport general_rate_constant(const RateParameters& params, const MollifierKernel& kernel, double r,
                                  double t, Side side) {
  if (!(r >= 1.0)) throw DomainError("the general rate constant needs r >= 1");
  require_t(t);
  const double w = params.omega;
  const double p = params.p;
  BoundReport rep;
  rep.theorem = "rate2";
  rep.side = side;
  rep.gamma = general_rate_exponent(params, side);
  rep.h0 = params.h0;
  rep.r = r;
  rep.t = t;
  rep.eps1 = std::pow(params.h0, (1.0 + p) * rep.gamma);
  const double growth = params.a1(r) + params.a2 * std::pow(kernel.kernel_constant(0, 1), p) * std::pow(r, p);
  rep.terms.push_back({"rate.1", std::exp(w * (t + params.h0)) * (2.0 * r + growth)});
  rep.terms.push_back(
      {"rate.2", std::exp(w * (t + rep.eps1)) * (1.0 + std::exp(w * params.h0)) * (3.0 * r + growth)});
  if (side == Side::lower)
    rep.terms.push_back({"rate.3.lower", std::exp(w * t) * params.L * r * std::exp(w * (t + rep.eps1)) * t});
  else
    rep.terms.push_back({"rate.3.upper", std::exp(w * t) * params.L * r * std::exp(w * rep.eps1) * t});
  double theta = 0.0;
  for (const auto& th : side == Side::lower ? params.theta_lower : params.theta_upper) theta += th(r, t);
  rep.terms.push_back({"rate.theta", std::exp(w * t) * theta * t});
  finish(rep);
  return rep;
}

HolderParameters holder_parameters(const MollifierKernel& kernel, double r, double T, double omega,
                                   double a1, double a2, double p) {
  if (!(r >= 1.0)) throw DomainError("time regularity constant needs r >= 1");
  require_t(T);
  if (!(p >= 0.0) || !(a2 >= 0.0)) throw DomainError("need a2, p >= 0");
  return {1.0 / (1.0 + p),
          std::exp(omega * T) * (2.0 * r + a1 + a2 * std::pow(kernel.kernel_constant(0, 1), p) * std::pow(r, p))};
}

BoundReport nisio_bounds(const GeneratorBounds& gb, const MollifierKernel& kernel, double r, double t,
                         double h0, bool smooth, double c_kappa) {
  require_r(r);
  require_t(t);
  if (!(h0 > 0.0)) throw DomainError("h0 must be positive");
  if (smooth && !gb.has_vtilde) throw DomainError("smooth Nisio bound needs the v~ constants");
  const bool first_order = gb.v2 == 0.0 && gb.w3 == 0.0;
  const bool second = smooth && !first_order;
  const double w = gb.omega;
  const double p = gb.v2 > 0.0 ? 1.0 : 0.0;
  const double alpha = 1.0 / (1.0 + p);
  const double b01 = kernel.kernel_constant(0, 1);
  auto b = [&](int k, int l) { return kernel.kernel_constant(k, l); };

  BoundReport rep;
  rep.side = Side::upper;
  rep.theorem = second ? "nisio2" : "nisio";
  rep.gamma = second ? 0.25 : (first_order ? 0.5 : 1.0 / 6.0);
  rep.eps1 = second ? std::pow(h0, 2.0 * rep.gamma) : std::pow(h0, (1.0 + p) * rep.gamma);
  rep.h0 = h0;
  rep.r = r;
  rep.t = t;

  const double growth = std::exp(w) * gb.v1 * r + std::exp(w) * gb.v2 * std::pow(b01, p) * std::pow(r, p);
  rep.terms.push_back({"rate.1", std::exp(w * (t + h0)) * (2.0 * r + growth)});
  rep.terms.push_back({"rate.2", std::exp(w * (t + rep.eps1)) * (1.0 + std::exp(w * h0)) * (3.0 * r + growth)});
  rep.terms.push_back({"rate.3.upper", std::exp(w * t) * gb.L * r * std::exp(w * rep.eps1) * t});

  const double c_rt = std::exp(w * t) * (2.0 + std::exp(w) * gb.v1 + std::exp(w) * gb.v2 * b01) * r;
  if (second) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += gb.vt[static_cast<std::size_t>(i)] * b(0, i);
    rep.terms.push_back({"nisio2.vt", std::exp(w * t) * 0.5 * std::exp(w * (t + rep.eps1)) * r * s * t});
  } else {
    const double s = gb.w1 * b(0, 0) + gb.w2 * b(0, 1) + gb.w3 * b(0, 2);
    rep.terms.push_back(
        {"nisio.w", std::exp(w * t) * c_rt / (1.0 + alpha) * std::exp(w * (t + rep.eps1)) * s * t});
  }
  const double vs = gb.v1 * b(1, 1) + gb.v2 * b(1, 2) + 0.5 * b(2, 0);
  rep.terms.push_back({"nisio.v", std::exp(w * t) * (2.0 * c_kappa * c_rt + std::exp(w * t) * r) * vs * t});
  finish(rep);
  return rep;
}

namespace {

double sqrt_d(const ScenarioConvexExpectation& ce) { return std::sqrt(static_cast<double>(ce.dimension())); }

// E[c1 |xi| + c2 |xi|^2 + c3 |xi|^3 + c4 |xi|^4]
double E(const ScenarioConvexExpectation& ce, double c1, double c2 = 0.0, double c3 = 0.0, double c4 = 0.0) {
  return ce.eval_abs_polynomial({0.0, c1, c2, c3, c4});
}

}  // namespace

BoundReport lln_bounds(const ScenarioConvexExpectation& ce, const MollifierKernel& kernel, double r,
                       double t, Side side) {
  require_r(r);
  require_t(t);
  const double d = ce.dimension();
  const double sd = sqrt_d(ce);
  const double K = side == Side::lower ? 1.0 : 2.0;
  const double b01 = kernel.kernel_constant(0, 1);
  const double b11 = kernel.kernel_constant(1, 1);
  const double b20 = kernel.kernel_constant(2, 0);
  const double c_r = 2.0 * r + E(ce, sd * r);

  BoundReport rep;
  rep.theorem = "lln";
  rep.side = side;
  rep.gamma = 0.5;
  rep.r = r;
  rep.t = t;
  rep.terms.push_back({"lln.8r", 8.0 * r});
  rep.terms.push_back({"lln.5", 5.0 * E(ce, sd * r) * t});
  rep.terms.push_back({"lln.b01", E(ce, sd * r, 0.5 * d * r * b01) * t});
  rep.terms.push_back({"lln.b11", E(ce, sd * (K * c_r + r) * b11 + sd * r) * t});
  rep.terms.push_back({"lln.b20", 0.5 * (K * c_r + r) * b20 * t});
  finish(rep);
  return rep;
}

BoundReport clt_bounds(const ScenarioConvexExpectation& ce, const GrowthCertificate& cert,
                       const MollifierKernel& kernel, double r, double t, bool symmetric, Side side) {
  require_r(r);
  require_t(t);
  if (!cert.found) throw DomainError("clt bound needs a growth certificate");
  if (!ce.is_zero_mean()) throw DomainError("clt bound needs zero-mean scenarios");
  if (symmetric && !ce.third_moments_vanish())
    throw DomainError("fourth-moment clt bound needs d = 1 and vanishing third moments");
  const double d = ce.dimension();
  const double a = cert.a;
  const double p = cert.p;
  const double K = side == Side::lower ? 1.0 : 2.0;
  auto b = [&](int k, int l) { return kernel.kernel_constant(k, l); };
  const double b01 = b(0, 1);
  const double c_r = 2.0 * r + a * E(ce, 0.0, 0.5 * d) * std::pow(b01, p) * std::pow(r, p);

  BoundReport rep;
  rep.side = side;
  rep.r = r;
  rep.t = t;
  if (!symmetric) {
    rep.theorem = "clt";
    rep.gamma = 1.0 / (4.0 + 2.0 * p);
    rep.terms.push_back({"clt.8r", 8.0 * r});
    rep.terms.push_back({"clt.3a", 3.0 * a * E(ce, 0.0, 0.5 * d) * std::pow(b01, p) * std::pow(r, p)});
    rep.terms.push_back({"clt.2a", 2.0 * a * E(ce, 0.0, 0.5 * d * r * b01) * t});
    rep.terms.push_back(
        {"clt.b02", a * E(ce, 0.0, 0.5 * d * r * b01, std::pow(d, 1.5) / 6.0 * r * b(0, 2)) * t});
    rep.terms.push_back({"clt.b12", a * E(ce, 0.0, 0.5 * d * ((K * c_r + r) * b(1, 2) + r * b01))});
    rep.terms.push_back({"clt.b20", 0.5 * (K * c_r + r) * b(2, 0)});
  } else {
    rep.theorem = "clt2";
    rep.gamma = 1.0 / (2.0 + 2.0 * p);
    rep.terms.push_back({"clt2.8r", 8.0 * r});
    rep.terms.push_back({"clt2.3a", 3.0 * a * E(ce, 0.0, 0.5) * std::pow(b01, p) * std::pow(r, p)});
    rep.terms.push_back({"clt2.2a", 2.0 * a * E(ce, 0.0, 0.5 * r * b01) * t});
    rep.terms.push_back({"clt2.b03", a * E(ce, 0.0, 0.5 * r * b01, 0.0, r * b(0, 3) / 24.0)});
    rep.terms.push_back({"clt2.b12", E(ce, 0.0, 0.5 * ((K * c_r + r) * b(1, 2) + r * b01))});
    rep.terms.push_back({"clt2.b20", 0.5 * (K * c_r + r) * b(2, 0)});
  }
  finish(rep);
  return rep;
}

HolderParameters clt_holder_parameters(const ScenarioConvexExpectation& ce, const GrowthCertificate& cert,
                                       const MollifierKernel& kernel, double r, double T) {
  if (!cert.found) throw DomainError("time regularity needs a growth certificate");
  const double a2 = cert.a * E(ce, 0.0, 0.5 * ce.dimension());
  return holder_parameters(kernel, r, T, 0.0, 0.0, a2, cert.p);
}

}  // namespace chernoff
