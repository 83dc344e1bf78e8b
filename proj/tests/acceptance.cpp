// One line per acceptance criterion; exit status 1 if any criterion fails.
// Usage: acceptance <scratch directory>

#include "chernoff/convex_expectation.hpp"
#include "chernoff/iterate.hpp"
#include "chernoff/mollifier.hpp"
#include "chernoff/nisio.hpp"
#include "chernoff/norms.hpp"
#include "chernoff/properties.hpp"
#include "chernoff/reference.hpp"
#include "chernoff_tools/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

using namespace chernoff;
using namespace chernoff::tools;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [violated]");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path g_out;

struct Loaded {
  std::string text;
  ExperimentConfig cfg;
};

Loaded load(const std::string& name) {
  Loaded l;
  l.text = slurp(fs::path(CHERNOFF_CONFIG_DIR) / (name + ".cfg"));
  l.cfg = parse_config(l.text);
  return l;
}

// ---- 1: mollifier kernel against midpoint sums of an independent derivative recursion

using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) c[i + k] += a[i] * b[k];
  return c;
}

// beta^{(j)} = P_j / (1 - z^2)^{2j} beta, P_{j+1} = P_j' w^2 + (4 j z w - 2 z) P_j
std::vector<double> beta_l1_oracle(int cells) {
  const Poly w{1.0, 0.0, -1.0};
  std::vector<Poly> P{{1.0}};
  for (int j = 0; j < 3; ++j) {
    const Poly& p = P.back();
    Poly dp(std::max<std::size_t>(1, p.size() - 1), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = i * p[i];
    Poly a = poly_mul(dp, poly_mul(w, w));
    Poly b = poly_mul(Poly{0.0, 4.0 * j}, poly_mul(w, p));
    Poly c = poly_mul(Poly{0.0, -2.0}, p);
    Poly next(std::max({a.size(), b.size(), c.size()}), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) next[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) next[i] += b[i];
    for (std::size_t i = 0; i < c.size(); ++i) next[i] += c[i];
    P.push_back(next);
  }
  std::vector<double> B(4, 0.0);
  const double dz = 2.0 / cells;
  for (int j = 0; j <= 3; ++j) {
    double s = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double z = -1.0 + (i + 0.5) * dz, ww = 1.0 - z * z;
      double v = 0.0;
      for (std::size_t k = P[j].size(); k-- > 0;) v = v * z + P[j][k];
      s += std::abs(v / std::pow(ww, 2 * j) * std::exp(-1.0 / ww));
    }
    B[j] = s * dz;
  }
  return B;
}

Outcome criterion_kernel() {
  Outcome o;
  // the library integrates on 64 cells x 15 nodes per axis; the oracle uses 10x that resolution
  const auto B = beta_l1_oracle(64 * 15 * 10);
  for (int d : {1, 2}) {
    MollifierKernel k(d);
    const double sd = std::sqrt(static_cast<double>(d));
    // spatial factor int |sd^a beta^{(a)}(sd y)| dy = sd^{a-1} B_a
    auto space = [&](int a) { return std::pow(sd, a - 1) * B[a]; };
    const double norm = 1.0 / (0.5 * B[0] * std::pow(space(0), d));

    const int n = d == 1 ? 2000 : 200;
    const double hs = 1.0 / n, hy = 2.0 / sd / n;
    double mass = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (d == 1) {
          double y[1] = {-1.0 / sd + (j + 0.5) * hy};
          mass += k.density((i + 0.5) * hs, y);
        } else {
          for (int m = 0; m < n; ++m) {
            double y[2] = {-1.0 / sd + (j + 0.5) * hy, -1.0 / sd + (m + 0.5) * hy};
            mass += k.density((i + 0.5) * hs, y);
          }
        }
      }
    mass *= hs * std::pow(hy, d);
    note(o, std::abs(mass - 1.0) <= 1e-8, "d=" + std::to_string(d) + " mass-1 " + fmt("%.1e", mass - 1.0));
    note(o, std::abs(k.kernel_constant(0, 0) - 1.0) <= 1e-8, "b00-1 " + fmt("%.1e", k.kernel_constant(0, 0) - 1.0));

    double worst = 0.0;
    for (int kk = 0; kk <= 2; ++kk)
      for (int l = 0; l <= 3; ++l) {
        double oracle = 0.0;
        for (int a1 = 0; a1 <= l; ++a1) {
          const int a2 = l - a1;
          if (d == 1 && a2 != 0) continue;
          double v = norm * std::pow(2.0, kk) * 0.5 * B[kk] * space(a1) * (d == 2 ? space(a2) : 1.0);
          oracle = std::max(oracle, v);
        }
        worst = std::max(worst, std::abs(k.kernel_constant(kk, l) - oracle) / std::max(1.0, oracle));
      }
    note(o, worst <= 1e-6, "max rel b_kl gap " + fmt("%.1e", worst));
  }
  return o;
}

// ---- 2, 3: property suites

struct Suites {
  std::vector<std::pair<std::string, std::vector<PropertyResult>>> runs;
};

Suites run_suites() {
  Suites s;
  PropertySuiteOptions opts;
  opts.instances = 1000;
  opts.seed = 0;
  std::vector<std::pair<std::shared_ptr<StepOperator>, int>> ops{
      {std::make_shared<NisioOperator>(NisioFamily(1, {Control::scalar(0.5), Control::scalar(1.0, 0.3)})), 1},
      {std::make_shared<LinearOperator>(1, Control::scalar(1.0)), 1},
      {std::make_shared<LlnOperator>(
           ScenarioConvexExpectation({Scenario::point(1, {-1, 0}, 0.0), Scenario::point(1, {1, 0}, 0.5)})),
       1},
      {std::make_shared<CltOperator>(
           ScenarioConvexExpectation({Scenario::gaussian1d(0.0, 0.5), Scenario::gaussian1d(0.0, 1.0)})),
       1},
      {std::make_shared<NisioOperator>(load("heat_2d").cfg.family()), 2}};
  for (const auto& [op, d] : ops)
    s.runs.emplace_back(op->name() + "/" + std::to_string(d) + "d", run_property_suite(*op, property_grid(d), opts));
  return s;
}

Outcome criterion_structural(const Suites& s) {
  Outcome o;
  for (const auto& [name, rs] : s.runs) {
    double worst = 0.0;
    bool ok = true;
    for (const auto& r : rs)
      if (r.name == "monotone" || r.name == "convex" || r.name == "zero" || r.name == "contraction" ||
          r.name == "lipschitz" || r.name == "translation") {
        ok = ok && r.pass() && r.instances == 1000;
        worst = std::max(worst, r.max_violation);
      }
    note(o, ok, name + " worst " + fmt("%.1e", worst));
  }
  return o;
}

Outcome criterion_appendix(const Suites& s) {
  Outcome o;
  for (const auto& [name, rs] : s.runs) {
    double worst = 0.0;
    bool ok = true;
    for (const auto& r : rs)
      if (r.name == "lambda" || r.name == "kappa_shift" || r.name == "jensen") {
        ok = ok && r.pass() && r.instances == 1000;
        worst = std::max(worst, r.max_violation);
      }
    note(o, ok, name + " worst " + fmt("%.1e", worst));
  }
  return o;
}

// ---- 4, 5: linear exactness and convex collapse

Grid desk_grid() { return Grid::line(-12.0, 12.0, 4096); }

Outcome criterion_linear() {
  Outcome o;
  const Grid g = desk_grid();
  const Box region = interior_box(g, 4.0);
  const auto one = WeightFunction::one(g);
  auto cosf = [](std::span<const double> x) { return std::cos(x[0]); };
  const GridFunction f = GridFunction::sample(g, cosf);
  const GridFunction exact = GridFunction::sample(g, [](std::span<const double> x) { return std::exp(-0.5) * std::cos(x[0]); });
  for (auto [m, tol] : {std::pair<std::size_t, double>{32, 5e-3}, {64, 5e-4}}) {
    KernelOptions opts;
    opts.rule = GaussianRule::gauss_hermite;
    opts.gh_nodes = m;
    NisioOperator op(NisioFamily(1, {Control::scalar(1.0)}), opts);
    double worst = 0.0;
    for (int n = 3; n <= 9; ++n) {
      const auto it = chernoff_iterate(op, f, 1.0, std::ldexp(1.0, -n)).value;
      worst = std::max(worst, weighted_norm(it - exact, one, region));
    }
    note(o, worst <= tol, "M=" + std::to_string(m) + " max err " + fmt("%.2e", worst) + " <= " + fmt("%.0e", tol));
  }
  return o;
}

Outcome criterion_collapse() {
  Outcome o;
  const Grid g = desk_grid();
  const Box region = interior_box(g, 4.0);
  const auto one = WeightFunction::one(g);
  auto absf = [](std::span<const double> x) { return std::abs(x[0]); };
  const GridFunction f = GridFunction::sample(g, absf);
  const GridFunction ref = heat_exact(absf, g, Control::scalar(1.0), 1.0);
  NisioOperator op(NisioFamily(1, {Control::scalar(0.5), Control::scalar(1.0)}));
  double worst = 0.0, worst0 = 0.0;
  const double x0 = 0.0;
  for (int n = 3; n <= 9; ++n) {
    const auto it = chernoff_iterate(op, f, 1.0, std::ldexp(1.0, -n)).value;
    worst = std::max(worst, weighted_norm(it - ref, one, region));
    worst0 = std::max(worst0, std::abs(it.interpolate(std::span<const double>(&x0, 1)) - std::sqrt(2.0 / M_PI)));
  }
  note(o, worst <= 1e-3, "max err vs sigma_max heat " + fmt("%.2e", worst));
  note(o, worst0 <= 1e-3, "|u(0) - sqrt(2/pi)| " + fmt("%.2e", worst0));
  return o;
}

// ---- 6, 7, 8: rate experiments

struct Ran {
  Loaded loaded;
  RunResult result;
  fs::path dir;
};

Ran run_config(const std::string& name, const std::string& tag) {
  Ran r{load(name), {}, g_out / tag};
  fs::remove_all(r.dir);
  r.result = run_experiment(r.loaded.cfg, r.loaded.text, r.dir.string());
  return r;
}

void note_bounds(Outcome& o, const RateReport& rep) {
  for (std::size_t i = 0; i < rep.bounds.size(); ++i)
    note(o, rep.checks[i].all_pass,
         rep.bounds[i].theorem + (rep.bounds[i].side == Side::upper ? "+" : "-") + " gamma " +
             fmt("%.3g", rep.bounds[i].gamma) + " ratio " + fmt("%.2e", rep.checks[i].max_ratio));
}

void note_slope(Outcome& o, const RateReport& rep, double floor) {
  note(o, rep.fit.conclusive && rep.fit.slope >= floor,
       "slope " + fmt("%.3f", rep.fit.slope) + " >= " + fmt("%.2f", floor));
}

Outcome criterion_nisio(const Ran& r) {
  Outcome o;
  const auto& rep = r.result.report;
  note_bounds(o, rep);
  bool has_quarter = false;
  for (const auto& b : rep.bounds) has_quarter = has_quarter || (b.gamma == 0.25 && b.side == Side::upper);
  note(o, has_quarter, "gamma+ = 1/4 bound present");
  double worst = 0.0;
  for (const auto& p : rep.curve.points) worst = std::max(worst, p.e_minus);
  const double unc = r.result.oracle_uncertainty;
  note(o, worst <= 10.0 * unc, "max e- " + fmt("%.1e", worst) + " <= 10 x unc " + fmt("%.1e", unc));
  note_slope(o, rep, 0.20);
  return o;
}

Outcome criterion_lln(const Ran& r) {
  Outcome o;
  const auto& rep = r.result.report;
  note_bounds(o, rep);
  note_slope(o, rep, 0.45);
  // limit: sup_{|y| <= 1} f(x + y) - (y + 1)/4 by a continuous-offset scan with the exact payoff
  const auto& cfg = r.loaded.cfg;
  const auto payoff = cfg.payoff.function();
  const GridFunction lim = maximally_distributed_limit(cfg.expectation(), cfg.initial(), cfg.t);
  const Grid g = lim.grid();
  const Box region = cfg.region();
  double gap = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!region.contains(g.point(i), 1)) continue;
    const double x = g.coord(0, i);
    double best = -INFINITY;
    for (int j = -20000; j <= 20000; ++j) {
      const double y = j * 5e-5;
      const double z = x + y;
      best = std::max(best, payoff(std::span<const double>(&z, 1)) - (y + 1.0) / 4.0);
    }
    gap = std::max(gap, std::abs(best - lim[i]));
  }
  // a lattice sup misses the continuous one by at most (Lip f + Lip phi) dx; the scan by the same at 5e-5
  const double tol = 1.25 * (g.spacing(0) + 5e-5);
  note(o, gap <= tol, "limit vs continuous scan " + fmt("%.1e", gap) + " <= " + fmt("%.1e", tol));
  return o;
}

// Explicit monotone finite differences for u_t = max_s 1/2 s^2 u_xx, constant continuation.
std::vector<double> gheat_fd(const std::function<double(double)>& f, double lo, double hi, std::size_t n,
                             double smax, double t) {
  const double dx = (hi - lo) / (n - 1);
  const std::size_t steps = static_cast<std::size_t>(std::ceil(t / (0.5 * dx * dx / (smax * smax))));
  const double dt = t / steps;
  std::vector<double> u(n), next(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = f(lo + i * dx);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double l = u[i == 0 ? 0 : i - 1], r = u[i + 1 == n ? i : i + 1];
      const double lap = (l - 2.0 * u[i] + r) / (dx * dx);
      const double s2 = lap > 0.0 ? smax * smax : 0.25;
      next[i] = u[i] + dt * 0.5 * s2 * lap;
    }
    u.swap(next);
  }
  return u;
}

Outcome criterion_clt(const Ran& r) {
  Outcome o;
  const auto& rep = r.result.report;
  note_bounds(o, rep);
  bool has6 = false, has4 = false;
  for (const auto& b : rep.bounds) {
    has6 = has6 || b.gamma == 1.0 / 6.0;
    has4 = has4 || b.gamma == 0.25;
  }
  note(o, has6 && has4, "gamma 1/6 and 1/4 bounds present");
  note_slope(o, rep, 0.20);

  // limit: clt_limit_reference against finite differences on the same grid and on a 2x coarser one
  const auto& cfg = r.loaded.cfg;
  const Grid g = cfg.grid();
  const Box region = cfg.region();
  const auto ref = clt_limit_reference(cfg.expectation(), cfg.initial(), cfg.h_fine, region);
  auto payoff = [&](double x) { return cfg.payoff.function()(std::span<const double>(&x, 1)); };
  const auto fine = gheat_fd(payoff, g.lower(0), g.upper(0), g.count(0), 1.0, cfg.t);
  const std::size_t nc = (g.count(0) + 1) / 2;
  const double hi_c = g.lower(0) + (nc - 1) * 2.0 * g.spacing(0);
  const auto coarse = gheat_fd(payoff, g.lower(0), hi_c, nc, 1.0, cfg.t);
  double gap = 0.0, fd_unc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!region.contains(g.point(i), 1)) continue;
    gap = std::max(gap, std::abs(ref.value[i] - fine[i]));
    if (i % 2 == 0) fd_unc = std::max(fd_unc, std::abs(fine[i] - coarse[i / 2]));
  }
  const double tol = ref.uncertainty + fd_unc;
  note(o, gap <= tol, "limit vs finite differences " + fmt("%.1e", gap) + " <= " + fmt("%.1e", tol));
  return o;
}

// ---- 9: time regularity along the CLT trajectory

SpaceTimeFunction clt_trajectory(const ExperimentConfig& cfg) {
  const auto op = cfg.make_operator();
  return *chernoff_iterate(*op, cfg.initial(), cfg.t, cfg.h_list.back(), true).trajectory;
}

Outcome criterion_holder(const Ran& r, const SpaceTimeFunction& traj) {
  Outcome o;
  const auto& cfg = r.loaded.cfg;
  const auto ce = cfg.expectation();
  const auto hp = clt_holder_parameters(ce, growth_certificate(ce), MollifierKernel(1), cfg.lipschitz_r(), cfg.t);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < traj.size(); i += 2)
    for (std::size_t j = i + 1; j < traj.size(); j += 3) pairs.emplace_back(i, j);
  const auto rep = holder_check(traj, cfg.h_list.back(), hp.alpha, hp.c, cfg.kappa(), cfg.region(), pairs, 1.01);
  note(o, rep.pass, std::to_string(rep.pairs) + " pairs, ratio " + fmt("%.3f", rep.max_ratio) + " vs c " +
                        fmt("%.4f", hp.c) + " (alpha " + fmt("%.2f", hp.alpha) + ")");
  if (r.result.holder) note(o, r.result.holder->pass, "run check ratio " + fmt("%.3f", r.result.holder->max_ratio));
  return o;
}

// ---- 10: mollifier derivative bounds on Lipschitz trajectories

Outcome criterion_derivatives(const SpaceTimeFunction& clt_traj) {
  Outcome o;
  // a second trajectory: G-heat with drift on a smaller grid
  const Grid g = Grid::line(-6.0, 6.0, 1537);
  NisioOperator op(NisioFamily(1, {Control::scalar(0.5, 0.3), Control::scalar(1.0, -0.2)}));
  const auto f = GridFunction::sample(g, [](std::span<const double> x) { return std::min(std::abs(x[0]), 1.0); });
  const auto gheat = *chernoff_iterate(op, f, 1.0, 1.0 / 64, true).trajectory;
  const MollifierKernel k(1);
  std::vector<std::pair<std::string, const SpaceTimeFunction*>> trajs{{"clt", &clt_traj}, {"gheat", &gheat}};
  for (const auto& [name, u] : trajs)
    for (Epsilon eps : {Epsilon{0.25, 0.25}, Epsilon{0.5, 0.5}}) {
      DerivativeCheckOptions opts;
      opts.r = 1.0;
      opts.tolerance = 1.05;
      double worst = 0.0;
      bool ok = true;
      int pairs = 0;
      for (int kk = 0; kk <= 2; ++kk)
        for (int l = 0; l <= 3; ++l) {
          if (kk == 0 && l == 0) continue;  // u^eps itself, no derivative bound
          const auto rep = derivative_bound_check(k, *u, eps, kk, l, opts);
          ok = ok && rep.pass;
          worst = std::max(worst, rep.ratio);
          ++pairs;
        }
      note(o, ok, name + " eps " + fmt("%.2g", eps.eps1) + " " + std::to_string(pairs) + " pairs worst ratio " +
                      fmt("%.3f", worst));
    }
  return o;
}

// ---- 11: discrete comparison with a per-step drift

Outcome criterion_comparison() {
  Outcome o;
  const Grid g = desk_grid();
  const auto one = WeightFunction::one(g);
  const auto f = GridFunction::sample(g, [](std::span<const double> x) { return std::min(std::abs(x[0]), 1.0); });
  const double h = 1.0 / 64, T = 1.0, c = 0.3, gap0 = 0.05;
  const std::size_t k = partition(T, h).k;
  std::vector<std::pair<std::string, std::shared_ptr<StepOperator>>> ops{
      {"brownian", std::make_shared<LinearOperator>(1, Control::scalar(1.0))},
      {"transport", std::make_shared<LinearOperator>(1, Control::scalar(0.0, 0.7))},
      {"drifted", std::make_shared<LinearOperator>(1, Control::scalar(0.6, -0.4))}};
  for (const auto& [name, op] : ops) {
    std::vector<double> times{0.0};
    std::vector<GridFunction> us{f + gap0}, vs{f};
    for (std::size_t j = 1; j <= k; ++j) {
      us.push_back(op->apply(us.back(), h) + c * h);
      vs.push_back(op->apply(vs.back(), h));
      times.push_back(j * h);
    }
    std::vector<GridFunction> fb(k, GridFunction::constant(g, c)), gb(k, GridFunction::zero(g));
    const auto rep = discrete_comparison_check(*op, SpaceTimeFunction(times, us), SpaceTimeFunction(times, vs), fb,
                                               gb, h, T, one, 0.0, 1e-9);
    note(o, !rep.vacuous && rep.pass,
         name + " final gap " + fmt("%.6f", rep.lhs.back()) + " <= " + fmt("%.6f", gap0 + c * T) + ", excess " +
             fmt("%.1e", rep.max_excess));
  }
  return o;
}

// ---- 12: byte-identical artifacts

Outcome criterion_reproducible(const Ran& first) {
  Outcome o;
  const char* old = std::getenv("CHERNOFF_WORKERS");
  const std::string saved = old ? old : "";
  setenv("CHERNOFF_WORKERS", "3", 1);
  const Ran second = run_config(first.loaded.cfg.name, "repro_" + first.loaded.cfg.name);
  if (old) setenv("CHERNOFF_WORKERS", saved.c_str(), 1); else unsetenv("CHERNOFF_WORKERS");
  std::set<std::string> seen;
  for (const auto& f : first.result.files) {
    seen.insert(f);
    note(o, fs::exists(first.dir / f) && slurp(first.dir / f) == slurp(second.dir / f), f);
  }
  bool all = true;
  for (const char* f : {"error_curve.csv", "rate_report.json", "bound_report.json", "manifest.json"})
    all = all && seen.count(f);
  note(o, all, std::to_string(seen.size()) + " files compared");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "chernoff_acceptance";
  fs::create_directories(g_out);

  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "kernel normalization and b_kl table", criterion_kernel);
  Suites suites;
  report(2, "structural property suite", [&] {
    suites = run_suites();
    return criterion_structural(suites);
  });
  report(3, "appendix lemma suite", [&] { return criterion_appendix(suites); });
  report(4, "linear exactness", criterion_linear);
  report(5, "convex payoff collapse", criterion_collapse);

  Ran nisio, lln, clt;
  report(6, "Nisio rate", [&] {
    nisio = run_config("gheat_lipschitz", "gheat_lipschitz");
    return criterion_nisio(nisio);
  });
  report(7, "LLN rate", [&] {
    lln = run_config("lln_penalized", "lln_penalized");
    return criterion_lln(lln);
  });
  report(8, "CLT rates", [&] {
    clt = run_config("clt_sublinear", "clt_sublinear");
    return criterion_clt(clt);
  });
  std::optional<SpaceTimeFunction> traj;
  report(9, "time regularity", [&] {
    traj = clt_trajectory(clt.loaded.cfg);
    return criterion_holder(clt, *traj);
  });
  report(10, "mollifier derivative bounds", [&] {
    if (!traj) throw std::runtime_error("no CLT trajectory");
    return criterion_derivatives(*traj);
  });
  report(11, "discrete comparison", criterion_comparison);
  report(12, "reproducibility", [&] {
    if (nisio.result.files.empty()) throw std::runtime_error("no first run to compare");
    return criterion_reproducible(nisio);
  });

  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
