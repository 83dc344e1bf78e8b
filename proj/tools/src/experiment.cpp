#include "chernoff_tools/experiment.hpp"

#include "chernoff/error.hpp"
#include "chernoff/iterate.hpp"
#include "chernoff/mollifier.hpp"
#include "chernoff/serialization.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chernoff::tools {

using nlohmann::ordered_json;

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return exit_pass;
    case Verdict::fail: return exit_fail;
    case Verdict::inconclusive: return exit_inconclusive;
  }
  return exit_inconclusive;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericError("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::vector<BoundReport> experiment_bounds(const ExperimentConfig& cfg) {
  const MollifierKernel kernel(cfg.dimension);
  const double r = cfg.lipschitz_r();
  std::vector<BoundReport> out;
  switch (cfg.op) {
    case OperatorKind::nisio: {
      const NisioFamily fam = cfg.family();
      const double h0 = cfg.h_list.empty() ? 1.0 : cfg.h_list.front();
      out.push_back(nisio_bounds(fam.bounds(), kernel, r, cfg.t, h0, cfg.smooth && fam.bounds().has_vtilde,
                                 cfg.kappa().c_kappa()));
      break;
    }
    case OperatorKind::lln: {
      const auto ce = cfg.expectation();
      out.push_back(lln_bounds(ce, kernel, r, cfg.t, Side::lower));
      out.push_back(lln_bounds(ce, kernel, r, cfg.t, Side::upper));
      break;
    }
    case OperatorKind::clt: {
      const auto ce = cfg.expectation();
      const auto cert = growth_certificate(ce);
      if (!cert.found) throw DomainError("no growth certificate with p <= 3 for this expectation");
      out.push_back(clt_bounds(ce, cert, kernel, r, cfg.t, false, Side::lower));
      out.push_back(clt_bounds(ce, cert, kernel, r, cfg.t, false, Side::upper));
      if (ce.third_moments_vanish()) {
        out.push_back(clt_bounds(ce, cert, kernel, r, cfg.t, true, Side::lower));
        out.push_back(clt_bounds(ce, cert, kernel, r, cfg.t, true, Side::upper));
      }
      break;
    }
  }
  return out;
}

namespace {

const char* side_name(Side s) { return s == Side::lower ? "lower" : "upper"; }

ordered_json fit_json(const RateFit& f) {
  ordered_json j;
  j["conclusive"] = f.conclusive;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["points_used"] = f.used;
  return j;
}

std::string formula_for(const std::string& id) {
  for (const auto& row : transcription_table())
    if (row.id == id) return row.formula;
  return "";
}

struct Reference {
  GridFunction value;
  double uncertainty;
};

Reference build_reference(const ExperimentConfig& cfg, const StepOperator& op, const GridFunction& f) {
  const Grid grid = cfg.grid();
  const Box region = cfg.region();
  switch (cfg.reference) {
    case ReferenceKind::heat_exact:
      return {heat_exact(cfg.payoff.function(), grid, cfg.controls.front(), cfg.t), 0.0};
    case ReferenceKind::gheat_convex: {
      double smin = INFINITY, smax = 0.0;
      for (const auto& c : cfg.controls) {
        if (c.m[0] != 0.0 || c.m[1] != 0.0) throw DomainError("gheat_convex needs drift-free controls");
        smin = std::min(smin, std::abs(c.sigma[0][0]));
        smax = std::max(smax, std::abs(c.sigma[0][0]));
      }
      return {gheat_convex_reference(cfg.payoff.function(), grid, smin, smax, cfg.t), 0.0};
    }
    case ReferenceKind::maximally_distributed:
      return {maximally_distributed_limit(cfg.expectation(), f, cfg.t), 0.0};
    case ReferenceKind::clt_limit: {
      auto ref = clt_limit_reference(cfg.expectation(), f, cfg.h_fine, region);
      return {std::move(ref.value), ref.uncertainty};
    }
    case ReferenceKind::fine_oracle: break;
  }
  auto o = fine_oracle(op, f, cfg.t, cfg.h_fine, cfg.kappa(), region);
  return {std::move(o.value), o.uncertainty};
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

}  // namespace

ordered_json bound_json(const BoundReport& b) {
  ordered_json j;
  j["theorem"] = b.theorem;
  j["side"] = side_name(b.side);
  j["gamma"] = b.gamma;
  j["constant"] = b.constant;
  j["r"] = b.r;
  j["t"] = b.t;
  j["h0"] = b.h0;
  j["eps1"] = b.eps1;
  ordered_json terms = ordered_json::array();
  for (const auto& a : b.terms) {
    ordered_json t;
    t["id"] = a.id;
    t["formula"] = formula_for(a.id);
    t["value"] = a.value;
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j;
}

ordered_json rate_json(const RateReport& r, const std::optional<HolderReport>& holder) {
  ordered_json j;
  j["verdict"] = verdict_name(r.verdict);
  j["gamma_target"] = r.gamma_target;
  j["slope_tolerance"] = r.slope_tolerance;
  j["noise_multiplier"] = r.noise_multiplier;
  j["noise_floor"] = r.noise_floor;
  j["at_noise_floor"] = r.at_noise_floor;
  j["oracle_inconclusive"] = r.oracle_inconclusive;
  j["fit"] = fit_json(r.fit);
  j["fit_plus"] = fit_json(r.fit_plus);
  j["fit_minus"] = fit_json(r.fit_minus);
  ordered_json pts = ordered_json::array();
  for (const auto& p : r.curve.points) {
    ordered_json q;
    q["h"] = p.h;
    q["e_plus"] = p.e_plus;
    q["e_minus"] = p.e_minus;
    q["oracle_uncertainty"] = p.uncertainty;
    pts.push_back(q);
  }
  j["points"] = pts;
  ordered_json checks = ordered_json::array();
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    ordered_json c;
    c["theorem"] = r.bounds[i].theorem;
    c["side"] = side_name(r.bounds[i].side);
    c["gamma"] = r.bounds[i].gamma;
    c["constant"] = r.bounds[i].constant;
    c["max_ratio"] = r.checks[i].max_ratio;
    c["all_pass"] = r.checks[i].all_pass;
    ordered_json per = ordered_json::array();
    for (std::size_t k = 0; k < r.checks[i].pass.size(); ++k) {
      ordered_json e;
      e["checked"] = r.checks[i].checked[k] != 0;
      e["bound_value"] = r.checks[i].bound_value[k];
      e["pass"] = r.checks[i].pass[k] != 0;
      per.push_back(e);
    }
    c["points"] = per;
    checks.push_back(c);
  }
  j["bound_checks"] = checks;
  if (holder) {
    ordered_json h;
    h["max_ratio"] = holder->max_ratio;
    h["c"] = holder->c;
    h["pairs"] = holder->pairs;
    h["pass"] = holder->pass;
    j["holder"] = h;
  }
  return j;
}

ordered_json properties_json(const std::vector<PropertyResult>& results) {
  ordered_json j = ordered_json::array();
  for (const auto& p : results) {
    ordered_json q;
    q["property"] = p.name;
    q["instances"] = p.instances;
    q["failures"] = p.failures;
    q["max_violation"] = p.max_violation;
    q["pass"] = p.pass();
    j.push_back(q);
  }
  return j;
}

std::string error_curve_csv(const RateReport& r) {
  // bound_value uses the upper bound with the largest exponent.
  std::size_t primary = 0;
  for (std::size_t i = 0; i < r.bounds.size(); ++i) {
    const auto& b = r.bounds[i];
    const auto& p = r.bounds[primary];
    if ((b.side == Side::upper && p.side != Side::upper) || (b.side == p.side && b.gamma > p.gamma)) primary = i;
  }
  std::ostringstream out;
  out << "h,e_plus,e_minus,bound_value,pass\n";
  char buf[256];
  for (std::size_t k = 0; k < r.curve.points.size(); ++k) {
    const auto& p = r.curve.points[k];
    bool ok = true;
    for (const auto& c : r.checks) ok = ok && c.pass[k];
    const double bv = r.checks.empty() ? 0.0 : r.checks[primary].bound_value[k];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", p.h, p.e_plus, p.e_minus, bv, ok ? 1 : 0);
    out << buf;
  }
  return out.str();
}

ErrorCurve read_error_curve(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("error curve CSV is empty");
  if (line.rfind("h,e_plus,e_minus", 0) != 0) throw ConfigError("error curve CSV needs header h,e_plus,e_minus");
  ErrorCurve c;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, d;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, d, ','))
      throw ConfigError("error curve CSV row " + std::to_string(row) + " has fewer than 3 columns");
    try {
      c.points.push_back({std::stod(a), std::stod(b), std::stod(d), 0.0});
    } catch (...) {
      throw ConfigError("error curve CSV row " + std::to_string(row) + " is not numeric");
    }
  }
  return c;
}

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& config_text, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  const auto op = cfg.make_operator();
  const GridFunction f = cfg.initial();
  const WeightFunction kappa = cfg.kappa();
  const Box region = cfg.region();
  const Reference ref = build_reference(cfg, *op, f);

  RunResult res;
  res.oracle_uncertainty = ref.uncertainty;
  const ErrorCurve curve = measure_errors(*op, f, cfg.t, cfg.h_list, ref.value, ref.uncertainty, kappa, region);
  const auto bounds = experiment_bounds(cfg);
  const double eps0 = cfg.op == OperatorKind::nisio ? std::min(cfg.eps0, cfg.family().bounds().eps0) : cfg.eps0;
  res.report = assemble_rate_report(curve, bounds, eps0, cfg.slope_tolerance, cfg.noise_multiplier,
                                    cfg.noise_floor);

  std::optional<SpaceTimeFunction> traj;
  if (cfg.op == OperatorKind::clt || cfg.record_trajectory) {
    const double h = cfg.h_list.back();
    traj = chernoff_iterate(*op, f, cfg.t, h, true).trajectory;
    if (cfg.op == OperatorKind::clt) {
      const auto ce = cfg.expectation();
      const auto hp = clt_holder_parameters(ce, growth_certificate(ce), MollifierKernel(cfg.dimension),
                                            cfg.lipschitz_r(), cfg.t);
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      const std::size_t stride = std::max<std::size_t>(1, traj->size() / 64);
      for (std::size_t i = 0; i < traj->size(); i += stride)
        for (std::size_t j = i + stride; j < traj->size(); j += stride) pairs.emplace_back(i, j);
      res.holder = holder_check(*traj, h, hp.alpha, hp.c, kappa, region, pairs);
      if (!res.holder->pass && res.report.verdict == Verdict::pass) res.report.verdict = Verdict::fail;
    }
  }

  write_text(dir / "error_curve.csv", error_curve_csv(res.report));
  write_text(dir / "rate_report.json", rate_json(res.report, res.holder).dump(2) + "\n");
  ordered_json bj = ordered_json::array();
  for (const auto& b : bounds) bj.push_back(bound_json(b));
  write_text(dir / "bound_report.json", bj.dump(2) + "\n");
  res.files = {"error_curve.csv", "rate_report.json", "bound_report.json"};
  if (cfg.record_trajectory && traj) {
    std::ofstream out(dir / "trajectory.bin", std::ios::binary);
    write_binary(out, *traj);
    ordered_json idx;
    idx["h"] = cfg.h_list.back();
    idx["k"] = traj->size() - 1;
    write_text(dir / "trajectory_index.json", idx.dump(2) + "\n");
    res.files.push_back("trajectory.bin");
    res.files.push_back("trajectory_index.json");
  }

  ordered_json m;
  m["name"] = cfg.name;
  m["version"] = kVersion;
  m["seed"] = cfg.seed;
  m["config_sha256"] = sha256_hex(config_text);
  m["b_table_sha256"] = sha256_hex(MollifierKernel(cfg.dimension).table_csv());
  m["verdict"] = verdict_name(res.report.verdict);
  m["files"] = res.files;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
  res.files.push_back("manifest.json");
  return res;
}

}  // namespace chernoff::tools
