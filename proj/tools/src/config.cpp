#include "chernoff_tools/config.hpp"

#include "chernoff/error.hpp"
#include "chernoff/lattice_kernel.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace chernoff::tools {

namespace pt = boost::property_tree;
using nlohmann::json;

namespace {

// Accepts plain numbers and powers of two written as 2^-13.
std::optional<double> parse_number(const std::string& raw) {
  static const std::regex pow2(R"(\s*2\^(-?\d+)\s*)");
  std::smatch m;
  if (std::regex_match(raw, m, pow2)) return std::ldexp(1.0, std::stoi(m[1]));
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (raw.find_first_not_of(" \t", used) != std::string::npos) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

class Reader {
 public:
  explicit Reader(pt::ptree tree) : tree_(std::move(tree)) {}

  std::optional<std::string> raw(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(key);
    if (!v) return std::nullopt;
    std::string s = *v;
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  }

  bool has(const std::string& key) const { return raw(key).has_value(); }

  double number(const std::string& key, double fallback, bool required = false) {
    auto s = raw(key);
    if (!s) {
      if (required) fail(key, "missing");
      return fallback;
    }
    auto v = parse_number(*s);
    if (!v || !std::isfinite(*v)) {
      fail(key, "not a number: '" + *s + "'");
      return fallback;
    }
    return *v;
  }

  std::string text(const std::string& key, const std::string& fallback,
                   const std::vector<std::string>& allowed = {}) {
    auto s = raw(key);
    if (!s) return fallback;
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), *s) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(key, "'" + *s + "' is not one of " + list);
      return fallback;
    }
    return *s;
  }

  bool flag(const std::string& key, bool fallback) {
    auto s = raw(key);
    if (!s) return fallback;
    if (*s == "true" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "0" || *s == "no") return false;
    fail(key, "not a boolean: '" + *s + "'");
    return fallback;
  }

  std::optional<json> list(const std::string& key, bool required = false) {
    auto s = raw(key);
    if (!s) {
      if (required) fail(key, "missing");
      return std::nullopt;
    }
    try {
      json j = json::parse(*s);
      if (!j.is_array()) {
        fail(key, "expected a JSON list");
        return std::nullopt;
      }
      return j;
    } catch (const std::exception& e) {
      fail(key, std::string("invalid JSON list: ") + e.what());
      return std::nullopt;
    }
  }

  void fail(const std::string& key, const std::string& why) { errors_.push_back(key + ": " + why); }
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  pt::ptree tree_;
  std::vector<std::string> errors_;
};

double json_number(const json& j, Reader& rd, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    if (auto v = parse_number(j.get<std::string>())) return *v;
  }
  rd.fail(where, "expected a number");
  return 0.0;
}

Vec2 json_vector(const json& j, int d, Reader& rd, const std::string& where) {
  Vec2 v{};
  if (d == 1 && !j.is_array()) {
    v[0] = json_number(j, rd, where);
    return v;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    rd.fail(where, "expected " + std::to_string(d) + " components");
    return v;
  }
  for (int a = 0; a < d; ++a) v[a] = json_number(j[static_cast<std::size_t>(a)], rd, where);
  return v;
}

Mat2 json_matrix(const json& j, int d, Reader& rd, const std::string& where) {
  Mat2 m{};
  if (d == 1 && !j.is_array()) {
    m[0][0] = json_number(j, rd, where);
    return m;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    rd.fail(where, "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
    return m;
  }
  for (int a = 0; a < d; ++a) {
    const json& row = j[static_cast<std::size_t>(a)];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      rd.fail(where, "matrix row has the wrong length");
      return m;
    }
    for (int b = 0; b < d; ++b) m[a][b] = json_number(row[static_cast<std::size_t>(b)], rd, where);
  }
  return m;
}

Mat2 outer(const Mat2& s) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) c[i][j] += s[i][k] * s[j][k];
  return c;
}

std::vector<Scenario> parse_scenarios(const json& list, int d, Reader& rd) {
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "operator.scenarios[" + std::to_string(i) + "]";
    const json& s = list[i];
    if (!s.is_object() || !s.contains("type")) {
      rd.fail(where, "needs an object with a type");
      continue;
    }
    const std::string type = s["type"].is_string() ? s["type"].get<std::string>() : "";
    const double penalty = s.contains("penalty") ? json_number(s["penalty"], rd, where + ".penalty") : 0.0;
    try {
      if (type == "point") {
        out.push_back(Scenario::point(d, json_vector(s.value("mean", json(0.0)), d, rd, where + ".mean"), penalty));
      } else if (type == "gaussian") {
        const Vec2 mean = json_vector(s.value("mean", json(d == 1 ? json(0.0) : json::array({0.0, 0.0}))), d, rd,
                                      where + ".mean");
        Mat2 cov{};
        if (s.contains("cov")) {
          cov = json_matrix(s["cov"], d, rd, where + ".cov");
        } else if (s.contains("sigma")) {
          cov = outer(json_matrix(s["sigma"], d, rd, where + ".sigma"));
        } else {
          rd.fail(where, "gaussian needs sigma or cov");
        }
        out.push_back(Scenario::gaussian(d, mean, cov, penalty));
      } else if (type == "discrete") {
        std::vector<Vec2> atoms;
        std::vector<double> probs;
        if (!s.contains("atoms") || !s.contains("probs") || !s["atoms"].is_array() || !s["probs"].is_array()) {
          rd.fail(where, "discrete needs atoms and probs lists");
          continue;
        }
        for (const auto& a : s["atoms"]) atoms.push_back(json_vector(a, d, rd, where + ".atoms"));
        for (const auto& p : s["probs"]) probs.push_back(json_number(p, rd, where + ".probs"));
        out.push_back(Scenario::discrete(d, atoms, probs, penalty));
      } else {
        rd.fail(where + ".type", "'" + type + "' is not one of point, gaussian, discrete");
      }
    } catch (const DomainError& e) {
      rd.fail(where, e.what());
    }
  }
  return out;
}

std::vector<Control> parse_controls(const json& list, int d, Reader& rd) {
  std::vector<Control> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "operator.controls[" + std::to_string(i) + "]";
    const json& c = list[i];
    if (!c.is_object()) {
      rd.fail(where, "needs an object with sigma and m");
      continue;
    }
    Control ctl;
    ctl.sigma = json_matrix(c.value("sigma", json(0.0)), d, rd, where + ".sigma");
    ctl.m = json_vector(c.value("m", d == 1 ? json(0.0) : json::array({0.0, 0.0})), d, rd, where + ".m");
    out.push_back(ctl);
  }
  return out;
}

}  // namespace

SpatialFunction PayoffSpec::function() const {
  const double c = cap, s = scale;
  auto norm = [](std::span<const double> x) { return x.size() == 2 ? std::hypot(x[0], x[1]) : std::abs(x[0]); };
  if (kind == "min_abs") return [=](std::span<const double> x) { return s * std::min(norm(x), c); };
  if (kind == "abs") return [=](std::span<const double> x) { return s * norm(x); };
  if (kind == "cos") return [=](std::span<const double> x) {
    double v = std::cos(x[0]);
    if (x.size() == 2) v *= std::cos(x[1]);
    return s * v;
  };
  if (kind == "square") return [=](std::span<const double> x) { return s * norm(x) * norm(x); };
  if (kind == "neg_square") return [=](std::span<const double> x) { return -s * norm(x) * norm(x); };
  if (kind == "linear") return [=](std::span<const double> x) { return s * x[0]; };
  throw ConfigError("payoff.kind: unknown payoff '" + kind + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config is not valid INI: ") + e.what());
  }
  Reader rd(tree);
  ExperimentConfig c;

  c.name = rd.text("experiment.name", "experiment");
  const double seed = rd.number("experiment.seed", 0.0);
  if (seed < 0 || seed != std::floor(seed)) rd.fail("experiment.seed", "must be a non-negative integer");
  c.seed = static_cast<std::uint64_t>(std::max(seed, 0.0));
  c.t = rd.number("experiment.t", 1.0);
  if (!(c.t >= 0.0)) rd.fail("experiment.t", "must be non-negative");
  if (auto hl = rd.list("experiment.h_list")) {
    for (const auto& h : *hl) c.h_list.push_back(json_number(h, rd, "experiment.h_list"));
  } else if (auto he = rd.list("experiment.h_exponents")) {
    if (he->size() != 2) {
      rd.fail("experiment.h_exponents", "expected [n_min, n_max]");
    } else {
      const int a = static_cast<int>(json_number((*he)[0], rd, "experiment.h_exponents"));
      const int b = static_cast<int>(json_number((*he)[1], rd, "experiment.h_exponents"));
      for (int n = a; n <= b; ++n) c.h_list.push_back(std::ldexp(1.0, -n));
    }
  } else {
    rd.fail("experiment.h_list", "missing (or give h_exponents)");
  }
  for (std::size_t i = 0; i < c.h_list.size(); ++i) {
    if (!(c.h_list[i] > 0.0)) rd.fail("experiment.h_list", "every h must be positive");
    if (i > 0 && !(c.h_list[i] < c.h_list[i - 1])) rd.fail("experiment.h_list", "must be strictly decreasing");
  }

  c.dimension = static_cast<int>(rd.number("grid.dimension", 1.0));
  if (c.dimension != 1 && c.dimension != 2) {
    rd.fail("grid.dimension", "must be 1 or 2");
    c.dimension = 1;
  }
  auto lo = rd.list("grid.lower", true), hi = rd.list("grid.upper", true), cnt = rd.list("grid.count", true);
  auto axes = [&](const std::optional<json>& j, const std::string& key, auto assign) {
    if (!j) return;
    if (static_cast<int>(j->size()) != c.dimension) {
      rd.fail(key, "needs one entry per axis");
      return;
    }
    for (int a = 0; a < c.dimension; ++a) assign(a, json_number((*j)[static_cast<std::size_t>(a)], rd, key));
  };
  axes(lo, "grid.lower", [&](int a, double v) { c.lower[a] = v; });
  axes(hi, "grid.upper", [&](int a, double v) { c.upper[a] = v; });
  axes(cnt, "grid.count", [&](int a, double v) {
    if (v < 2 || v != std::floor(v)) rd.fail("grid.count", "counts must be integers >= 2");
    c.count[a] = static_cast<std::size_t>(std::max(v, 2.0));
  });
  for (int a = 0; a < c.dimension; ++a)
    if (lo && hi && !(c.lower[a] < c.upper[a])) rd.fail("grid.lower", "must be below grid.upper on every axis");

  c.weight = rd.text("weight.kind", "one", {"one", "inverse_polynomial"});
  c.q = rd.number("weight.q", 1.0);
  if (c.weight == "inverse_polynomial" && !(c.q > 0.0)) rd.fail("weight.q", "must be positive");

  c.payoff.kind = rd.text("payoff.kind", "min_abs", {"min_abs", "abs", "cos", "square", "neg_square", "linear"});
  c.payoff.cap = rd.number("payoff.cap", 1.0);
  c.payoff.scale = rd.number("payoff.scale", 1.0);

  const std::string kind = rd.text("operator.kind", "", {"nisio", "lln", "clt"});
  if (!rd.has("operator.kind")) rd.fail("operator.kind", "missing");
  c.op = kind == "lln" ? OperatorKind::lln : kind == "clt" ? OperatorKind::clt : OperatorKind::nisio;
  if (c.op == OperatorKind::nisio) {
    if (auto l = rd.list("operator.controls", true)) {
      c.controls = parse_controls(*l, c.dimension, rd);
      if (c.controls.empty()) rd.fail("operator.controls", "needs at least one control");
    }
    c.smooth = rd.flag("operator.assume_smooth_coefficients", true);
  } else {
    if (auto l = rd.list("operator.scenarios", true)) {
      c.scenarios = parse_scenarios(*l, c.dimension, rd);
      if (c.scenarios.empty()) rd.fail("operator.scenarios", "needs at least one scenario");
    }
  }
  const std::string rule = rd.text("operator.rule", "interpolant", {"interpolant", "gauss_hermite"});
  c.kernel.rule = rule == "gauss_hermite" ? GaussianRule::gauss_hermite : GaussianRule::interpolant;
  c.kernel.gh_nodes = static_cast<std::size_t>(rd.number("operator.gh_nodes", 32.0));
  c.quad_nodes = c.kernel.gh_nodes;
  if (c.kernel.gh_nodes < 1 || c.kernel.gh_nodes > 512) rd.fail("operator.gh_nodes", "must be in [1, 512]");
  c.kernel.truncation = rd.number("operator.truncation", 8.0);

  if (rd.has("operator.v1") || rd.has("operator.v2") || rd.has("operator.omega")) {
    GeneratorBounds b;
    b.v1 = rd.number("operator.v1", 0.0);
    b.v2 = rd.number("operator.v2", 0.0);
    b.w1 = rd.number("operator.w1", 0.0);
    b.w2 = rd.number("operator.w2", 0.0);
    b.w3 = rd.number("operator.w3", 0.0);
    if (auto vt = rd.list("operator.vtilde")) {
      if (vt->size() != 4) rd.fail("operator.vtilde", "expected 4 values");
      else {
        for (std::size_t i = 0; i < 4; ++i) b.vt[i] = json_number((*vt)[i], rd, "operator.vtilde");
        b.has_vtilde = true;
      }
    }
    b.omega = rd.number("operator.omega", 0.0);
    b.L = rd.number("operator.L", 0.0);
    b.eps0 = rd.number("operator.eps0", 1.0);
    c.bounds_override = b;
  }

  const std::string ref = rd.text(
      "reference.kind", c.op == OperatorKind::lln ? "maximally_distributed" : "fine_oracle",
      {"fine_oracle", "heat_exact", "gheat_convex", "maximally_distributed", "clt_limit"});
  c.reference = ref == "heat_exact"              ? ReferenceKind::heat_exact
                : ref == "gheat_convex"          ? ReferenceKind::gheat_convex
                : ref == "maximally_distributed" ? ReferenceKind::maximally_distributed
                : ref == "clt_limit"             ? ReferenceKind::clt_limit
                                                 : ReferenceKind::fine_oracle;
  c.h_fine = rd.number("reference.h_fine", std::ldexp(1.0, -13));
  const bool needs_oracle = c.reference == ReferenceKind::fine_oracle || c.reference == ReferenceKind::clt_limit;
  if (needs_oracle && !c.h_list.empty() && !(c.h_fine <= c.h_list.back() / 8.0 * (1.0 + 1e-12)))
    rd.fail("reference.h_fine", "must be at most min(h_list) / 8");
  if ((c.reference == ReferenceKind::heat_exact || c.reference == ReferenceKind::gheat_convex) &&
      c.op != OperatorKind::nisio)
    rd.fail("reference.kind", "heat_exact and gheat_convex need a nisio operator");
  if (c.reference == ReferenceKind::heat_exact && c.controls.size() != 1)
    rd.fail("reference.kind", "heat_exact needs exactly one control");
  if (c.reference == ReferenceKind::maximally_distributed && c.op != OperatorKind::lln)
    rd.fail("reference.kind", "maximally_distributed needs an lln operator");
  if (c.reference == ReferenceKind::clt_limit && (c.op != OperatorKind::clt || c.t != 1.0))
    rd.fail("reference.kind", "clt_limit needs a clt operator and t = 1");

  auto base = rd.raw("operator.base_step");
  if (!base || *base == "auto") {
    c.kernel.base_step = needs_oracle ? c.h_fine : 0.0;
  } else {
    c.kernel.base_step = rd.number("operator.base_step", 0.0);
    if (c.kernel.base_step < 0.0) rd.fail("operator.base_step", "must be non-negative or auto");
  }

  c.slope_tolerance = rd.number("rates.slope_tolerance", 0.05);
  c.noise_multiplier = rd.number("rates.noise_multiplier", 10.0);
  c.noise_floor = rd.number("rates.noise_floor", 0.0);
  if (c.noise_floor < 0.0) rd.fail("rates.noise_floor", "must be non-negative");
  if (rd.has("rates.interior_margin")) c.interior_margin = rd.number("rates.interior_margin", 0.0);
  if (rd.has("rates.r")) {
    c.r = rd.number("rates.r", 1.0);
    if (!(*c.r >= 0.0)) rd.fail("rates.r", "must be non-negative");
  }
  c.eps0 = rd.number("rates.eps0", 1.0);
  if (!(c.eps0 > 0.0 && c.eps0 <= 1.0)) rd.fail("rates.eps0", "must lie in (0, 1]");
  c.record_trajectory = rd.flag("experiment.record_trajectory", false);

  if (rd.errors().empty() && c.op == OperatorKind::clt) {
    try {
      (void)CltOperator(c.expectation());
    } catch (const DomainError& e) {
      rd.fail("operator.scenarios", e.what());
    }
  }
  if (rd.errors().empty() && c.op != OperatorKind::nisio) {
    try {
      (void)c.expectation();
    } catch (const DomainError& e) {
      rd.fail("operator.scenarios", e.what());
    }
  }
  if (rd.errors().empty()) {
    try {
      (void)c.grid();
    } catch (const DomainError& e) {
      rd.fail("grid", e.what());
    }
  }

  if (!rd.errors().empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : rd.errors()) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Grid ExperimentConfig::grid() const {
  if (dimension == 1) return Grid::line(lower[0], upper[0], count[0]);
  return Grid::plane(lower, upper, count);
}

WeightFunction ExperimentConfig::kappa() const {
  return weight == "one" ? WeightFunction::one(grid()) : WeightFunction::inverse_polynomial(grid(), q);
}

GridFunction ExperimentConfig::initial() const { return GridFunction::sample(grid(), payoff.function()); }

NisioFamily ExperimentConfig::family() const {
  NisioFamily fam(dimension, controls, smooth);
  if (bounds_override) fam.set_bounds(*bounds_override);
  return fam;
}

ScenarioConvexExpectation ExperimentConfig::expectation() const {
  return ScenarioConvexExpectation(scenarios, QuadratureOptions{quad_nodes}, kernel);
}

std::shared_ptr<StepOperator> ExperimentConfig::make_operator() const {
  switch (op) {
    case OperatorKind::nisio: return std::make_shared<NisioOperator>(family(), kernel);
    case OperatorKind::lln: return std::make_shared<LlnOperator>(expectation());
    case OperatorKind::clt: return std::make_shared<CltOperator>(expectation());
  }
  throw ConfigError("unknown operator kind");
}

double ExperimentConfig::margin() const {
  if (interior_margin) return *interior_margin;
  double smax = 0.0, mmax = 0.0;
  if (op == OperatorKind::nisio) {
    for (const auto& c : controls) {
      const Mat2 a = c.covariance();
      smax = std::max(smax, std::sqrt(std::max(a[0][0], a[1][1])));
      mmax = std::max(mmax, std::hypot(c.m[0], c.m[1]));
    }
  } else {
    for (const auto& s : scenarios) {
      const Mat2 m2 = s.second_moment();
      const Vec2 m1 = s.first_moment();
      const double var = std::max(m2[0][0] - m1[0] * m1[0], m2[1][1] - m1[1] * m1[1]);
      smax = std::max(smax, std::sqrt(std::max(var, 0.0)));
      mmax = std::max(mmax, std::hypot(m1[0], m1[1]));
    }
  }
  const double drift = op == OperatorKind::clt ? 0.0 : mmax * t;
  return 3.0 * (smax * std::sqrt(t) + drift);
}

Box ExperimentConfig::region() const { return interior_box(grid(), margin()); }

double ExperimentConfig::lipschitz_r() const {
  if (r) return *r;
  return std::max(1.0, initial().lipschitz());
}

}  // namespace chernoff::tools
