#include "chernoff/properties.hpp"

#include "chernoff/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace chernoff {

Grid property_grid(int d) {
  if (d == 1) return Grid::line(-4.0, 4.0, 129);
  return Grid::plane({-4.0, -4.0}, {4.0, 4.0}, {33, 33});
}

namespace {

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }

  // Sum of a few sines plus a clipped cone; Lipschitz and bounded.
  GridFunction lipschitz_function(const Grid& g) {
    struct Wave {
      double a, w0, w1, phase;
    };
    std::vector<Wave> waves;
    for (int k = 0; k < 3; ++k)
      waves.push_back({uniform(-1, 1), uniform(-3, 3), uniform(-3, 3), uniform(0, 6.283185307179586)});
    const double b = uniform(-1, 1), c0 = uniform(-2, 2), c1 = uniform(-2, 2), shift = uniform(-1, 1);
    return GridFunction::sample(g, [&](std::span<const double> x) {
      const double y = g.dimension() == 2 ? x[1] : 0.0;
      double v = shift;
      for (const auto& w : waves) v += w.a * std::sin(w.w0 * x[0] + w.w1 * y + w.phase);
      return v + b * std::min(std::hypot(x[0] - c0, y - c1), 1.0);
    });
  }

 private:
  std::mt19937_64 gen_;
};

double max_of(const GridFunction& f, const std::optional<Box>& region = std::nullopt) {
  double m = -INFINITY;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!region || region->contains(f.grid().point(i), f.grid().dimension())) m = std::max(m, f[i]);
  return m;
}

// f(x + spacing e_0) with constant continuation.
GridFunction shift_axis0(const GridFunction& f) {
  const Grid& g = f.grid();
  const std::size_t n0 = g.count(0), n1 = g.dimension() == 2 ? g.count(1) : 1;
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j) out[i * n1 + j] = f[std::min(i + 1, n0 - 1) * n1 + j];
  return GridFunction(g, std::move(out));
}

struct Tally {
  PropertyResult r;
  double tol;
  void add(double violation) {
    ++r.instances;
    r.max_violation = std::max(r.max_violation, violation);
    if (!(violation <= tol)) ++r.failures;
  }
};

}  // namespace

std::vector<PropertyResult> run_property_suite(const StepOperator& op, const Grid& grid,
                                               const PropertySuiteOptions& opts) {
  Random rng(opts.seed);
  const double tol = opts.tolerance;
  std::vector<Tally> t = {{{"monotone"}, tol},    {{"convex"}, tol},      {{"zero"}, tol},
                          {{"contraction"}, tol}, {{"lipschitz"}, tol},   {{"translation"}, tol},
                          {{"lambda"}, tol},      {{"kappa_shift"}, tol}, {{"jensen"}, tol}};
  const Box middle = interior_box(grid, 0.25 * (grid.upper(0) - grid.lower(0)));
  const GridFunction zero = GridFunction::zero(grid);

  for (std::size_t n = 0; n < opts.instances; ++n) {
    const double h = rng.uniform(0.0, opts.t_max) + 1e-6;
    const double growth = std::exp(opts.omega * h);
    const BoundStep I = op.bind(grid, h);
    const GridFunction f = rng.lipschitz_function(grid);
    const GridFunction g = rng.lipschitz_function(grid);
    const GridFunction If = I(f), Ig = I(g);
    const double lambda = rng.uniform(0.05, 1.0);

    // f <= max(f, g)
    std::vector<double> up(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) up[i] = std::max(f[i], g[i]);
    t[0].add(max_of(If - I(GridFunction(grid, up))));

    t[1].add(max_of(I(lambda * f + (1.0 - lambda) * g) - (lambda * If + (1.0 - lambda) * Ig)));
    t[2].add(I(zero).sup_norm());

    const double dist = (f - g).sup_norm();
    t[3].add((If - Ig).sup_norm() - growth * dist * (1.0 + 1e-12));

    const double lip = lipschitz_estimate(f);
    t[4].add(lipschitz_estimate(If) - growth * lip * (1.0 + 1e-12));

    const GridFunction a = I(shift_axis0(f)), b = shift_axis0(If);
    const WeightFunction one = WeightFunction::one(grid);
    t[5].add(weighted_norm(a - b, one, middle));

    // Phi(f) - Phi(g) <= lambda (Phi((f - g)/lambda + g) - Phi(g))
    t[6].add(max_of((If - Ig) - lambda * (I((1.0 / lambda) * (f - g) + g) - Ig)));

    const double shift = rng.uniform(-2.0, 2.0);
    t[7].add(max_of(I(f + shift) - (If + growth * std::abs(shift))));

    // Mixture of shifted and scaled members versus the mixture of images.
    const double p = rng.uniform(0.0, 1.0);
    const GridFunction sf = shift_axis0(f);
    t[8].add(max_of(I(p * sf + (1.0 - p) * g) - (p * I(sf) + (1.0 - p) * Ig)));
  }
  std::vector<PropertyResult> out;
  for (auto& x : t) out.push_back(x.r);
  return out;
}

bool all_pass(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.pass(); });
}

}  // namespace chernoff
