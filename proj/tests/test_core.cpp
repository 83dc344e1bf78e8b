#include "chernoff/error.hpp"
#include "chernoff/gauss_hermite.hpp"
#include "chernoff/grid_function.hpp"
#include "chernoff/lattice_kernel.hpp"
#include "chernoff/norms.hpp"
#include "chernoff/parallel.hpp"
#include "chernoff/serialization.hpp"
#include "chernoff/weight.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace chernoff;

namespace {

GridFunction sample1(const Grid& g, double (*f)(double)) {
  return GridFunction::sample(g, [f](std::span<const double> x) { return f(x[0]); });
}

// sup over grid x and |y| <= 1 of kappa(x) / kappa(x - y), scanned on a 10x finer lattice
double scan_kappa(double q, const Grid& g) {
  const int refine = 10;
  const double dy = g.spacing(0) / refine;
  const long ny = static_cast<long>(std::floor(1.0 / dy + 1e-9));
  auto k = [q](double x) { return std::pow(1.0 + x * x, -0.5 * q); };
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    for (long j = -ny; j <= ny; ++j) best = std::max(best, k(x) / k(x - j * dy));
  }
  return best;
}

}  // namespace

TEST(Grid, Coordinates) {
  Grid g = Grid::line(-2.0, 2.0, 129);
  EXPECT_DOUBLE_EQ(g.spacing(0), 4.0 / 128);
  EXPECT_DOUBLE_EQ(g.coord(0, 64), 0.0);
  Grid p = Grid::plane({-1, 0}, {1, 2}, {3, 5});
  EXPECT_EQ(p.size(), 15u);
  auto ij = p.unflatten(7);
  EXPECT_EQ(ij[0], 1u);
  EXPECT_EQ(ij[1], 2u);
  EXPECT_DOUBLE_EQ(p.point(7)[1], 1.0);
  EXPECT_THROW(Grid::line(1.0, 0.0, 5), DomainError);
}

TEST(GridFunction, InterpolationAndArithmetic) {
  Grid g = Grid::line(0.0, 1.0, 11);
  auto f = GridFunction::sample(g, [](std::span<const double> x) { return 2.0 * x[0]; });
  double x = 0.37;
  EXPECT_NEAR(f.interpolate(std::span<const double>(&x, 1)), 0.74, 1e-14);
  x = 5.0;
  EXPECT_DOUBLE_EQ(f.interpolate(std::span<const double>(&x, 1)), 2.0);
  auto h = 2.0 * f - f + 1.0;
  EXPECT_DOUBLE_EQ(h[3], f[3] + 1.0);
}

TEST(Norms, WeightedNorm) {
  Grid g = Grid::line(-2.0, 2.0, 129);
  auto one = WeightFunction::one(g);
  EXPECT_EQ(weighted_norm(GridFunction::zero(g), one), 0.0);
  EXPECT_EQ(weighted_norm(GridFunction::constant(g, 1.0), one), 1.0);
  auto id = sample1(g, [](double x) { return x; });
  auto kappa = WeightFunction::inverse_polynomial(g, 1.0);
  EXPECT_NEAR(weighted_norm(id, kappa), 2.0 / std::sqrt(5.0), 1e-15);
}

TEST(Norms, SignSplit) {
  Grid g = Grid::line(-2.0, 2.0, 129);
  auto one = WeightFunction::one(g);
  auto c = GridFunction::constant(g, -3.0);
  EXPECT_EQ(positive_part_norm(c, one), 0.0);
  EXPECT_EQ(negative_part_norm(c, one), 3.0);
  auto id = sample1(g, [](double x) { return x; });
  EXPECT_EQ(positive_part_norm(id, one), negative_part_norm(id, one));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto kappa = WeightFunction::inverse_polynomial(g, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(g.size()), b(g.size());
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    auto diff = GridFunction(g, a) - GridFunction(g, b);
    double brute = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) brute = std::max(brute, std::abs(diff[i]) * kappa[i]);
    EXPECT_EQ(std::max(positive_part_norm(diff, kappa), negative_part_norm(diff, kappa)), brute);
    EXPECT_EQ(weighted_norm(diff, kappa), brute);
  }
}

TEST(Norms, Region) {
  Grid g = Grid::line(-2.0, 2.0, 129);
  auto id = sample1(g, [](double x) { return x; });
  Box box{{-1.0, 0.0}, {1.0, 0.0}};
  EXPECT_DOUBLE_EQ(weighted_norm(id, WeightFunction::one(g), box), 1.0);
  Box inner = interior_box(g, 0.5);
  EXPECT_DOUBLE_EQ(inner.lower[0], -1.5);
  EXPECT_DOUBLE_EQ(inner.upper[0], 1.5);
}

TEST(Norms, Lipschitz) {
  Grid g = Grid::line(-2.0, 2.0, 129);
  EXPECT_EQ(lipschitz_estimate(GridFunction::constant(g, 4.0)), 0.0);
  EXPECT_NEAR(lipschitz_estimate(sample1(g, [](double x) { return std::abs(x); })), 1.0, 1e-12);
  double l = lipschitz_estimate(sample1(g, [](double x) { return std::sin(x); }));
  EXPECT_LE(l, 1.0);
  EXPECT_GE(l, 1.0 - g.spacing(0));
}

TEST(Weight, KappaConstant) {
  Grid g = Grid::line(-4.0, 4.0, 161);
  EXPECT_EQ(kappa_constant(WeightFunction::one(g)), 1.0);
  double c1 = kappa_constant(WeightFunction::inverse_polynomial(g, 1.0), 10);
  double c2 = kappa_constant(WeightFunction::inverse_polynomial(g, 2.0), 10);
  EXPECT_NEAR(c1, scan_kappa(1.0, g), 1e-12);
  EXPECT_NEAR(c2, scan_kappa(2.0, g), 1e-12);
  EXPECT_GT(c2, c1);
  EXPECT_GT(c1, 1.0);
}

TEST(GaussHermite, Moments) {
  for (std::size_t m : {8u, 32u, 64u}) {
    const auto& rule = gauss_hermite(m);
    ASSERT_EQ(rule.nodes.size(), m);
    double m0 = 0, m2 = 0, m4 = 0, m6 = 0;
    for (std::size_t k = 0; k < m; ++k) {
      double x = rule.nodes[k], w = rule.weights[k];
      m0 += w;
      m2 += w * x * x;
      m4 += w * std::pow(x, 4);
      m6 += w * std::pow(x, 6);
    }
    EXPECT_NEAR(m0, 1.0, 1e-13);
    EXPECT_NEAR(m2, 1.0, 1e-12);
    EXPECT_NEAR(m4, 3.0, 1e-11);
    EXPECT_NEAR(m6, 15.0, 1e-10);
  }
  // E[cos Z] = e^{-1/2}
  const auto& rule = gauss_hermite(32);
  double s = 0;
  for (std::size_t k = 0; k < 32; ++k) s += rule.weights[k] * std::cos(rule.nodes[k]);
  EXPECT_NEAR(s, std::exp(-0.5), 1e-14);
}

TEST(LatticeKernel, GaussianMoments) {
  for (auto rule : {GaussianRule::interpolant, GaussianRule::gauss_hermite}) {
    KernelOptions opts;
    opts.rule = rule;
    for (double var : {0.3, 4.0, 37.5}) {
      auto k = gaussian_kernel(0.25, var, opts);
      EXPECT_NEAR(k.mass(), 1.0, 1e-12);
      EXPECT_NEAR(k.mean(), 0.25, 1e-10);
      EXPECT_NEAR(k.variance(), var, 1e-8 * std::max(1.0, var));
      for (double w : k.weights) EXPECT_GE(w, 0.0);
    }
  }
}

TEST(LatticeKernel, ConvolutionPower) {
  KernelOptions opts;
  auto k = gaussian_kernel(0.0, 2.0, opts);
  auto k4 = convolution_power_of_two(k, 2);
  auto manual = convolve(convolve(k, k), convolve(k, k));
  ASSERT_EQ(k4.weights.size(), manual.weights.size());
  EXPECT_EQ(k4.offset, manual.offset);
  for (std::size_t i = 0; i < k4.weights.size(); ++i) EXPECT_NEAR(k4.weights[i], manual.weights[i], 1e-15);
  EXPECT_NEAR(k4.variance(), 8.0, 1e-9);
}

TEST(LatticeKernel, DiscreteSplit) {
  auto k = discrete_kernel({-1.5, 2.0}, {0.5, 0.5});
  EXPECT_NEAR(k.mass(), 1.0, 1e-15);
  EXPECT_NEAR(k.mean(), 0.25, 1e-15);
  auto p = point_kernel(0.3);
  EXPECT_NEAR(p.mean(), 0.3, 1e-15);
}

TEST(LatticeKernel, ApplyAndStep) {
  Grid g = Grid::line(-1.0, 1.0, 21);
  auto f = GridFunction::sample(g, [](std::span<const double> x) { return x[0] * x[0]; });
  auto shift = point_lattice_kernel(g, {0.1, 0.0});
  LatticeStep step;
  EXPECT_TRUE(step.is_identity());
  step.add(shift, 0.0);
  step.add(point_lattice_kernel(g, {-0.1, 0.0}), 0.05);
  std::vector<std::size_t> arg;
  auto out = step.apply(f, &arg);
  // x = 0.5: max(0.36, 0.16 - 0.05)
  EXPECT_NEAR(out[15], 0.36, 1e-14);
  EXPECT_EQ(arg[15], 0u);
  EXPECT_NEAR(out[5], 0.36 - 0.05, 1e-14);
  EXPECT_EQ(arg[5], 1u);
  // clamp at the boundary
  EXPECT_NEAR(out[20], 1.0, 1e-14);
}

TEST(LatticeKernel, PlaneGaussian) {
  Grid g = Grid::plane({-3, -3}, {3, 3}, {61, 61});
  Mat2 cov{{{0.2, 0.05}, {0.05, 0.1}}};
  auto k = gaussian_lattice_kernel(g, {0.0, 0.0}, cov, KernelOptions{});
  auto f = GridFunction::sample(g, [](std::span<const double> x) { return x[0] * x[1]; });
  std::vector<double> out;
  k.apply(g, f.values(), out);
  // E[(x + X)(y + Y)] = xy + cov01 at the centre
  std::size_t c = 30 * 61 + 30;
  EXPECT_NEAR(out[c], 0.05, 1e-6);
}

TEST(Serialization, BinaryRoundTrip) {
  Grid g = Grid::plane({-1, -2}, {1, 2}, {5, 7});
  auto f = GridFunction::sample(g, [](std::span<const double> x) { return std::sin(x[0]) + x[1]; });
  std::stringstream ss;
  write_binary(ss, f);
  auto back = read_binary(ss);
  EXPECT_EQ(back.grid(), g);
  EXPECT_EQ(back.values(), f.values());

  SpaceTimeFunction u({0.0, 0.5}, {f, 2.0 * f});
  std::stringstream st;
  write_binary(st, u);
  auto ub = read_space_time_binary(st);
  EXPECT_EQ(ub.times(), u.times());
  EXPECT_EQ(ub.at(1).values(), u.at(1).values());
}

TEST(Serialization, Csv) {
  Grid g = Grid::line(0.0, 1.0, 5);
  std::ostringstream out;
  write_csv(out, GridFunction::constant(g, 0.1));
  EXPECT_NE(out.str().find("0.10000000000000001"), std::string::npos);
}

TEST(Parallel, ChunksCoverRange) {
  std::vector<int> hits(10007, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  }, 100);
  for (int h : hits) EXPECT_EQ(h, 1);
}
