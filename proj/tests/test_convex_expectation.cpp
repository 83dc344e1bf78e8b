#include "chernoff/convex_expectation.hpp"
#include "chernoff/error.hpp"
#include "chernoff/nisio.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chernoff;

namespace {

ScenarioConvexExpectation sublinear_pair(double s1 = 0.5, double s2 = 1.0) {
  return ScenarioConvexExpectation({Scenario::gaussian1d(0.0, s1), Scenario::gaussian1d(0.0, s2)});
}

ScenarioConvexExpectation point_pair(double m1, double a1, double m2, double a2) {
  return ScenarioConvexExpectation({Scenario::point(1, {m1, 0.0}, a1), Scenario::point(1, {m2, 0.0}, a2)});
}

double at(const GridFunction& f, double x) { return f.interpolate(std::span<const double>(&x, 1)); }

}  // namespace

TEST(ConvexExpectation, Eval) {
  auto ce = sublinear_pair(0.5, 1.0);
  EXPECT_EQ(cexp_eval(ce, [](std::span<const double>) { return 0.0; }), 0.0);
  EXPECT_NEAR(cexp_eval(ce, [](std::span<const double> x) { return x[0] * x[0]; }), 1.0, 1e-12);
  EXPECT_NEAR(cexp_eval(ce, [](std::span<const double> x) { return -x[0] * x[0]; }), -0.25, 1e-12);

  auto pp = point_pair(1.0, 0.0, -1.0, 0.5);
  EXPECT_DOUBLE_EQ(cexp_eval(pp, [](std::span<const double> x) { return x[0]; }), 1.0);
  EXPECT_DOUBLE_EQ(cexp_eval(pp, [](std::span<const double> x) { return -x[0]; }), 0.5);
}

TEST(ConvexExpectation, Validation) {
  EXPECT_THROW(ScenarioConvexExpectation({}), DomainError);
  EXPECT_THROW(ScenarioConvexExpectation({Scenario::point(1, {0, 0}, -1.0)}), DomainError);
  EXPECT_THROW(ScenarioConvexExpectation({Scenario::discrete(1, {{0, 0}, {1, 0}}, {0.3, 0.3})}),
               DomainError);
  EXPECT_THROW(CltOperator(point_pair(1.0, 0.0, -1.0, 0.0)), DomainError);
}

TEST(ConvexExpectation, Classification) {
  EXPECT_TRUE(sublinear_pair().is_sublinear());
  EXPECT_TRUE(sublinear_pair().is_zero_mean());
  EXPECT_TRUE(sublinear_pair().third_moments_vanish());
  auto pp = point_pair(1.0, 0.0, -1.0, 0.5);
  EXPECT_FALSE(pp.is_sublinear());
  EXPECT_FALSE(pp.is_zero_mean());
  ScenarioConvexExpectation skew({Scenario::discrete(1, {{-1, 0}, {2, 0}}, {2.0 / 3, 1.0 / 3})});
  EXPECT_TRUE(skew.is_zero_mean());
  EXPECT_FALSE(skew.third_moments_vanish());
}

TEST(ConvexExpectation, AbsoluteMoments) {
  auto ce = sublinear_pair(0.5, 2.0);
  auto m = ce.absolute_moments(1);
  EXPECT_NEAR(m[0], 1.0, 1e-12);
  EXPECT_NEAR(m[1], 2.0 * std::sqrt(2.0 / M_PI), 1e-10);
  EXPECT_NEAR(m[2], 4.0, 1e-10);
  EXPECT_NEAR(m[3], 8.0 * 2.0 * std::sqrt(2.0 / M_PI), 1e-9);
  EXPECT_NEAR(m[4], 3.0 * 16.0, 1e-8);
  ScenarioConvexExpectation plane({Scenario::gaussian(2, {0, 0}, {{{1.0, 0.0}, {0.0, 1.0}}})});
  // |xi| is Rayleigh: E|xi| = sqrt(pi/2), E|xi|^2 = 2
  auto p = plane.absolute_moments(0);
  EXPECT_NEAR(p[1], std::sqrt(M_PI / 2.0), 1e-8);
  EXPECT_NEAR(p[2], 2.0, 1e-10);
  EXPECT_NEAR(p[4], 8.0, 1e-8);
}

TEST(LlnStep, Cases) {
  Grid g = Grid::line(-2.0, 2.0, 401);
  auto f = GridFunction::sample(g, [](std::span<const double> x) { return std::abs(x[0]); });
  auto pp = point_pair(1.0, 0.0, -1.0, 0.0);
  EXPECT_EQ(lln_step(pp, f, 0.0).values(), f.values());
  auto out = lln_step(pp, f, 0.1);
  EXPECT_NEAR(at(out, 0.0), 0.1, 1e-14);

  ScenarioConvexExpectation single({Scenario::point(1, {0.5, 0.0})});
  auto tr = lln_step(single, f, 0.2);
  for (std::size_t i = 0; i < 390; ++i) EXPECT_NEAR(tr[i], std::abs(g.coord(0, i) + 0.1), 1e-13);
}

TEST(CltStep, Cases) {
  Grid g = Grid::line(-12.0, 12.0, 2049);
  auto cosf = GridFunction::sample(g, [](std::span<const double> x) { return std::cos(x[0]); });
  ScenarioConvexExpectation normal({Scenario::gaussian1d(0.0, 1.0)});
  EXPECT_EQ(clt_step(normal, cosf, 0.0).values(), cosf.values());
  auto out = clt_step(normal, cosf, 0.5);
  for (std::size_t i = 600; i < 1450; ++i)
    EXPECT_NEAR(out[i], std::exp(-0.25) * cosf[i], 2e-5);

  // convex payoff: the larger volatility wins pointwise
  auto abs = GridFunction::sample(g, [](std::span<const double> x) { return std::abs(x[0]); });
  auto pair = clt_step(sublinear_pair(0.5, 1.0), abs, 0.3);
  auto big = linear_step(Control::scalar(1.0), abs, 0.3);
  for (std::size_t i = 600; i < 1450; ++i) EXPECT_NEAR(pair[i], big[i], 1e-12);
}

TEST(Legendre, Conjugates) {
  auto sym = point_pair(-1.0, 0.0, 1.0, 0.0);
  LegendreConjugate phi(sym);
  for (double y : {-1.0, -0.3, 0.0, 0.9, 1.0}) EXPECT_NEAR(phi(std::span<const double>(&y, 1)), 0.0, 1e-12);
  double out = 1.2;
  EXPECT_TRUE(std::isinf(phi(std::span<const double>(&out, 1))));

  // g(z) = max(-z, z - 0.5): phi(y) = (y + 1)/4 on [-1, 1], found by brute force over z
  auto pen = point_pair(-1.0, 0.0, 1.0, 0.5);
  LegendreConjugate phi2(pen);
  for (double y : {-1.0, -0.5, 0.0, 0.3, 1.0}) {
    double brute = -INFINITY;
    for (int i = -40000; i <= 40000; ++i) {
      double z = i * 1e-3;
      brute = std::max(brute, y * z - std::max(-z, z - 0.5));
    }
    EXPECT_NEAR(phi2(std::span<const double>(&y, 1)), brute, 1e-9);
  }

  auto penal = point_pair(0.0, 0.0, 1.0, 1.0);
  LegendreConjugate phi3(penal);
  for (double y : {0.0, 0.5, 1.0}) EXPECT_NEAR(phi3(std::span<const double>(&y, 1)), y, 1e-12);
}

TEST(MaximallyDistributed, Limits) {
  Grid g = Grid::line(-4.0, 4.0, 801);
  auto f = GridFunction::sample(g, [](std::span<const double> x) { return std::min(std::abs(x[0]), 1.0); });

  ScenarioConvexExpectation single({Scenario::point(1, {0.5, 0.0})});
  auto a = maximally_distributed_limit(single, f);
  for (std::size_t i = 0; i < 700; ++i) EXPECT_NEAR(a[i], f[i + 50], 1e-14);

  auto sym = point_pair(-1.0, 0.0, 1.0, 0.0);
  auto b = maximally_distributed_limit(sym, f);
  for (std::size_t i = 100; i < 700; ++i) {
    double brute = -INFINITY;
    for (std::size_t j = i - 100; j <= i + 100; ++j) brute = std::max(brute, f[j]);
    EXPECT_NEAR(b[i], brute, 1e-14);
  }

  auto pen = point_pair(-1.0, 0.0, 1.0, 0.5);
  auto c = maximally_distributed_limit(pen, f);
  for (std::size_t i = 100; i < 700; ++i) {
    double brute = -INFINITY;
    for (int j = -100; j <= 100; ++j) {
      double y = j * g.spacing(0);
      brute = std::max(brute, f[i + j] - (y + 1.0) / 4.0);
    }
    EXPECT_NEAR(c[i], brute, 1e-12);
  }
}

TEST(GFunction, Values) {
  auto ce = sublinear_pair(0.5, 1.0);
  EXPECT_EQ(g_function(ce, Mat2{}), 0.0);
  EXPECT_NEAR(g_function(ce, {{{2.0, 0.0}, {0.0, 0.0}}}), 1.0, 1e-12);
  EXPECT_NEAR(g_function(ce, {{{-2.0, 0.0}, {0.0, 0.0}}}), -0.25, 1e-12);
  ScenarioConvexExpectation coin({Scenario::discrete(1, {{-1, 0}, {1, 0}}, {0.5, 0.5})});
  EXPECT_NEAR(g_function(coin, {{{1.0, 0.0}, {0.0, 0.0}}}), 0.5, 1e-15);
}

TEST(GrowthCertificate, Cases) {
  auto sub = growth_certificate(sublinear_pair());
  EXPECT_TRUE(sub.found);
  EXPECT_EQ(sub.p, 1.0);
  ScenarioConvexExpectation single({Scenario::gaussian1d(0.0, 1.0)});
  auto lin = growth_certificate(single);
  EXPECT_TRUE(lin.found);
  EXPECT_EQ(lin.p, 1.0);
  EXPECT_NEAR(lin.a, 1.0, 1e-9);

  ScenarioConvexExpectation pen({Scenario::gaussian1d(0.0, 0.5), Scenario::gaussian1d(0.0, 1.0, 0.3)});
  auto c = growth_certificate(pen);
  EXPECT_TRUE(c.found);
  EXPECT_GE(c.p, 1.0);
  // the certificate inequality on its own grids
  for (double lam : c.lambda_grid)
    for (auto cc : c.c_grid) {
      auto X = [&](double l) {
        return pen.eval([&](std::span<const double> x) {
          double a = std::abs(x[0]);
          return l * (cc[0] * a * a + cc[1] * a * a * a);
        });
      };
      EXPECT_LE(X(lam), c.a * std::pow(lam, c.p) * X(1.0) * (1 + 1e-9) + 1e-12);
    }
}
