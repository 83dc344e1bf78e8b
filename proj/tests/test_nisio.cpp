#include "chernoff/nisio.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chernoff;

namespace {

GridFunction sample(const Grid& g, double (*f)(double)) {
  return GridFunction::sample(g, [f](std::span<const double> x) { return f(x[0]); });
}

double at(const GridFunction& f, double x) { return f.interpolate(std::span<const double>(&x, 1)); }

}  // namespace

TEST(LinearStep, Identities) {
  Grid g = Grid::line(-12.0, 12.0, 4096);
  auto c = Control::scalar(1.0);
  auto id = sample(g, [](double x) { return x; });
  auto sq = sample(g, [](double x) { return x * x; });
  auto cs = sample(g, [](double x) { return std::cos(x); });
  Box inner = interior_box(g, 5.0);
  auto lid = linear_step(c, id, 0.5);
  auto lsq = linear_step(c, sq, 0.5);
  auto lcs = linear_step(c, cs, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!inner.contains(g.point(i), 1)) continue;
    double x = g.coord(0, i);
    EXPECT_NEAR(lid[i], x, 1e-10);
    EXPECT_NEAR(lsq[i], x * x + 0.5, 1e-9);
    EXPECT_NEAR(lcs[i], std::exp(-0.25) * std::cos(x), 1e-5);
  }
}

TEST(NisioStep, Cases) {
  Grid g = Grid::line(-6.0, 6.0, 1201);
  auto f = sample(g, [](double x) { return std::min(std::abs(x), 1.0); });
  NisioFamily fam(1, {Control::scalar(0.5), Control::scalar(1.0)});
  EXPECT_EQ(nisio_step(fam, f, 0.0).values(), f.values());

  NisioFamily transport(1, {Control::scalar(0.0, 1.0)});
  auto tr = nisio_step(transport, f, 0.25);
  for (std::size_t i = 0; i < 1150; ++i) EXPECT_NEAR(tr[i], f[i + 25], 1e-13);

  Grid wide = Grid::line(-12.0, 12.0, 4097);
  auto abs = sample(wide, [](double x) { return std::abs(x); });
  auto out = nisio_step(fam, abs, 1.0);
  EXPECT_NEAR(at(out, 0.0), std::sqrt(2.0 / M_PI), 1e-5);
  auto small = linear_step(Control::scalar(0.5), abs, 1.0);
  EXPECT_LT(at(small, 0.0), at(out, 0.0));
}

TEST(NisioFamily, DerivedBounds) {
  NisioFamily fam(1, {Control::scalar(0.5, 0.2), Control::scalar(1.0, -0.1)});
  EXPECT_DOUBLE_EQ(fam.sup_trace(), 1.0);
  EXPECT_DOUBLE_EQ(fam.sup_drift(), 0.2);
  const auto& b = fam.bounds();
  EXPECT_DOUBLE_EQ(b.v1, 0.2);
  EXPECT_DOUBLE_EQ(b.v2, 0.5);
  EXPECT_DOUBLE_EQ(b.w2, 0.7);
  EXPECT_DOUBLE_EQ(b.w3, 0.5);
  EXPECT_TRUE(b.has_vtilde);
  EXPECT_DOUBLE_EQ(b.vt[1], 0.04);
  EXPECT_DOUBLE_EQ(b.vt[2], 0.2);
  EXPECT_DOUBLE_EQ(b.vt[3], 0.25);
  EXPECT_TRUE(fam.second_order());
  NisioFamily first(1, {Control::scalar(0.0, 1.0)}, false);
  EXPECT_FALSE(first.second_order());
  EXPECT_FALSE(first.bounds().has_vtilde);
}

TEST(Generator, Cases) {
  Grid g = Grid::line(-3.0, 3.0, 601);
  NisioFamily heat(1, {Control::scalar(1.0)});
  auto c = generator_apply(heat, GridFunction::constant(g, 2.0));
  for (double v : c.value.values()) EXPECT_EQ(v, 0.0);
  auto sq = generator_apply(heat, sample(g, [](double x) { return x * x; }));
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    ASSERT_TRUE(sq.interior[i]);
    EXPECT_NEAR(sq.value[i], 1.0, 1e-10);
  }
  EXPECT_FALSE(sq.interior[0]);
  NisioFamily drift(1, {Control::scalar(0.0, -1.0), Control::scalar(0.0, 1.0)});
  auto lin = generator_apply(drift, sample(g, [](double x) { return x; }));
  EXPECT_NEAR(lin.value[300], 1.0, 1e-12);
}

TEST(Generator, DerivativeSup) {
  Grid g = Grid::line(-3.0, 3.0, 6001);
  auto s = sample(g, [](double x) { return std::sin(x); });
  EXPECT_NEAR(derivative_sup(s, 1), 1.0, 1e-6);
  EXPECT_NEAR(derivative_sup(s, 2), 1.0, 1e-6);
}

TEST(Consistency, Residual) {
  Grid g = Grid::line(-12.0, 12.0, 4096);
  NisioFamily heat(1, {Control::scalar(1.0)});
  Box inner = interior_box(g, 4.0);
  auto rc = consistency_residual(heat, GridFunction::constant(g, 1.0), 0.01, inner);
  EXPECT_TRUE(rc.pass);
  EXPECT_NEAR(rc.residual, 0.0, 1e-12);
  auto s = sample(g, [](double x) { return std::sin(x); });
  double prev = 0.0;
  for (double h : {0.1, 0.01, 0.001}) {
    auto r = consistency_residual(heat, s, h, inner);
    EXPECT_TRUE(r.pass);
    prev = r.residual;
  }
  EXPECT_NEAR(prev, 0.5, 2e-3);
}

TEST(LinearOperator, MatchesSingletonNisio) {
  Grid g = Grid::line(-4.0, 4.0, 401);
  auto f = sample(g, [](double x) { return std::cos(2 * x); });
  LinearOperator lin(1, Control::scalar(0.7, 0.3));
  NisioOperator nis(NisioFamily(1, {Control::scalar(0.7, 0.3)}));
  EXPECT_EQ(lin.apply(f, 0.1).values(), nis.apply(f, 0.1).values());
  auto bound = lin.bind(g, 0.1);
  EXPECT_EQ(bound(f).values(), lin.apply(f, 0.1).values());
}

TEST(NisioStep, Plane) {
  Grid g = Grid::plane({-6, -6}, {6, 6}, {121, 121});
  Control c;
  c.sigma = {{{1.0, 0.0}, {0.5, 0.5}}};
  NisioFamily fam(2, {c});
  auto f = GridFunction::sample(g, [](std::span<const double> x) { return x[0] * x[1]; });
  auto out = nisio_step(fam, f, 0.4);
  // E[(x + X)(y + Y)] = xy + t (sigma sigma^T)_{01}
  std::size_t centre = 60 * 121 + 60;
  EXPECT_NEAR(out[centre], 0.4 * 0.5, 1e-6);
}
