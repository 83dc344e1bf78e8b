#include "chernoff/convex_expectation.hpp"
#include "chernoff/nisio.hpp"
#include "chernoff/properties.hpp"

#include <gtest/gtest.h>

#include <memory>

using namespace chernoff;

namespace {

const PropertyResult& find(const std::vector<PropertyResult>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return r;
  throw std::runtime_error("no property " + name);
}

PropertySuiteOptions quick() {
  PropertySuiteOptions o;
  o.instances = 100;
  o.seed = 3;
  return o;
}

}  // namespace

TEST(PropertySuite, Operators) {
  std::vector<std::shared_ptr<StepOperator>> ops{
      std::make_shared<NisioOperator>(NisioFamily(1, {Control::scalar(0.5), Control::scalar(1.0, 0.3)})),
      std::make_shared<LinearOperator>(1, Control::scalar(0.8, -0.2)),
      std::make_shared<LlnOperator>(ScenarioConvexExpectation(
          {Scenario::point(1, {-1, 0}, 0.0), Scenario::point(1, {1, 0}, 0.5)})),
      std::make_shared<CltOperator>(ScenarioConvexExpectation(
          {Scenario::gaussian1d(0.0, 0.5), Scenario::gaussian1d(0.0, 1.0, 0.1)}))};
  for (const auto& op : ops) {
    auto rs = run_property_suite(*op, property_grid(1), quick());
    EXPECT_EQ(rs.size(), 9u);
    for (const auto& r : rs) {
      EXPECT_TRUE(r.pass()) << op->name() << " " << r.name << " " << r.max_violation;
      EXPECT_EQ(r.instances, 100u);
    }
  }
}

TEST(PropertySuite, NegatedFailsMonotone) {
  auto inner = std::make_shared<NisioOperator>(NisioFamily(1, {Control::scalar(1.0)}));
  NegatedOperator neg(inner);
  auto rs = run_property_suite(neg, property_grid(1), quick());
  EXPECT_FALSE(find(rs, "monotone").pass());
  EXPECT_FALSE(all_pass(rs));
}

TEST(PropertySuite, Reproducible) {
  NisioOperator op(NisioFamily(1, {Control::scalar(0.5), Control::scalar(1.0)}));
  auto a = run_property_suite(op, property_grid(1), quick());
  auto b = run_property_suite(op, property_grid(1), quick());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].max_violation, b[i].max_violation);
}

TEST(PropertyGrid, Shapes) {
  EXPECT_EQ(property_grid(1).size(), 129u);
  EXPECT_EQ(property_grid(2).size(), 33u * 33u);
}
