// Copyright 2026 The rbargain Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rbargain/statics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace rbargain {
namespace {

constexpr int kGrids = 100;

std::vector<double> random_axis(std::mt19937_64& rng, double lo, double hi, int n) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

SweepTable exo_sweep(const std::string& axis, std::vector<double> values, double t1, double t2,
                     double pi1) {
  SweepSpec spec;
  spec.theta1 = t1;
  spec.theta2 = t2;
  spec.pi1 = pi1;
  spec.axes = {Axis{axis, std::move(values)}};
  return sweep(spec);
}

MonotonicityClaim claim(const std::string& q, bool inc, bool strict, bool across = false,
                        double lo = -1e300, double hi = 1e300) {
  MonotonicityClaim c;
  c.quantity = q;
  c.increasing = inc;
  c.strict = strict;
  c.across_regimes = across;
  c.lo = lo;
  c.hi = hi;
  return c;
}

TEST(Sweep, PiAxisHasOneRowPerPoint) {
  const auto t = exo_sweep("pi1", linspace_step(0.1, 0.9, 0.1), 0.1, 0.7, 0.5);
  EXPECT_EQ(t.rows.size(), 9u);
}

TEST(Sweep, EmptyGridIsAnError) {
  EXPECT_THROW(exo_sweep("pi1", {}, 0.1, 0.7, 0.5), InvalidParameter);
}

TEST(Sweep, UnknownQuantityIsAnError) {
  SweepSpec spec;
  spec.axes = {Axis{"pi1", {0.5}}};
  EXPECT_THROW(sweep(spec, {"profit"}), InvalidParameter);
}

TEST(Sweep, TwoAxesGiveTheProduct) {
  SweepSpec spec;
  spec.mode = SweepMode::kEndogenous;
  spec.axes = {Axis{"delta", {0.2, 0.4, 0.6}}, Axis{"c", {0.1, 0.2}}};
  EXPECT_EQ(sweep(spec).rows.size(), 6u);
}

TEST(Sweep, KnifeEdgeRowsAreFlaggedNotDropped) {
  const auto t = exo_sweep("pi1", {0.2, 1.0 / 3.0, 0.5}, 0.1, 0.7, 0.5);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_TRUE(t.rows[1].boundary);
  EXPECT_TRUE(std::isnan(t.rows[1].values.at("welfare_loss")));
}

TEST(Monotonicity, LossFallsInLowCostShare) {
  const auto t = exo_sweep("pi1", linspace_step(0.4, 0.9, 0.1), 0.1, 0.7, 0.5);
  for (const auto& r : t.rows)
    EXPECT_NEAR(r.values.at("welfare_loss"), (1 - r.params.at("pi1")) * 0.15, 1e-12);
  EXPECT_TRUE(check_monotonicity(t, claim("welfare_loss", false, true)).holds);
}

TEST(Monotonicity, DelayFallsInLowCost) {
  const auto t = exo_sweep("theta1", linspace_step(0.05, 0.25, 0.05), 0.1, 0.7, 0.6);
  EXPECT_TRUE(check_monotonicity(t, claim("expected_delay", false, false, true)).holds);
}

TEST(Monotonicity, ConstantColumnIsOnlyWeak) {
  SweepTable t;
  t.axes = {Axis{"pi1", {0.1, 0.2, 0.3}}};
  t.quantities = {"welfare_loss"};
  for (double x : {0.1, 0.2, 0.3}) {
    SweepRow r;
    r.params["pi1"] = x;
    r.values["welfare_loss"] = 0.5;
    r.regime = "screening";
    t.rows.push_back(r);
  }
  EXPECT_TRUE(check_monotonicity(t, claim("welfare_loss", false, false)).holds);
  EXPECT_FALSE(check_monotonicity(t, claim("welfare_loss", false, true)).holds);
}

TEST(Monotonicity, UnlabelledRowsAreAnError) {
  SweepTable t;
  t.axes = {Axis{"pi1", {0.1}}};
  SweepRow r;
  r.params["pi1"] = 0.1;
  r.values["welfare_loss"] = 0.0;
  t.rows.push_back(r);
  EXPECT_THROW(check_monotonicity(t, claim("welfare_loss", false, false)), InvalidParameter);
}

TEST(RandomGrids, LowCostShare) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int grids = 0;
  while (grids < kGrids) {
    const double t1 = 0.01 + 0.9 * u(rng), t2 = t1 + (0.99 - t1) * u(rng);
    if (!screening_gap_condition(t1, t2).holds) continue;
    const double ps = pi_star(t1, t2);
    if (ps > 0.99) continue;
    ++grids;
    SCOPED_TRACE(::testing::Message() << "seed 101 grid " << grids << " theta=(" << t1 << ","
                                      << t2 << ")");
    const auto above = exo_sweep("pi1", random_axis(rng, ps + 1e-6, 1.0 - 1e-6, 20), t1, t2, 0);
    for (const auto& r : above.rows) {
      EXPECT_GT(r.values.at("welfare_loss"), 0.0);
      EXPECT_GT(r.values.at("expected_delay"), 0.0);
    }
    EXPECT_TRUE(check_monotonicity(above, claim("welfare_loss", false, true)).holds);
    EXPECT_TRUE(check_monotonicity(above, claim("expected_delay", false, true)).holds);
    const auto below = exo_sweep("pi1", random_axis(rng, 0.0, ps - 1e-6, 20), t1, t2, 0);
    for (const auto& r : below.rows) {
      EXPECT_EQ(r.values.at("welfare_loss"), 0.0);
      EXPECT_EQ(r.values.at("expected_delay"), 0.0);
    }
  }
}

TEST(RandomGrids, LowCost) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int g = 0; g < kGrids; ++g) {
    const double t2 = 0.2 + 0.75 * u(rng), pi1 = 0.05 + 0.9 * u(rng);
    SCOPED_TRACE(::testing::Message() << "seed 202 grid " << g << " theta2=" << t2
                                      << " pi1=" << pi1);
    const auto t = exo_sweep("theta1", random_axis(rng, 0.005, t2 - 0.005, 25), 0, t2, pi1);
    for (const char* q : {"expected_delay", "welfare_loss"})
      EXPECT_TRUE(check_monotonicity(t, claim(q, false, false, true)).holds) << q;
  }
}

TEST(RandomGrids, HighCost) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int g = 0; g < kGrids; ++g) {
    const double t1 = 0.02 + 0.78 * u(rng), pi1 = 0.05 + 0.9 * u(rng);
    const double p1 = (1 + t1) / 2;
    SCOPED_TRACE(::testing::Message() << "seed 303 grid " << g << " theta1=" << t1
                                      << " pi1=" << pi1);
    const auto t = exo_sweep("theta2", random_axis(rng, t1 + 0.005, 0.995, 25), t1, 0, pi1);
    EXPECT_TRUE(check_monotonicity(t, claim("expected_delay", true, false, true)).holds);
    EXPECT_TRUE(
        check_monotonicity(t, claim("welfare_loss", true, false, true, t1, p1)).holds);
    EXPECT_TRUE(
        check_monotonicity(t, claim("welfare_loss", false, false, false, p1, 1.0)).holds);
  }
}

TEST(CompareAdoption, WorkedInstance) {
  const auto r = compare_adoption(0.3, 0.1, 0.7, 0.35);
  // pi* at (0.3, 0.7) is (0.85 - 0.7) / (0.65 - 0.3) = 3/7.
  EXPECT_NEAR(r.adoption, 3.0 / 7.0, 1e-9);
  EXPECT_NEAR(r.adoption_hat, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(r.delay, 0.05 / 0.7, 1e-9);
  EXPECT_NEAR(r.delay_hat, 0.25 / 0.9, 1e-9);
  EXPECT_TRUE(r.holds);
}

TEST(CompareAdoption, HypothesisGate) {
  EXPECT_THROW(compare_adoption(0.3, 0.4, 0.7, 0.35), InvalidParameter);
  EXPECT_THROW(compare_adoption(0.3, 0.1, 0.7, 0.2), InvalidParameter);
  EXPECT_THROW(compare_adoption(0.3, 0.1, 0.7, 0.5), InvalidParameter);
}

TEST(CompareAdoption, SameCostIsDegenerate) {
  const auto r = compare_adoption(0.3, 0.3, 0.7, 0.35);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.adoption, r.adoption_hat);
  EXPECT_FALSE(r.holds);
}

TEST(CompareAdoption, SignsOnHypothesisRegion) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int points = 0, tries = 0;
  while (points < 1000 && ++tries < 10000000) {
    const double t1 = u(rng), t2 = t1 + (1 - t1) * u(rng), delta = t2 - t1;
    if (!(delta > (1 - t2) / 2)) continue;
    const double lower = std::max(0.5, (1 - t2) / (1 - t1)) * delta;
    const double c = lower + (delta - lower) * u(rng);
    const double lo = std::max(0.0, t2 - 2 * c), hi = std::min({t1, t2 - c, 2 * t2 - 1});
    if (!(hi > lo + 1e-9) || c <= lower || c >= delta) continue;
    const double th = lo + (hi - lo) * u(rng);
    if (!(th > lo && th < hi) || th <= 0.0) continue;
    ++points;
    const auto r = compare_adoption(t1, th, t2, c);
    EXPECT_TRUE(r.adoption_greater) << t1 << " " << th << " " << t2 << " " << c;
    EXPECT_TRUE(r.delay_less) << t1 << " " << th << " " << t2 << " " << c;
  }
  EXPECT_EQ(points, 1000);
}

TEST(Welfare, PartOneIsClose) {
  const auto w = welfare_with_without_adoption(0.2, 0.7, 0.35);
  EXPECT_EQ(w.part, 1);
  EXPECT_TRUE(w.claim_holds);
  EXPECT_NEAR(w.welfare_without, 0.3, 1e-12);
}

TEST(Welfare, PartTwoComparison) {
  const auto w = welfare_with_without_adoption(0.3, 0.6, 0.24);
  EXPECT_EQ(w.part, 2);
  EXPECT_NEAR(w.welfare_without, 0.4, 1e-12);
  // Inefficient limit: (2/3)(1 - 0.3 - 0.24) + (1/3)(0.4) - 0.4 / 15.
  const double lowest = 2.0 / 3.0 * 0.46 + 0.4 / 3.0 - 0.4 / 15.0;
  EXPECT_NEAR(w.welfare_with_min, lowest, 1e-12);
  // The lowest welfare with investment exceeds 0.4, so strict dominance by
  // the no-investment welfare fails on this instance.
  EXPECT_FALSE(w.claim_holds);
}

TEST(Welfare, NoAdoptionRegimeIsIdentical) {
  const auto w = welfare_with_without_adoption(0.2, 0.6, 0.5);
  EXPECT_EQ(w.part, 0);
  EXPECT_TRUE(w.claim_holds);
}

TEST(Welfare, OutsideHypothesesIsAnError) {
  EXPECT_THROW(welfare_with_without_adoption(0.4, 0.5, 0.05), InvalidParameter);
}

}  // namespace
}  // namespace rbargain
