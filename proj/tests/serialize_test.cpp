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


#include "rbargain/serialize.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "battery.hpp"
#include "gtest/gtest.h"

namespace rbargain {
namespace {

// Text round trip: dump, parse, decode, encode again.
template <class T>
void expect_round_trip(const T& x) {
  const std::string text = Json(x).dump();
  const T back = Json::parse(text).get<T>();
  EXPECT_EQ(Json(back).dump(), text);
}

TEST(RoundTrip, ParamsAndBenchmark) {
  Config cfg;
  cfg.theta = {0.1, 0.4, 0.7};
  cfg.adoption_costs = {0.3, 0.1, 0.0};
  cfg.grid_mode = GridMode::kUniform;
  cfg.seed = 77;
  expect_round_trip(cfg);
  expect_round_trip(observable_benchmark(0.1, 0.7, 0.2));
  expect_round_trip(BeliefState{0.01, 0.02, {0.3, 0.7}});
}

TEST(RoundTrip, WoaSolutions) {
  for (const auto& p : testing::woa_battery()) {
    const auto s = p.solve();
    expect_round_trip(s);
    expect_round_trip(s.payoffs);
  }
}

TEST(RoundTrip, InfiniteFieldsBecomeNull) {
  auto s = testing::woa_battery()[0].solve();
  s.T_end = kInf;
  const Json j = Json::parse(Json(s).dump());
  EXPECT_TRUE(j.at("T_end").is_null());
  EXPECT_EQ(j.get<WoaSolution>().T_end, kInf);
}

TEST(RoundTrip, LimitAndAdoption) {
  expect_round_trip(limit_equilibrium_exogenous({0.5, 0.5}, {0.1, 0.7}));
  expect_round_trip(limit_equilibrium_exogenous({0.25, 0.35, 0.4}, {0.1, 0.4, 0.7}));
  expect_round_trip(classify_regime(0.1, 0.7, 0.4));
  for (const auto& e : limit_equilibria_endogenous(0.1, 0.7, 0.4)) expect_round_trip(e);
  expect_round_trip(classify_regime_multi({0.1, 0.4, 0.7}, {0.3, 0.1, 0.0}));
}

TEST(RoundTrip, StaticsReports) {
  SweepSpec spec;
  spec.mode = SweepMode::kEndogenous;
  spec.axes = {Axis{"c", {0.1, 0.2, 0.3}}};
  const auto t = sweep(spec);
  expect_round_trip(t);
  MonotonicityClaim claim;
  claim.quantity = "expected_delay";
  expect_round_trip(check_monotonicity(t, claim));
  expect_round_trip(compare_adoption(0.3, 0.1, 0.7, 0.35));
  expect_round_trip(welfare_with_without_adoption(0.2, 0.7, 0.35));
}

TEST(RoundTrip, SimulationAndVerification) {
  const auto s = testing::woa_battery()[1].solve();
  expect_round_trip(estimate_outcomes(woa_profile(s), 1000, 3));
  expect_round_trip(verify_woa_indifference(s));
  GapReport g;
  g.entries = {GapEntry{"buyer", -1, 1e-4, "offer 0.55"}, GapEntry{"seller", 1, -2e-5, "demand 0.9"}};
  g.max_gain = 1e-4;
  g.tolerance = 5e-3;
  g.policy = "highest-conceding";
  g.pass = true;
  expect_round_trip(g);
}

TEST(Canonical, TwelveSignificantDigits) {
  EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(round12(2.0 / 9.0), 0.222222222222);
  EXPECT_EQ(round12(123456.7890123456), 123456.789012);
  EXPECT_TRUE(std::isinf(round12(std::numeric_limits<double>::infinity())));
  const std::string text = dump_artifact(Json{{"x", 1.0 / 3.0}, {"v", {0.1 + 0.2}}}, -1);
  EXPECT_EQ(text, R"({"v":[0.3],"x":0.333333333333})");
}

TEST(Canonical, CsvFormatting) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  SweepSpec spec;
  spec.axes = {Axis{"pi1", {0.2, 0.6}}};
  std::ostringstream os;
  write_csv(os, sweep(spec, {"expected_delay"}));
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "pi1,expected_delay,regime,boundary,multiple");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 2);
}

}  // namespace
}  // namespace rbargain
