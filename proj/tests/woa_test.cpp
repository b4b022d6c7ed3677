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


#include "rbargain/woa.hpp"

#include <cmath>
#include <vector>

#include "battery.hpp"
#include "gtest/gtest.h"
#include "rbargain/verify.hpp"

namespace rbargain {
namespace {

using testing::HazardOracle;
using testing::woa_battery;

TEST(ConcessionRates, SingleType) {
  const auto r = concession_rates(0.5, 0.8, {0.2});
  EXPECT_NEAR(r.lambda_s, 2.0 / 3.0, 1e-12);
  ASSERT_EQ(r.lambda_b.size(), 1u);
  EXPECT_NEAR(r.lambda_b[0], 1.0, 1e-12);
}

TEST(ConcessionRates, HighTypeDoesNotConcede) {
  const auto r = concession_rates(0.5, 0.8, {0.2, 0.6});
  EXPECT_EQ(r.m, 1u);
  EXPECT_NEAR(r.lambda_b[0], 1.0, 1e-12);
}

TEST(ConcessionRates, DemandOfOneStopsTheSeller) {
  const auto r = concession_rates(0.5, 1.0, {0.2});
  EXPECT_EQ(r.lambda_s, 0.0);
  EXPECT_TRUE(r.seller_never_concedes);
}

TEST(ConcessionRates, OrderingError) {
  EXPECT_THROW(concession_rates(0.6, 0.5, {0.2}), InvalidParameter);
}

GameParams two_point_params() {
  GameParams p;
  p.costs = {0.2, 0.6};
  p.eps = 0.1;
  p.buyer_grid = PriceGrid{{0.5, 1.0}};
  p.mu_b = {0.5, 0.5};
  p.seller_grid = PriceGrid{{0.5, 1.0}};
  p.mu_s = {0.5, 0.5};
  return p;
}

TEST(PosteriorBeliefs, UnmixedOfferRevealsCommitment) {
  const auto b = posterior_beliefs(two_point_params(), 0.0, {1.0, 1.0}, {0.5, 0.5}, 0.5, 1.0);
  EXPECT_EQ(b.eps_b_hat, 1.0);
}

TEST(PosteriorBeliefs, BayesRatio) {
  const auto b = posterior_beliefs(two_point_params(), 0.5, {1.0, 1.0}, {0.5, 0.5}, 0.5, 1.0);
  EXPECT_NEAR(b.eps_b_hat, 0.05 / (0.05 + 0.45), 1e-15);
  EXPECT_NEAR(b.eps_s_hat + b.pi_hat[0] + b.pi_hat[1], 1.0, 1e-15);
}

TEST(PosteriorBeliefs, ZeroNumerator) {
  const auto b = posterior_beliefs(two_point_params(), 0.5, {0.0, 1.0}, {1.0, 0.0}, 0.5, 1.0);
  EXPECT_EQ(b.pi_hat[0], 0.0);
  EXPECT_EQ(b.eps_s_hat, 1.0);
}

TEST(PosteriorBeliefs, OffPathNeedsPolicy) {
  EXPECT_THROW(posterior_beliefs(two_point_params(), 0.0, {1.0, 1.0}, {0.5, 0.5}, 0.3, 1.0),
               OffPath);
}

TEST(SolveWoa, SingleTypeExample) {
  const auto s = solve_woa(0.5, 0.8, BeliefState{0.1, 0.1, {0.9}}, {0.2});
  // Seller slower to exhaust: T_b = ln 10 / 1 and 1 - c_s = 0.1 e^{(2/3) T_b}.
  const double t_b = std::log(10.0);
  EXPECT_NEAR(s.L, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(s.weak, WeakSide::kSeller);
  EXPECT_NEAR(s.c_s, 1.0 - 0.1 * std::exp(2.0 / 3.0 * t_b), 1e-12);
  EXPECT_NEAR(s.c_s, 0.53584, 1e-5);
  EXPECT_EQ(s.c_b, 0.0);
  EXPECT_NEAR(s.T_end, 2.302585, 1e-6);
}

TEST(SolveWoa, TwoTypeExample) {
  const auto s = solve_woa(0.5, 0.8, BeliefState{0.1, 0.1, {0.45, 0.45}}, {0.2, 0.6});
  const double t_s = std::log(1.0 / 0.55) / (2.0 / 3.0);
  EXPECT_EQ(s.m, 1u);
  EXPECT_EQ(s.weak, WeakSide::kBuyer);
  EXPECT_NEAR(s.L, std::log(10.0) / t_s, 1e-12);
  EXPECT_NEAR(s.L, 2.568, 1e-3);
  EXPECT_NEAR(s.c_b, 1.0 - 0.1 * std::exp(t_s), 1e-12);
  // 0.75485 is the same expression with T_end rounded to 0.8967.
  EXPECT_NEAR(s.c_b, 1.0 - 0.1 * std::exp(0.8967), 2e-5);
  EXPECT_NEAR(s.c_b, 0.754836, 1e-6);
  EXPECT_NEAR(s.T_end, 0.8967, 1e-4);
}

TEST(SolveWoa, EqualExhaustionHasNoAtoms) {
  // lambda_s = lambda_b with equal posteriors.
  const auto s = solve_woa(0.5, 0.75, BeliefState{0.2, 0.2, {0.8}}, {0.25});
  EXPECT_NEAR(s.L, 1.0, 1e-12);
  EXPECT_NEAR(s.c_b, 0.0, 1e-12);
  EXPECT_NEAR(s.c_s, 0.0, 1e-12);
}

TEST(SolveWoa, NoConcedingTypeIsAnError) {
  EXPECT_THROW(solve_woa(0.2, 0.8, BeliefState{0.1, 0.1, {0.9}}, {0.3}), InvalidParameter);
}

TEST(SolveWoa, InconsistentBeliefsRejected) {
  EXPECT_THROW(solve_woa(0.5, 0.8, BeliefState{0.1, 0.1, {0.5}}, {0.2}), InvalidParameter);
}

TEST(SolveWoa, ReductionToRateComparison) {
  for (double ps : {0.6, 0.7, 0.8, 0.9, 0.95}) {
    for (double e : {0.01, 0.1, 0.3}) {
      const auto s = solve_woa(0.5, ps, BeliefState{e, e, {1.0 - e}}, {0.2});
      const auto r = concession_rates(0.5, ps, {0.2});
      if (r.lambda_s < r.lambda_b[0]) {
        EXPECT_EQ(s.weak, WeakSide::kSeller) << ps;
      } else if (r.lambda_s > r.lambda_b[0]) {
        EXPECT_EQ(s.weak, WeakSide::kBuyer) << ps;
      }
    }
  }
}

TEST(SolveWoa, SellerNeverConcedesBranch) {
  const auto s = solve_woa(0.5, 1.0, BeliefState{0.1, 0.1, {0.45, 0.45}}, {0.2, 0.6});
  EXPECT_TRUE(s.seller_never_concedes);
  EXPECT_EQ(s.lambda_s, 0.0);
  EXPECT_EQ(s.c_b, 0.0);
}

TEST(WoaPayoffs, SellerWeakBuyerValue) {
  const auto s = solve_woa(0.5, 0.8, BeliefState{0.1, 0.1, {0.9}}, {0.2});
  EXPECT_NEAR(s.payoffs.buyer_value, s.c_s * 0.5 + (1.0 - s.c_s) * 0.2, 1e-12);
}

TEST(WoaPayoffs, BuyerWeakBuyerValue) {
  const auto s = solve_woa(0.5, 0.8, BeliefState{0.1, 0.1, {0.45, 0.45}}, {0.2, 0.6});
  EXPECT_NEAR(s.payoffs.buyer_value, 0.2, 1e-12);
  EXPECT_NEAR(s.payoffs.seller_values[0], s.c_b * 0.6 + (1.0 - s.c_b) * 0.3, 1e-12);
}

TEST(WoaPayoffs, CertainBuyerConcessionPaysTheDemand) {
  const auto s = solve_woa(0.5, 0.8, BeliefState{0.0, 0.1, {0.45, 0.45}}, {0.2, 0.6});
  EXPECT_NEAR(s.c_b, 1.0, 1e-12);
  EXPECT_NEAR(s.payoffs.seller_values[1], 0.8 - 0.6, 1e-12);
}

TEST(WoaPayoffs, CommittedBuyerNeverPays) {
  const auto s = solve_woa(0.5, 0.8, BeliefState{1.0, 0.1, {0.45, 0.45}}, {0.2, 0.6});
  EXPECT_NEAR(s.payoffs.seller_values[1], 0.0, 1e-12);
}

TEST(WoaPayoffs, ValueBounds) {
  for (const auto& p : woa_battery()) {
    const auto s = p.solve();
    EXPECT_GE(s.payoffs.buyer_value, 1.0 - p.p_s - 1e-12) << p.name;
    EXPECT_LE(s.payoffs.buyer_value, 1.0 - p.p_b + 1e-12) << p.name;
    for (std::size_t j = 0; j < s.m; ++j)
      EXPECT_GE(s.payoffs.seller_values[j], p.p_b - p.costs[j] - 1e-12) << p.name;
  }
}

TEST(WoaProperties, AtomExclusivity) {
  for (const auto& p : woa_battery()) {
    const auto s = p.solve();
    EXPECT_EQ(s.c_b * s.c_s, 0.0) << p.name;
    if (s.weak == WeakSide::kNone) {
      EXPECT_EQ(s.c_b, 0.0);
      EXPECT_EQ(s.c_s, 0.0);
    }
  }
}

TEST(WoaProperties, PhaseTimesEndAtTEnd) {
  for (const auto& p : woa_battery()) {
    const auto s = p.solve();
    for (std::size_t j = 1; j < s.phase_times.size(); ++j)
      EXPECT_LE(s.phase_times[j - 1], s.phase_times[j]) << p.name;
    EXPECT_NEAR(s.phase_times.back(), s.T_end, 1e-12) << p.name;
  }
}

TEST(WoaProperties, SimultaneousExhaustion) {
  for (const auto& p : woa_battery()) {
    const auto s = p.solve();
    const HazardOracle o{s};
    EXPECT_NEAR(o.buyer(s.T_end), s.beliefs.eps_b_hat, 1e-10) << p.name;
    if (s.seller_never_concedes) continue;
    double tail = s.beliefs.eps_s_hat;
    for (std::size_t j = s.m; j < p.costs.size(); ++j) tail += s.beliefs.pi_hat[j];
    EXPECT_NEAR(o.seller(s.T_end), tail, 1e-10) << p.name;
  }
}

TEST(WoaProperties, FiniteDifferenceIndifference) {
  const double d = 1e-6;
  for (const auto& p : woa_battery()) {
    const auto s = p.solve();
    const HazardOracle o{s};
    auto bs = [&](double t) { return o.buyer(t); };
    auto bh = [&](double t) { return o.buyer_hazard(t); };
    auto ss = [&](double t) { return o.seller(t); };
    auto sh = [&](double t) { return o.seller_hazard(t); };
    for (int k = 1; k < 50; ++k) {
      const double t = s.T_end * k / 50.0;
      const double gb = HazardOracle::step(ss, sh, s.r_b, 1.0 - p.p_b, 1.0 - p.p_s, t, d);
      EXPECT_LE(std::abs(gb) / d, 1e-5) << p.name << " buyer t=" << t;
      for (std::size_t j = 0; j < s.m; ++j) {
        if (!(t > o.phase_start(j) + d && t + d < s.phase_times[j])) continue;
        const double th = p.costs[j];
        const double gs =
            HazardOracle::step(bs, bh, s.r_s, p.p_s - th, p.p_b - th, t, d);
        EXPECT_LE(std::abs(gs) / d, 1e-5) << p.name << " type " << j << " t=" << t;
      }
    }
  }
}

TEST(WoaProperties, PerturbedHazardBreaksIndifference) {
  auto s = solve_woa(0.5, 0.8, BeliefState{0.1, 0.1, {0.9}}, {0.2});
  s.lambda_b[0] *= 1.1;
  const double d = 1e-6, t = 0.5 * s.T_end, th = 0.2;
  auto bs = [&](double x) {
    return (1.0 - s.c_b) * std::exp(-s.lambda_b[0] * std::min(x, s.T_end));
  };
  auto bh = [&](double x) { return x < s.T_end ? s.lambda_b[0] : 0.0; };
  const double gs = HazardOracle::step(bs, bh, 1.0, 0.8 - th, 0.5 - th, t, d);
  EXPECT_GT(std::abs(gs) / d, 1e-3);
}

TEST(WoaProperties, LibraryIndifferenceReportAgrees) {
  for (const auto& p : woa_battery()) {
    const auto rep = verify_woa_indifference(p.solve());
    EXPECT_TRUE(rep.pass) << p.name;
  }
}

TEST(WoaProperties, ConcedingRatesMatchPrices) {
  for (const auto& p : woa_battery()) {
    const auto s = p.solve();
    const HazardOracle o{s};
    for (std::size_t j = 0; j < s.m; ++j)
      EXPECT_NEAR(s.lambda_b[j], o.lambda_b(j), 1e-12) << p.name;
    EXPECT_NEAR(s.lambda_s, o.lambda_s(), 1e-12) << p.name;
  }
}

TEST(LimitWeakPlayer, SellerConcedes) {
  const auto l = limit_weak_player(0.5, 0.8, BeliefState{0.1, 0.0, {0.5, 0.5}}, {0.1, 0.2}, 1, 1);
  EXPECT_EQ(l.side, LimitSide::kSellerConcedes);
  EXPECT_EQ(l.limit_case, 1);
}

TEST(LimitWeakPlayer, BuyerConcedesWhenHighTypeNeverDoes) {
  const auto l = limit_weak_player(0.5, 0.8, BeliefState{0.0, 0.1, {0.45, 0.45}}, {0.2, 0.6}, 1, 1);
  EXPECT_EQ(l.side, LimitSide::kBuyerConcedes);
  EXPECT_EQ(l.limit_case, 2);
}

TEST(LimitWeakPlayer, IndeterminateWithoutVanishingBeliefs) {
  const auto l = limit_weak_player(0.5, 0.8, BeliefState{0.1, 0.1, {0.45, 0.45}}, {0.2, 0.6}, 1, 1);
  EXPECT_EQ(l.side, LimitSide::kIndeterminate);
}

}  // namespace
}  // namespace rbargain
