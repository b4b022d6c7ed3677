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


#include "rbargain/limiteq.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace rbargain {
namespace {

// Brute-force screening cutoff, written out from the buyer's problem:
// offering min{p_i, theta_{i+1}} sells to types 1..i at that price.
std::size_t brute_force_cutoff(const std::vector<double>& pi, const std::vector<double>& th) {
  const std::size_t n = th.size();
  double best = -1.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double mass = 0.0;
    for (std::size_t k = 0; k <= i; ++k) mass += pi[k];
    const double next = i + 1 < n ? th[i + 1] : 1.0;
    const double offer = std::min((1.0 + th[i]) / 2.0, next);
    const double v = mass * (offer - th[i]);
    if (v > best) {
      best = v;
      arg = i + 1;
    }
  }
  return arg;
}

TEST(PiStar, Examples) {
  EXPECT_NEAR(pi_star(0.2, 0.6), 0.5, 1e-12);
  EXPECT_EQ(pi_star(0.4, 0.5), 1.0);
  EXPECT_NEAR(pi_star(0.1, 0.7), 0.15 / 0.45, 1e-12);
}

TEST(ScreeningGap, Examples) {
  EXPECT_TRUE(screening_gap_condition(0.2, 0.6).holds);
  EXPECT_FALSE(screening_gap_condition(0.4, 0.5).holds);
  const auto edge = screening_gap_condition(0.4, 0.6);
  EXPECT_FALSE(edge.holds);
  EXPECT_TRUE(edge.boundary);
}

TEST(ScreeningGap, EquivalentToInteriorCutoff) {
  for (double t1 = 0.02; t1 < 0.95; t1 += 0.031)
    for (double t2 = t1 + 0.011; t2 < 0.99; t2 += 0.029) {
      const auto g = screening_gap_condition(t1, t2);
      if (g.boundary) continue;
      EXPECT_EQ(g.holds, pi_star(t1, t2) < 1.0) << t1 << " " << t2;
    }
}

TEST(SellerCounteroffer, Examples) {
  const std::vector<double> th{0.2, 0.6};
  EXPECT_EQ(seller_counteroffer(0.6, 0.4, th), 1.0);
  EXPECT_NEAR(seller_counteroffer(0.2, 0.4, th), 0.8, 1e-15);
  EXPECT_NEAR(seller_counteroffer(0.2, 0.7, th), 0.9, 1e-15);
}

TEST(SellerCounteroffer, NeverBelowTheOffer) {
  const std::vector<double> th{0.1, 0.35, 0.6, 0.8};
  for (double pb = 0.0; pb <= 1.0; pb += 0.01)
    for (double t : th) EXPECT_GE(seller_counteroffer(t, pb, th), pb);
}

TEST(DelayFactor, Examples) {
  EXPECT_NEAR(delay_factor_high_type(0.1, 0.7), 0.5, 1e-12);
  EXPECT_NEAR(delay_factor_high_type(0.3, 0.6), 4.0 / 7.0, 1e-12);
  // theta2 = p_theta1: both branches of the max agree.
  EXPECT_NEAR(delay_factor_high_type(0.2, 0.6), (0.6 - 0.2) / 0.8, 1e-12);
}

TEST(IStar, Examples) {
  const std::vector<double> th{0.1, 0.4, 0.8};
  const auto obj = screening_objectives({0.5, 0.3, 0.2}, th);
  EXPECT_NEAR(obj[0], 0.15, 1e-12);
  EXPECT_NEAR(obj[1], 0.24, 1e-12);
  EXPECT_NEAR(obj[2], 0.10, 1e-12);
  EXPECT_EQ(i_star({0.5, 0.3, 0.2}, th), 2u);
  for (double p : {0.1, 0.5, 0.9}) EXPECT_EQ(i_star({p, 1.0 - p}, {0.4, 0.5}), 2u);
}

TEST(IStar, NegligibleLowTypeIsNotScreened) {
  EXPECT_NE(i_star({1e-9, 0.5, 0.5 - 1e-9}, {0.1, 0.4, 0.8}), 1u);
}

TEST(IStar, MatchesBruteForce) {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + trial % 3;
    std::vector<double> th(n), pi(n);
    for (auto& x : th) x = 0.01 + 0.98 * u(rng);
    std::sort(th.begin(), th.end());
    double s = 0.0;
    for (auto& x : pi) s += (x = 0.01 + u(rng));
    for (auto& x : pi) x /= s;
    try {
      EXPECT_EQ(i_star(pi, th), brute_force_cutoff(pi, th)) << "trial " << trial;
    } catch (const InvalidParameter&) {
      // Costs closer than the validation tolerance.
    }
  }
}

TEST(IStar, TieIsNonGeneric) {
  // pi(theta1) = pi* = 1/3 at (0.1, 0.7).
  EXPECT_THROW(i_star({1.0 / 3.0, 2.0 / 3.0}, {0.1, 0.7}), NonGeneric);
  try {
    limit_equilibrium_exogenous({1.0 / 3.0, 2.0 / 3.0}, {0.1, 0.7});
  } catch (const NonGeneric& e) {
    EXPECT_EQ(e.candidates().size(), 2u);
  }
}

TEST(LimitExogenous, Screening) {
  const auto eq = limit_equilibrium_exogenous({0.5, 0.5}, {0.1, 0.7});
  EXPECT_EQ(eq.regime_label, "screening");
  EXPECT_NEAR(eq.buyer_offer, 0.55, 1e-12);
  EXPECT_NEAR((1.0 - 0.7) * (1.0 - eq.delay_factor_map[1]), 0.15, 1e-12);
  EXPECT_NEAR(eq.welfare_loss, 0.075, 1e-12);
  EXPECT_EQ(eq.seller_offer_map[1], 1.0);
  EXPECT_NEAR(eq.seller_offer_map[0], 0.55, 1e-12);
}

TEST(LimitExogenous, Pooling) {
  const auto eq = limit_equilibrium_exogenous({0.2, 0.8}, {0.1, 0.7});
  EXPECT_EQ(eq.regime_label, "pooling");
  EXPECT_NEAR(eq.buyer_offer, 0.85, 1e-12);
  EXPECT_EQ(eq.welfare_loss, 0.0);
  for (double d : eq.delay_factor_map) EXPECT_EQ(d, 1.0);
}

TEST(LimitExogenous, ThreeTypes) {
  const auto eq = limit_equilibrium_exogenous({0.5, 0.3, 0.2}, {0.1, 0.4, 0.8});
  EXPECT_EQ(eq.i_star, 2u);
  EXPECT_NEAR(eq.buyer_offer, 0.7, 1e-12);
  EXPECT_EQ(eq.seller_offer_map[2], 1.0);
  EXPECT_NEAR((1.0 - 0.8) * (1.0 - eq.delay_factor_map[2]), 0.1, 1e-12);
}

TEST(LimitExogenous, BinaryMatchesCutoffRule) {
  for (double t1 = 0.05; t1 < 0.9; t1 += 0.05)
    for (double t2 = t1 + 0.04; t2 < 0.98; t2 += 0.05)
      for (double p = 0.05; p < 1.0; p += 0.1) {
        const double ps = pi_star(t1, t2);
        if (std::abs(p - ps) < 1e-9) continue;
        const auto eq = limit_equilibrium_exogenous({p, 1.0 - p}, {t1, t2});
        const bool screen = p > ps;
        EXPECT_EQ(eq.regime_label, screen ? "screening" : "pooling");
        const double offer = screen ? std::min((1 + t1) / 2, t2) : (1 + t2) / 2;
        EXPECT_NEAR(eq.buyer_offer, offer, 1e-12);
        if (screen) {
          const double d = delay_factor_high_type(t1, t2);
          EXPECT_NEAR(eq.welfare_loss, (1 - p) * (1 - t2) * (1 - d), 1e-12);
        }
      }
}

TEST(LimitExogenous, Invariants) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 4;
    std::vector<double> th(n), pi(n);
    for (auto& x : th) x = 0.02 + 0.96 * u(rng);
    std::sort(th.begin(), th.end());
    double s = 0.0;
    for (auto& x : pi) s += (x = 0.02 + u(rng));
    for (auto& x : pi) x /= s;
    LimitEquilibrium eq;
    try {
      eq = limit_equilibrium_exogenous(pi, th);
    } catch (const Error&) {
      continue;
    }
    double loss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      loss += pi[j] * (1 - th[j]) * (1 - eq.delay_factor_map[j]);
      EXPECT_GE(eq.seller_offer_map[j], eq.buyer_offer);
    }
    EXPECT_NEAR(eq.welfare_loss, loss, 1e-12);
    EXPECT_GE(eq.buyer_payoff, 1.0 - (1.0 + th.back()) / 2.0 - 1e-12);
    if (eq.regime_label == "pooling") {
      for (double d : eq.delay_factor_map) EXPECT_EQ(d, 1.0);
    } else {
      const std::size_t i = eq.i_star;
      double mass = 0.0;
      for (std::size_t k = 0; k < i; ++k) mass += pi[k];
      const double next = th[i];
      EXPECT_NEAR(eq.buyer_payoff, mass * (std::min((1 + th[i - 1]) / 2, next) - th[i - 1]),
                  1e-12);
    }
  }
}

TEST(LimitExogenous, WelfareLossEqualsConditionalDelay) {
  for (double t1 : {0.05, 0.1, 0.2})
    for (double t2 : {0.6, 0.7, 0.9}) {
      if (!screening_gap_condition(t1, t2).holds) continue;
      const auto eq = limit_equilibrium_exogenous({0.99, 0.01}, {t1, t2});
      EXPECT_NEAR(eq.welfare_loss / 0.01, (1 - t2) * (1 - delay_factor_high_type(t1, t2)),
                  1e-12);
    }
}

TEST(LimitExogenous, AsymmetricRatesAreExtension) {
  const auto eq = limit_equilibrium_exogenous({0.5, 0.5}, {0.1, 0.7}, 1.0, 2.0);
  EXPECT_TRUE(eq.extension);
}

}  // namespace
}  // namespace rbargain
