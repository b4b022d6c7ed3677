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

// Limit equilibria (eps -> 0, then nu -> 0) with an exogenous cost
// distribution.

#ifndef RBARGAIN_LIMITEQ_HPP_
#define RBARGAIN_LIMITEQ_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rbargain/error.hpp"
#include "rbargain/params.hpp"

namespace rbargain {

inline constexpr double kBoundaryTol = 1e-12;

inline void require_binary(double theta1, double theta2) {
  require(theta1 > 0.0 && theta2 < 1.0, "costs", "each cost must lie in (0,1)");
  require(theta1 != theta2, "costs", "degenerate costs (equal types)");
  require(theta1 < theta2, "costs", "costs not increasing");
}

inline void require_costs(const std::vector<double>& costs) {
  require(!costs.empty(), "costs", "at least one cost type is required");
  for (double t : costs)
    require(t > 0.0 && t < 1.0, "costs", "each cost must lie in (0,1)");
  for (std::size_t i = 1; i < costs.size(); ++i) {
    require(costs[i] != costs[i - 1], "costs", "degenerate costs (equal types)");
    require(costs[i] > costs[i - 1], "costs", "costs not increasing");
  }
}

inline void require_distribution(const std::vector<double>& pi, std::size_t n) {
  require(pi.size() == n, "pi", "one probability per cost type");
  double s = 0.0;
  for (double p : pi) {
    require(p >= 0.0 && p <= 1.0, "pi", "probabilities must lie in [0,1]");
    s += p;
  }
  require(std::abs(s - 1.0) < 1e-9, "pi", "probabilities must sum to 1");
}

// Low-type probability at which screening and pooling pay the buyer equally.
inline double pi_star(double theta1, double theta2, double r_b = 1.0,
                      double r_s = 1.0) {
  require_binary(theta1, theta2);
  const double p1 = rubinstein_price(theta1, r_b, r_s);
  const double p2 = rubinstein_price(theta2, r_b, r_s);
  return std::min(1.0, (p2 - theta2) / (std::min(p1, theta2) - theta1));
}

struct GapCondition {
  bool holds = false;
  bool boundary = false;
};

inline GapCondition screening_gap_condition(double theta1, double theta2) {
  require_binary(theta1, theta2);
  const double lhs = theta2 - theta1;
  const double rhs = (1.0 - theta2) / 2.0;
  GapCondition g;
  g.boundary = std::abs(lhs - rhs) <= kBoundaryTol;
  g.holds = !g.boundary && lhs > rhs;
  return g;
}

// Counteroffer of a type with cost theta to p_b; returning p_b means accept.
inline double seller_counteroffer(double theta, double p_b,
                                  const std::vector<double>& costs) {
  if (p_b <= theta) return 1.0;
  double below = costs.front();
  for (double t : costs)
    if (t < p_b) below = t;
  return std::max(p_b, 1.0 + below - p_b);
}

// Limit E[exp(-r tau_b)] faced by types demanding 1 after the screening
// offer aimed at theta_lo, with theta_hi the next cost up.
inline double delay_factor_high_type(double theta_lo, double theta_hi,
                                     double r_b = 1.0, double r_s = 1.0) {
  require_binary(theta_lo, theta_hi);
  const double p = rubinstein_price(theta_lo, r_b, r_s);
  return (std::max(p, 1.0 - (theta_hi - theta_lo)) - theta_lo) / (1.0 - theta_lo);
}

// Screening payoff pi[theta_1..theta_i] (min{p_i, theta_{i+1}} - theta_i)
// for each i, with theta_{n+1} = 1.
inline std::vector<double> screening_objectives(const std::vector<double>& pi,
                                                const std::vector<double>& costs,
                                                double r_b = 1.0,
                                                double r_s = 1.0) {
  const std::size_t n = costs.size();
  std::vector<double> obj(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass += pi[i];
    const double next = i + 1 < n ? costs[i + 1] : 1.0;
    obj[i] = mass * (std::min(rubinstein_price(costs[i], r_b, r_s), next) - costs[i]);
  }
  return obj;
}

// 1-based index of the optimal screening cutoff.
inline std::size_t i_star(const std::vector<double>& pi,
                          const std::vector<double>& costs, double r_b = 1.0,
                          double r_s = 1.0) {
  require_costs(costs);
  require_distribution(pi, costs.size());
  const auto obj = screening_objectives(pi, costs, r_b, r_s);
  std::size_t best = 0;
  for (std::size_t i = 1; i < obj.size(); ++i)
    if (obj[i] > obj[best]) best = i;
  for (std::size_t i = 0; i < obj.size(); ++i) {
    if (i == best) continue;
    if (std::abs(obj[i] - obj[best]) <= kBoundaryTol * std::max(1.0, std::abs(obj[best])))
      throw NonGeneric("screening cutoff is not unique",
                       {"i*=" + std::to_string(std::min(i, best) + 1),
                        "i*=" + std::to_string(std::max(i, best) + 1)});
  }
  return best + 1;
}

struct LimitEquilibrium {
  std::vector<double> costs;
  std::vector<double> pi;
  double buyer_offer = 0.0;
  std::size_t i_star = 0;                 // 1-based; n means pooling
  std::vector<double> seller_offer_map;   // counteroffer to buyer_offer
  std::vector<double> trade_price_map;
  std::vector<double> delay_factor_map;   // E[exp(-r tau)] per type
  double welfare_loss = 0.0;
  double expected_delay = 0.0;            // 1 - E[exp(-r tau)] ex ante
  double buyer_payoff = 0.0;
  std::vector<double> seller_payoffs;
  std::string regime_label;               // pooling | screening
  bool extension = false;                 // unequal discount rates
};

// Outcome when the buyer screens at cutoff i (1-based); i = n is pooling.
inline LimitEquilibrium limit_outcome_at_cutoff(const std::vector<double>& pi,
                                                const std::vector<double>& costs,
                                                std::size_t i, double r_b = 1.0,
                                                double r_s = 1.0) {
  const std::size_t n = costs.size();
  require(i >= 1 && i <= n, "i", "cutoff out of range");
  LimitEquilibrium eq;
  eq.costs = costs;
  eq.pi = pi;
  eq.i_star = i;
  eq.extension = r_b != r_s;
  const double th = costs[i - 1];
  const double next = i < n ? costs[i] : 1.0;
  const double p_th = rubinstein_price(th, r_b, r_s);
  eq.buyer_offer = std::min(p_th, next);
  eq.regime_label = i == n ? "pooling" : "screening";
  const double low_price = seller_counteroffer(th, eq.buyer_offer, costs);
  const double d = i < n ? (low_price - th) / (1.0 - th) : 1.0;
  eq.seller_offer_map.resize(n);
  eq.trade_price_map.resize(n);
  eq.delay_factor_map.resize(n);
  eq.seller_payoffs.resize(n);
  double low_mass = 0.0;
  double disc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j < i) {
      eq.seller_offer_map[j] = seller_counteroffer(costs[j], eq.buyer_offer, costs);
      eq.trade_price_map[j] = low_price;
      eq.delay_factor_map[j] = 1.0;
      eq.seller_payoffs[j] = low_price - costs[j];
      low_mass += pi[j];
    } else {
      eq.seller_offer_map[j] = 1.0;
      eq.trade_price_map[j] = 1.0;
      eq.delay_factor_map[j] = d;
      eq.seller_payoffs[j] = (1.0 - costs[j]) * d;
      eq.welfare_loss += pi[j] * (1.0 - costs[j]) * (1.0 - d);
    }
    disc += pi[j] * eq.delay_factor_map[j];
  }
  eq.expected_delay = 1.0 - disc;
  eq.buyer_payoff = low_mass * (1.0 - low_price);
  return eq;
}

inline LimitEquilibrium limit_equilibrium_exogenous(const std::vector<double>& pi,
                                                    const std::vector<double>& costs,
                                                    double r_b = 1.0,
                                                    double r_s = 1.0) {
  require_costs(costs);
  require_distribution(pi, costs.size());
  return limit_outcome_at_cutoff(pi, costs, i_star(pi, costs, r_b, r_s), r_b, r_s);
}

}  // namespace rbargain

#endif  // RBARGAIN_LIMITEQ_HPP_
