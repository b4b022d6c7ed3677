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

// Regimes and limit equilibria when the seller chooses his technology
// before bargaining.

#ifndef RBARGAIN_ADOPTION_HPP_
#define RBARGAIN_ADOPTION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rbargain/error.hpp"
#include "rbargain/limiteq.hpp"
#include "rbargain/params.hpp"

namespace rbargain {

enum class RegimeLabel { kNoAdoption, kEfficient, kUniqueInefficient, kMultipleLimits };

inline const char* to_string(RegimeLabel l) {
  switch (l) {
    case RegimeLabel::kNoAdoption: return "no-adoption";
    case RegimeLabel::kEfficient: return "efficient-adoption";
    case RegimeLabel::kUniqueInefficient: return "unique-inefficient";
    case RegimeLabel::kMultipleLimits: return "multiple-limits";
  }
  return "unknown";
}

inline RegimeLabel regime_label_from_string(const std::string& s) {
  if (s == "no-adoption") return RegimeLabel::kNoAdoption;
  if (s == "efficient-adoption") return RegimeLabel::kEfficient;
  if (s == "unique-inefficient") return RegimeLabel::kUniqueInefficient;
  if (s == "multiple-limits") return RegimeLabel::kMultipleLimits;
  throw InvalidParameter("label", "unknown regime label '" + s + "'");
}

struct RegimeConditions {
  bool gap_holds = false;          // theta2 - theta1 > (1 - theta2) / 2
  bool low_price_below_theta2 = false;  // p_theta1 < theta2
  double c_lower = 0.0;            // lower end of the inefficiency bracket
  double c_upper = 0.0;            // theta2 - theta1
};

struct Regime {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double c = 0.0;
  RegimeLabel label = RegimeLabel::kEfficient;
  bool boundary = false;
  std::vector<RegimeLabel> neighbors;  // labels on either side of a boundary
  RegimeConditions conditions;
  bool extension = false;
};

namespace detail {

inline bool near(double a, double b) { return std::abs(a - b) <= kBoundaryTol; }

inline void add_neighbor(Regime& r, RegimeLabel l) {
  r.boundary = true;
  if (std::find(r.neighbors.begin(), r.neighbors.end(), l) == r.neighbors.end())
    r.neighbors.push_back(l);
}

}  // namespace detail

// Shared by the binary and multi-technology classifiers.
inline Regime classify_core(double theta1, double theta2, double c, double r_b,
                            double r_s) {
  require_binary(theta1, theta2);
  require(c > 0.0, "c", "adoption cost must be positive");
  Regime r;
  r.theta1 = theta1;
  r.theta2 = theta2;
  r.c = c;
  r.extension = r_b != r_s;
  const double delta = theta2 - theta1;
  const double p1 = rubinstein_price(theta1, r_b, r_s);
  const double p2 = rubinstein_price(theta2, r_b, r_s);
  const GapCondition gap = screening_gap_condition(theta1, theta2);
  auto& cond = r.conditions;
  cond.gap_holds = gap.holds;
  cond.low_price_below_theta2 = p1 < theta2 && !detail::near(p1, theta2);
  cond.c_upper = delta;
  cond.c_lower = cond.low_price_below_theta2
                     ? (p1 - theta1) - (p2 - theta2)
                     : (1.0 - theta2) * delta / (1.0 - theta1);

  auto inner_label = [&](bool gap_holds, bool below) {
    if (!gap_holds) return RegimeLabel::kEfficient;
    const double lower =
        below ? (p1 - theta1) - (p2 - theta2) : (1.0 - theta2) * delta / (1.0 - theta1);
    if (c < lower && !detail::near(c, lower)) return RegimeLabel::kEfficient;
    return below ? RegimeLabel::kUniqueInefficient : RegimeLabel::kMultipleLimits;
  };

  if (detail::near(c, delta)) {
    r.label = RegimeLabel::kNoAdoption;
    detail::add_neighbor(r, RegimeLabel::kNoAdoption);
    detail::add_neighbor(r, inner_label(gap.holds, cond.low_price_below_theta2));
    return r;
  }
  if (c > delta) {
    r.label = RegimeLabel::kNoAdoption;
    return r;
  }
  r.label = inner_label(gap.holds, cond.low_price_below_theta2);
  if (gap.boundary) {
    detail::add_neighbor(r, RegimeLabel::kEfficient);
    detail::add_neighbor(r, inner_label(true, cond.low_price_below_theta2));
  }
  if (gap.holds && detail::near(p1, theta2)) {
    detail::add_neighbor(r, inner_label(true, true));
    detail::add_neighbor(r, inner_label(true, false));
  }
  if (gap.holds && detail::near(c, cond.c_lower)) {
    detail::add_neighbor(r, RegimeLabel::kEfficient);
    detail::add_neighbor(r, cond.low_price_below_theta2
                                ? RegimeLabel::kUniqueInefficient
                                : RegimeLabel::kMultipleLimits);
  }
  if (r.boundary && r.neighbors.size() < 2) {
    r.boundary = false;
    r.neighbors.clear();
  }
  return r;
}

inline Regime classify_regime(double theta1, double theta2, double c,
                              double r_b = 1.0, double r_s = 1.0) {
  return classify_core(theta1, theta2, c, r_b, r_s);
}

// Buyer's limit probability on the pooling offer in the inefficient
// equilibrium.
inline double rho_star(double theta1, double theta2, double c) {
  require_binary(theta1, theta2);
  const double delta = theta2 - theta1;
  const double p1 = rubinstein_price(theta1);
  const bool below = p1 < theta2 && !detail::near(p1, theta2);
  const double lower = below ? delta / 2.0 : (1.0 - theta2) * delta / (1.0 - theta1);
  const bool in_bracket = (c > lower || detail::near(c, lower)) &&
                          (c < delta || detail::near(c, delta));
  if (!in_bracket)
    throw InvalidParameter("c", "outside the bracket (" + std::to_string(lower) +
                                    ", " + std::to_string(delta) + ")");
  const double rho = below ? (2.0 * c - delta) / delta
                           : ((1.0 - theta1) * c - (1.0 - theta2) * delta) /
                                 (delta * delta);
  return std::clamp(rho, 0.0, 1.0);
}

struct AdoptionEquilibrium {
  std::string kind;  // inefficient | efficient | no-adoption
  double adoption_prob = 0.0;
  double buyer_mix = 0.0;  // probability on the pooling offer
  double screening_offer = 0.0;
  double pooling_offer = 0.0;
  double expected_delay = 0.0;
  double seller_value = 0.0;  // net of the adoption cost for adopters
  double buyer_value = 0.0;
  bool efficient = true;
  bool boundary = false;
};

namespace detail {

inline std::vector<AdoptionEquilibrium> equilibria_for_label(
    RegimeLabel label, double theta1, double theta2, double c, double r_b,
    double r_s) {
  const double delta = theta2 - theta1;
  const double p1 = rubinstein_price(theta1, r_b, r_s);
  const double p2 = rubinstein_price(theta2, r_b, r_s);
  const double screen = std::min(p1, theta2);
  std::vector<AdoptionEquilibrium> out;
  switch (label) {
    case RegimeLabel::kNoAdoption: {
      AdoptionEquilibrium e;
      e.kind = "no-adoption";
      e.adoption_prob = 0.0;
      e.screening_offer = screen;
      e.pooling_offer = p2;
      e.buyer_mix = 1.0;
      e.seller_value = p2 - theta2;
      e.buyer_value = 1.0 - p2;
      out.push_back(e);
      break;
    }
    case RegimeLabel::kEfficient: {
      AdoptionEquilibrium e;
      e.kind = "efficient";
      e.adoption_prob = 1.0;
      e.screening_offer = screen;
      e.pooling_offer = p2;
      if (screening_gap_condition(theta1, theta2).holds) {
        const double price = std::max(p1, 1.0 - delta);
        e.buyer_mix = 0.0;
        e.seller_value = price - theta1 - c;
        e.buyer_value = 1.0 - price;
      } else {
        e.buyer_mix = 1.0;
        e.seller_value = p2 - theta1 - c;
        e.buyer_value = 1.0 - p2;
      }
      out.push_back(e);
      break;
    }
    case RegimeLabel::kUniqueInefficient:
    case RegimeLabel::kMultipleLimits: {
      const double ps = pi_star(theta1, theta2, r_b, r_s);
      const double rho = rho_star(theta1, theta2, c);
      const double d = delay_factor_high_type(theta1, theta2, r_b, r_s);
      AdoptionEquilibrium e;
      e.kind = "inefficient";
      e.adoption_prob = ps;
      e.buyer_mix = rho;
      e.screening_offer = screen;
      e.pooling_offer = p2;
      e.expected_delay = std::max(
          0.0, label == RegimeLabel::kUniqueInefficient
                   ? (1.0 - ps) * (1.0 - rho) * (1.0 - d)
                   : (3.0 * theta2 - 1.0 - 2.0 * theta1) * (delta - c) /
                         (2.0 * delta * delta));
      e.seller_value = rho * (p2 - theta2) + (1.0 - rho) * (1.0 - theta2) * d;
      e.buyer_value = 1.0 - p2;
      e.efficient = false;
      out.push_back(e);
      if (label == RegimeLabel::kMultipleLimits) {
        AdoptionEquilibrium f;
        f.kind = "efficient";
        f.adoption_prob = 1.0;
        f.buyer_mix = 0.0;
        f.screening_offer = p1;
        f.pooling_offer = p2;
        f.seller_value = p1 - theta1 - c;
        f.buyer_value = 1.0 - p1;
        out.push_back(f);
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<AdoptionEquilibrium> limit_equilibria_endogenous(
    double theta1, double theta2, double c, double r_b = 1.0, double r_s = 1.0) {
  const Regime reg = classify_regime(theta1, theta2, c, r_b, r_s);
  if (!reg.boundary)
    return detail::equilibria_for_label(reg.label, theta1, theta2, c, r_b, r_s);
  std::vector<AdoptionEquilibrium> out;
  for (RegimeLabel l : reg.neighbors) {
    auto part = detail::equilibria_for_label(l, theta1, theta2, c, r_b, r_s);
    for (auto& e : part) {
      e.boundary = true;
      out.push_back(e);
    }
  }
  return out;
}

struct RegimeMulti {
  std::size_t j_o = 0;  // 1-based technology minimising theta + c
  bool screening_pays = false;  // theta_n - theta_1 > (1 - theta_n) / 2
  bool boundary = false;
  Regime core;  // binary classification on (theta_{j_o}, theta_n, c_{j_o})
  double adoption_prob = 1.0;  // limit probability on theta_{j_o}
  bool guaranteed_inefficiency = false;
  bool partial = false;  // only the two-point mix is constructed
  std::string label;
};

inline RegimeMulti classify_regime_multi(const std::vector<double>& costs,
                                         const std::vector<double>& adoption_costs,
                                         double r_b = 1.0, double r_s = 1.0) {
  require_costs(costs);
  const std::size_t n = costs.size();
  require(n >= 2, "costs", "at least two technologies are required");
  require(adoption_costs.size() == n, "adoption_costs",
          "one adoption cost per technology is required");
  for (std::size_t i = 1; i < n; ++i)
    require(adoption_costs[i] < adoption_costs[i - 1], "adoption_costs",
            "adoption costs not decreasing");
  require(adoption_costs.back() == 0.0, "adoption_costs",
          "default technology must cost 0");

  std::size_t jo = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (costs[k] + adoption_costs[k] < costs[jo] + adoption_costs[jo]) jo = k;
  for (std::size_t k = 0; k < n; ++k)
    if (k != jo && detail::near(costs[k] + adoption_costs[k],
                                costs[jo] + adoption_costs[jo]))
      throw InvalidParameter("adoption_costs", "efficient technology is not unique");
  require(jo + 1 < n, "adoption_costs",
          "the default technology is efficient; adoption is never worthwhile");

  RegimeMulti out;
  out.j_o = jo + 1;
  const double tn = costs.back();
  const double lhs = tn - costs.front();
  const double rhs = (1.0 - tn) / 2.0;
  out.boundary = detail::near(lhs, rhs);
  out.screening_pays = lhs > rhs && !out.boundary;
  const double tjo = costs[jo];
  const double cjo = adoption_costs[jo];
  out.core = classify_core(tjo, tn, cjo, r_b, r_s);
  out.boundary = out.boundary || out.core.boundary;
  if (!out.screening_pays) {
    out.label = to_string(RegimeLabel::kEfficient);
    out.adoption_prob = 1.0;
    return out;
  }
  const double pjo = rubinstein_price(tjo, r_b, r_s);
  const double pn = rubinstein_price(tn, r_b, r_s);
  out.adoption_prob = (pn - tn) / (std::min(pjo, tn) - tjo);
  out.guaranteed_inefficiency =
      pjo < tn && cjo > (tn - tjo) / 2.0 && cjo < tn - tjo;
  out.partial = true;
  out.label = to_string(out.core.label);
  return out;
}

}  // namespace rbargain

#endif  // RBARGAIN_ADOPTION_HPP_
