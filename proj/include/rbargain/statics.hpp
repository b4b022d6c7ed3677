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

// Comparative statics over limit objects.

#ifndef RBARGAIN_STATICS_HPP_
#define RBARGAIN_STATICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "rbargain/adoption.hpp"
#include "rbargain/error.hpp"
#include "rbargain/limiteq.hpp"

namespace rbargain {

inline constexpr double kWeakTol = 1e-12;
inline constexpr double kStrictTol = 1e-9;

enum class SweepMode { kExogenous, kEndogenous };

struct Axis {
  std::string name;  // pi1 | theta1 | theta2 | c | delta
  std::vector<double> values;
};

struct SweepSpec {
  SweepMode mode = SweepMode::kExogenous;
  double theta1 = 0.1;
  double theta2 = 0.7;
  double pi1 = 0.5;
  double c = 0.4;
  double r_b = 1.0;
  double r_s = 1.0;
  std::vector<Axis> axes;  // one or two; two gives the cartesian product
};

inline const std::vector<std::string>& sweep_quantities() {
  static const std::vector<std::string> q{"welfare_loss", "expected_delay",
                                          "adoption_prob", "buyer_payoff"};
  return q;
}

struct SweepRow {
  std::map<std::string, double> params;
  std::map<std::string, double> values;
  std::string regime;
  bool boundary = false;
  bool multiple = false;
};

struct SweepTable {
  std::vector<Axis> axes;
  std::vector<std::string> quantities;
  std::vector<SweepRow> rows;
};

inline std::vector<double> linspace_step(double lo, double hi, double step) {
  require(step > 0.0, "axis", "step must be positive");
  require(hi >= lo, "axis", "upper end below lower end");
  std::vector<double> v;
  const auto k = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= k; ++i)
    v.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
  return v;
}

namespace detail {

inline void fill_nan(SweepRow& row, const std::vector<std::string>& qs) {
  for (const auto& q : qs) row.values[q] = std::numeric_limits<double>::quiet_NaN();
}

inline void evaluate_point(const SweepSpec& spec, SweepRow& row,
                           const std::vector<std::string>& qs) {
  double t1 = spec.theta1, t2 = spec.theta2, pi1 = spec.pi1, c = spec.c;
  bool has_delta = false;
  double delta = 0.0;
  for (const auto& [k, v] : row.params) {
    if (k == "theta1") t1 = v;
    else if (k == "theta2") t2 = v;
    else if (k == "pi1") pi1 = v;
    else if (k == "c") c = v;
    else if (k == "delta") { has_delta = true; delta = v; }
  }
  if (has_delta) t2 = t1 + delta;
  const bool in_domain = t1 > 0.0 && t2 < 1.0 && t1 < t2 &&
                         (spec.mode == SweepMode::kExogenous
                              ? pi1 >= 0.0 && pi1 <= 1.0
                              : c > 0.0);
  if (!in_domain) {
    row.regime = "out-of-domain";
    fill_nan(row, qs);
    return;
  }
  if (spec.mode == SweepMode::kExogenous) {
    try {
      const auto eq = limit_equilibrium_exogenous({pi1, 1.0 - pi1}, {t1, t2},
                                                  spec.r_b, spec.r_s);
      row.regime = eq.regime_label;
      row.values["welfare_loss"] = eq.welfare_loss;
      row.values["expected_delay"] = eq.expected_delay;
      row.values["adoption_prob"] = pi1;
      row.values["buyer_payoff"] = eq.buyer_payoff;
    } catch (const NonGeneric&) {
      row.regime = "pooling|screening";
      row.boundary = true;
      fill_nan(row, qs);
    }
    return;
  }
  const Regime reg = classify_regime(t1, t2, c, spec.r_b, spec.r_s);
  const auto eqs = limit_equilibria_endogenous(t1, t2, c, spec.r_b, spec.r_s);
  row.regime = to_string(reg.label);
  row.boundary = reg.boundary;
  row.multiple = reg.label == RegimeLabel::kMultipleLimits || eqs.size() > 1;
  // Worst case over the limit set: least adoption, most delay.
  double adopt = 1.0, delay = 0.0, buyer = 1.0, loss = 0.0;
  for (const auto& e : eqs) {
    adopt = std::min(adopt, e.adoption_prob);
    delay = std::max(delay, e.expected_delay);
    buyer = std::min(buyer, e.buyer_value);
    loss = std::max(loss, (1.0 - t2) * e.expected_delay);
  }
  row.values["welfare_loss"] = loss;
  row.values["expected_delay"] = delay;
  row.values["adoption_prob"] = adopt;
  row.values["buyer_payoff"] = buyer;
}

}  // namespace detail

inline SweepTable sweep(const SweepSpec& spec,
                        std::vector<std::string> quantities = {}) {
  require(!spec.axes.empty() && spec.axes.size() <= 2, "axes",
          "one or two axes are required");
  if (quantities.empty()) quantities = sweep_quantities();
  for (const auto& q : quantities)
    require(std::find(sweep_quantities().begin(), sweep_quantities().end(), q) !=
                sweep_quantities().end(),
            "quantity", "unknown quantity '" + q + "'");
  for (const auto& a : spec.axes) {
    static const std::vector<std::string> names{"pi1", "theta1", "theta2", "c", "delta"};
    require(std::find(names.begin(), names.end(), a.name) != names.end(), "axis",
            "unknown axis '" + a.name + "'");
    require(!a.values.empty(), "axis", "empty grid");
    for (std::size_t i = 1; i < a.values.size(); ++i)
      require(a.values[i] > a.values[i - 1], "axis", "grid not strictly increasing");
  }
  SweepTable t;
  t.axes = spec.axes;
  t.quantities = quantities;
  const auto& a0 = spec.axes[0];
  const std::vector<double> inner =
      spec.axes.size() == 2 ? spec.axes[1].values : std::vector<double>{0.0};
  for (double x : a0.values) {
    for (double y : inner) {
      SweepRow row;
      row.params[a0.name] = x;
      if (spec.axes.size() == 2) row.params[spec.axes[1].name] = y;
      detail::evaluate_point(spec, row, quantities);
      std::map<std::string, double> kept;
      for (const auto& q : quantities) kept[q] = row.values[q];
      row.values = kept;
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

struct MonotonicityClaim {
  std::string quantity;
  bool increasing = false;
  bool strict = false;
  // Restrict to rows whose axis value lies in (lo, hi).
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  // Also compare consecutive rows that sit in different regimes.
  bool across_regimes = false;
};

struct MonotonicityReport {
  bool holds = true;
  std::size_t pairs_checked = 0;
  std::vector<std::size_t> violations;  // index of the later row
  std::vector<std::size_t> crossings;   // regime changes skipped or checked
  std::string message;
};

inline MonotonicityReport check_monotonicity(const SweepTable& table,
                                             const MonotonicityClaim& claim) {
  require(table.axes.size() == 1, "table", "monotonicity needs a single-axis table");
  const std::string& axis = table.axes[0].name;
  for (const auto& r : table.rows)
    require(!r.regime.empty(), "table", "rows lack regime labels");
  MonotonicityReport rep;
  const SweepRow* prev = nullptr;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const double x = row.params.at(axis);
    if (!(x > claim.lo && x < claim.hi) || row.boundary ||
        row.regime == "out-of-domain") {
      prev = nullptr;
      continue;
    }
    if (prev) {
      const bool crossing = prev->regime != row.regime;
      if (crossing) rep.crossings.push_back(i);
      if (!crossing || claim.across_regimes) {
        const double a = prev->values.at(claim.quantity);
        const double b = row.values.at(claim.quantity);
        const double step = claim.increasing ? b - a : a - b;
        const bool ok = claim.strict ? step > kStrictTol : step >= -kWeakTol;
        ++rep.pairs_checked;
        if (!ok) {
          rep.holds = false;
          rep.violations.push_back(i);
        }
      }
    }
    prev = &row;
  }
  rep.message = rep.holds ? "claim holds on " + std::to_string(rep.pairs_checked) + " pairs"
                          : "claim fails on " + std::to_string(rep.violations.size()) +
                                " of " + std::to_string(rep.pairs_checked) + " pairs";
  return rep;
}

struct ComparisonReport {
  double adoption = 0.0;
  double adoption_hat = 0.0;
  double delay = 0.0;
  double delay_hat = 0.0;
  bool adoption_greater = false;
  bool delay_less = false;
  bool degenerate = false;
  bool holds = false;
};

// Least adoption and most delay over the limit set.
inline std::pair<double, double> worst_adoption_delay(double theta1, double theta2,
                                                      double c) {
  double adopt = 1.0, delay = 0.0;
  for (const auto& e : limit_equilibria_endogenous(theta1, theta2, c)) {
    adopt = std::min(adopt, e.adoption_prob);
    delay = std::max(delay, e.expected_delay);
  }
  return {adopt, delay};
}

inline std::pair<double, double> best_adoption_delay(double theta1, double theta2,
                                                     double c) {
  double adopt = 0.0, delay = 1.0;
  for (const auto& e : limit_equilibria_endogenous(theta1, theta2, c)) {
    adopt = std::max(adopt, e.adoption_prob);
    delay = std::min(delay, e.expected_delay);
  }
  return {adopt, delay};
}

// Lowering the new cost from theta1 to theta1_hat lowers adoption and raises
// delay.
inline ComparisonReport compare_adoption(double theta1, double theta1_hat,
                                         double theta2, double c) {
  require_binary(theta1, theta2);
  require(theta1_hat > 0.0, "theta1_hat", "cost must lie in (0,1)");
  const double delta = theta2 - theta1;
  require(screening_gap_condition(theta1, theta2).holds, "theta2",
          "theta2 - theta1 > (1 - theta2)/2 fails");
  const double lower = std::max(0.5, (1.0 - theta2) / (1.0 - theta1)) * delta;
  require(c > lower && c < delta, "c",
          "c must lie in (max{1/2,(1-theta2)/(1-theta1)}(theta2-theta1), theta2-theta1)");
  require(theta1_hat <= theta1, "theta1_hat", "theta1_hat < theta1 fails");
  require(rubinstein_price(theta1_hat) < theta2, "theta1_hat",
          "(1 + theta1_hat)/2 < theta2 fails");
  require(theta1_hat > theta2 - 2.0 * c && theta1_hat < theta2 - c, "theta1_hat",
          "theta1_hat in (theta2 - 2c, theta2 - c) fails");
  ComparisonReport r;
  // Every equilibrium at theta1 against every equilibrium at theta1_hat.
  const auto at = worst_adoption_delay(theta1, theta2, c);
  const auto hat = best_adoption_delay(theta1_hat, theta2, c);
  r.adoption = at.first;
  r.delay = at.second;
  r.adoption_hat = hat.first;
  r.delay_hat = hat.second;
  r.degenerate = theta1 == theta1_hat;
  r.adoption_greater = r.adoption > r.adoption_hat + kStrictTol;
  r.delay_less = r.delay < r.delay_hat - kStrictTol;
  r.holds = r.adoption_greater && r.delay_less;
  return r;
}

// Discounted surplus net of the adoption cost.
inline double limit_welfare(const AdoptionEquilibrium& e, double theta1,
                            double theta2, double c) {
  const double a = e.adoption_prob;
  return a * (1.0 - theta1 - c) + (1.0 - a) * (1.0 - theta2) -
         (1.0 - theta2) * e.expected_delay;
}

struct WelfareComparison {
  int part = 0;  // hypothesis set met: 1, 2, or 0 for no adoption
  double welfare_without = 0.0;
  std::vector<double> welfare_with;
  double welfare_with_min = 0.0;
  double welfare_with_max = 0.0;
  bool claim_holds = false;
};

inline WelfareComparison welfare_with_without_adoption(double theta1, double theta2,
                                                       double c) {
  require_binary(theta1, theta2);
  require(c > 0.0, "c", "adoption cost must be positive");
  const double delta = theta2 - theta1;
  WelfareComparison w;
  w.welfare_without = 1.0 - theta2;
  const bool part1 = delta > 1.0 - theta2 && c > delta / 2.0 && c < delta;
  const bool part2 = delta > (1.0 - theta2) / 2.0 && delta < 1.0 - theta2 &&
                     c > (1.0 - theta2) / (1.0 - theta1) * delta && c < delta;
  if (part1) w.part = 1;
  else if (part2) w.part = 2;
  else
    require(c > delta, "c", "neither welfare hypothesis set holds");
  for (const auto& e : limit_equilibria_endogenous(theta1, theta2, c))
    w.welfare_with.push_back(limit_welfare(e, theta1, theta2, c));
  w.welfare_with_min = *std::min_element(w.welfare_with.begin(), w.welfare_with.end());
  w.welfare_with_max = *std::max_element(w.welfare_with.begin(), w.welfare_with.end());
  switch (w.part) {
    case 1:
      w.claim_holds = std::abs(w.welfare_with_min - w.welfare_without) <= kStrictTol &&
                      std::abs(w.welfare_with_max - w.welfare_without) <= kStrictTol;
      break;
    case 2:
      w.claim_holds = w.welfare_without > w.welfare_with_min + kStrictTol;
      break;
    default:
      w.claim_holds = std::abs(w.welfare_with_min - w.welfare_without) <= kStrictTol;
  }
  return w;
}

}  // namespace rbargain

#endif  // RBARGAIN_STATICS_HPP_
