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

// JSON and CSV forms of every artifact. Infinite and undefined numbers are
// written as null; artifacts are rounded to 12 significant digits.

#ifndef RBARGAIN_SERIALIZE_HPP_
#define RBARGAIN_SERIALIZE_HPP_

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbargain/adoption.hpp"
#include "rbargain/limiteq.hpp"
#include "rbargain/params.hpp"
#include "rbargain/sim.hpp"
#include "rbargain/statics.hpp"
#include "rbargain/verify.hpp"
#include "rbargain/woa.hpp"

namespace rbargain {

using Json = nlohmann::json;

inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

// Rounds every number in place.
inline void canonicalize(Json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) canonicalize(v);
  }
}

inline std::string dump_artifact(Json j, int indent = 2) {
  canonicalize(j);
  return j.dump(indent);
}

namespace detail {

// Reads a number; null stands for `missing`.
inline double num(const Json& j, const char* key,
                  double missing = std::numeric_limits<double>::infinity()) {
  const Json& v = j.at(key);
  return v.is_null() ? missing : v.get<double>();
}

inline std::vector<double> nums(const Json& j, const char* key,
                                double missing = std::numeric_limits<double>::infinity()) {
  std::vector<double> out;
  for (const auto& v : j.at(key)) out.push_back(v.is_null() ? missing : v.get<double>());
  return out;
}

}  // namespace detail

// Config ---------------------------------------------------------------------

inline void to_json(Json& j, const Config& c) {
  j = Json{{"theta", c.theta},
           {"adoption_costs", c.adoption_costs},
           {"r_b", c.r_b},
           {"r_s", c.r_s},
           {"eps", c.eps},
           {"nu", c.nu},
           {"grid_mode", c.grid_mode == GridMode::kUniform ? "uniform" : "geometric"},
           {"mu_mode", c.mu_mode == MuMode::kSpacing ? "spacing" : "uniform"},
           {"seed", c.seed}};
}

inline void from_json(const Json& j, Config& c) {
  c.theta = j.at("theta").get<std::vector<double>>();
  c.adoption_costs = j.at("adoption_costs").get<std::vector<double>>();
  c.r_b = j.at("r_b").get<double>();
  c.r_s = j.at("r_s").get<double>();
  c.eps = j.at("eps").get<double>();
  c.nu = j.at("nu").get<double>();
  c.grid_mode = j.at("grid_mode") == "uniform" ? GridMode::kUniform : GridMode::kGeometric;
  c.mu_mode = j.at("mu_mode") == "spacing" ? MuMode::kSpacing : MuMode::kUniform;
  c.seed = j.at("seed").get<std::uint64_t>();
}

inline void to_json(Json& j, const BenchmarkOutcome& b) {
  j = Json{{"adopt", b.adopt},
           {"price", b.price},
           {"buyer_payoff", b.buyer_payoff},
           {"seller_payoff", b.seller_payoff},
           {"efficient", b.efficient}};
}

inline void from_json(const Json& j, BenchmarkOutcome& b) {
  b.adopt = j.at("adopt");
  b.price = j.at("price");
  b.buyer_payoff = j.at("buyer_payoff");
  b.seller_payoff = j.at("seller_payoff");
  b.efficient = j.at("efficient");
}

// War of attrition -------------------------------------------------------------

inline void to_json(Json& j, const BeliefState& b) {
  j = Json{{"eps_b_hat", b.eps_b_hat}, {"eps_s_hat", b.eps_s_hat}, {"pi_hat", b.pi_hat}};
}

inline void from_json(const Json& j, BeliefState& b) {
  b.eps_b_hat = j.at("eps_b_hat");
  b.eps_s_hat = j.at("eps_s_hat");
  b.pi_hat = j.at("pi_hat").get<std::vector<double>>();
}

inline void to_json(Json& j, const PayoffProfile& p) {
  j = Json{{"buyer_value", p.buyer_value},
           {"seller_values", p.seller_values},
           {"discount_factors", p.discount_factors},
           {"buyer_concession_discount", p.buyer_concession_discount},
           {"expected_discount", p.expected_discount}};
}

inline void from_json(const Json& j, PayoffProfile& p) {
  p.buyer_value = j.at("buyer_value");
  p.seller_values = j.at("seller_values").get<std::vector<double>>();
  p.discount_factors = j.at("discount_factors").get<std::vector<double>>();
  p.buyer_concession_discount = j.at("buyer_concession_discount");
  p.expected_discount = j.at("expected_discount");
}

inline void to_json(Json& j, const WoaSolution& s) {
  j = Json{{"p_b", s.p_b},
           {"p_s", s.p_s},
           {"beliefs", s.beliefs},
           {"costs", s.costs},
           {"r_b", s.r_b},
           {"r_s", s.r_s},
           {"lambda_s", s.lambda_s},
           {"lambda_b", s.lambda_b},
           {"L", s.L},
           {"weak", to_string(s.weak)},
           {"j_star", s.j_star},
           {"c_b", s.c_b},
           {"c_s", s.c_s},
           {"phase_times", s.phase_times},
           {"T_end", s.T_end},
           {"m", s.m},
           {"seller_never_concedes", s.seller_never_concedes},
           {"payoffs", s.payoffs}};
}

inline void from_json(const Json& j, WoaSolution& s) {
  s.p_b = j.at("p_b");
  s.p_s = j.at("p_s");
  s.beliefs = j.at("beliefs").get<BeliefState>();
  s.costs = j.at("costs").get<std::vector<double>>();
  s.r_b = j.at("r_b");
  s.r_s = j.at("r_s");
  s.lambda_s = j.at("lambda_s");
  s.lambda_b = j.at("lambda_b").get<std::vector<double>>();
  s.L = detail::num(j, "L");
  const std::string w = j.at("weak");
  s.weak = w == "buyer" ? WeakSide::kBuyer : w == "seller" ? WeakSide::kSeller : WeakSide::kNone;
  s.j_star = j.at("j_star");
  s.c_b = j.at("c_b");
  s.c_s = j.at("c_s");
  s.phase_times = detail::nums(j, "phase_times");
  s.T_end = detail::num(j, "T_end");
  s.m = j.at("m");
  s.seller_never_concedes = j.at("seller_never_concedes");
  s.payoffs = j.at("payoffs").get<PayoffProfile>();
}

// Limit equilibria -------------------------------------------------------------

inline void to_json(Json& j, const LimitEquilibrium& e) {
  j = Json{{"costs", e.costs},
           {"pi", e.pi},
           {"buyer_offer", e.buyer_offer},
           {"i_star", e.i_star},
           {"seller_offer_map", e.seller_offer_map},
           {"trade_price_map", e.trade_price_map},
           {"delay_factor_map", e.delay_factor_map},
           {"welfare_loss", e.welfare_loss},
           {"expected_delay", e.expected_delay},
           {"buyer_payoff", e.buyer_payoff},
           {"seller_payoffs", e.seller_payoffs},
           {"regime_label", e.regime_label},
           {"extension", e.extension}};
}

inline void from_json(const Json& j, LimitEquilibrium& e) {
  e.costs = j.at("costs").get<std::vector<double>>();
  e.pi = j.at("pi").get<std::vector<double>>();
  e.buyer_offer = j.at("buyer_offer");
  e.i_star = j.at("i_star");
  e.seller_offer_map = j.at("seller_offer_map").get<std::vector<double>>();
  e.trade_price_map = j.at("trade_price_map").get<std::vector<double>>();
  e.delay_factor_map = j.at("delay_factor_map").get<std::vector<double>>();
  e.welfare_loss = j.at("welfare_loss");
  e.expected_delay = j.at("expected_delay");
  e.buyer_payoff = j.at("buyer_payoff");
  e.seller_payoffs = j.at("seller_payoffs").get<std::vector<double>>();
  e.regime_label = j.at("regime_label");
  e.extension = j.at("extension");
}

inline void to_json(Json& j, const RegimeConditions& c) {
  j = Json{{"gap_holds", c.gap_holds},
           {"low_price_below_theta2", c.low_price_below_theta2},
           {"c_lower", c.c_lower},
           {"c_upper", c.c_upper}};
}

inline void from_json(const Json& j, RegimeConditions& c) {
  c.gap_holds = j.at("gap_holds");
  c.low_price_below_theta2 = j.at("low_price_below_theta2");
  c.c_lower = j.at("c_lower");
  c.c_upper = j.at("c_upper");
}

inline void to_json(Json& j, const Regime& r) {
  std::vector<std::string> nb;
  for (auto l : r.neighbors) nb.push_back(to_string(l));
  j = Json{{"theta1", r.theta1},
           {"theta2", r.theta2},
           {"c", r.c},
           {"label", to_string(r.label)},
           {"boundary", r.boundary},
           {"neighbors", nb},
           {"conditions", r.conditions},
           {"extension", r.extension}};
}

inline void from_json(const Json& j, Regime& r) {
  r.theta1 = j.at("theta1");
  r.theta2 = j.at("theta2");
  r.c = j.at("c");
  r.label = regime_label_from_string(j.at("label"));
  r.boundary = j.at("boundary");
  r.neighbors.clear();
  for (const auto& s : j.at("neighbors")) r.neighbors.push_back(regime_label_from_string(s));
  r.conditions = j.at("conditions").get<RegimeConditions>();
  r.extension = j.at("extension");
}

inline void to_json(Json& j, const AdoptionEquilibrium& e) {
  j = Json{{"kind", e.kind},
           {"adoption_prob", e.adoption_prob},
           {"buyer_mix", e.buyer_mix},
           {"screening_offer", e.screening_offer},
           {"pooling_offer", e.pooling_offer},
           {"expected_delay", e.expected_delay},
           {"seller_value", e.seller_value},
           {"buyer_value", e.buyer_value},
           {"efficient", e.efficient},
           {"boundary", e.boundary}};
}

inline void from_json(const Json& j, AdoptionEquilibrium& e) {
  e.kind = j.at("kind");
  e.adoption_prob = j.at("adoption_prob");
  e.buyer_mix = j.at("buyer_mix");
  e.screening_offer = j.at("screening_offer");
  e.pooling_offer = j.at("pooling_offer");
  e.expected_delay = j.at("expected_delay");
  e.seller_value = j.at("seller_value");
  e.buyer_value = j.at("buyer_value");
  e.efficient = j.at("efficient");
  e.boundary = j.at("boundary");
}

inline void to_json(Json& j, const RegimeMulti& r) {
  j = Json{{"j_o", r.j_o},
           {"screening_pays", r.screening_pays},
           {"boundary", r.boundary},
           {"core", r.core},
           {"adoption_prob", r.adoption_prob},
           {"guaranteed_inefficiency", r.guaranteed_inefficiency},
           {"partial", r.partial},
           {"label", r.label}};
}

inline void from_json(const Json& j, RegimeMulti& r) {
  r.j_o = j.at("j_o");
  r.screening_pays = j.at("screening_pays");
  r.boundary = j.at("boundary");
  r.core = j.at("core").get<Regime>();
  r.adoption_prob = j.at("adoption_prob");
  r.guaranteed_inefficiency = j.at("guaranteed_inefficiency");
  r.partial = j.at("partial");
  r.label = j.at("label");
}

// Statics ----------------------------------------------------------------------

inline void to_json(Json& j, const Axis& a) { j = Json{{"name", a.name}, {"values", a.values}}; }

inline void from_json(const Json& j, Axis& a) {
  a.name = j.at("name");
  a.values = j.at("values").get<std::vector<double>>();
}

inline void to_json(Json& j, const SweepRow& r) {
  Json values = Json::object();
  for (const auto& [k, v] : r.values) values[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  j = Json{{"params", r.params},
           {"values", values},
           {"regime", r.regime},
           {"boundary", r.boundary},
           {"multiple", r.multiple}};
}

inline void from_json(const Json& j, SweepRow& r) {
  r.params = j.at("params").get<std::map<std::string, double>>();
  r.values.clear();
  for (const auto& [k, v] : j.at("values").items())
    r.values[k] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  r.regime = j.at("regime");
  r.boundary = j.at("boundary");
  r.multiple = j.at("multiple");
}

inline void to_json(Json& j, const SweepTable& t) {
  j = Json{{"axes", t.axes}, {"quantities", t.quantities}, {"rows", t.rows}};
}

inline void from_json(const Json& j, SweepTable& t) {
  t.axes = j.at("axes").get<std::vector<Axis>>();
  t.quantities = j.at("quantities").get<std::vector<std::string>>();
  t.rows = j.at("rows").get<std::vector<SweepRow>>();
}

inline std::string format_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// One row per grid point: axis values, quantities, regime, flags.
inline void write_csv(std::ostream& os, const SweepTable& t) {
  for (const auto& a : t.axes) os << a.name << ',';
  for (const auto& q : t.quantities) os << q << ',';
  os << "regime,boundary,multiple\n";
  for (const auto& r : t.rows) {
    for (const auto& a : t.axes) os << format_number(r.params.at(a.name)) << ',';
    for (const auto& q : t.quantities) {
      auto it = r.values.find(q);
      os << (it == r.values.end() ? "" : format_number(it->second)) << ',';
    }
    os << r.regime << ',' << (r.boundary ? 1 : 0) << ',' << (r.multiple ? 1 : 0) << '\n';
  }
}

inline void to_json(Json& j, const MonotonicityReport& r) {
  j = Json{{"holds", r.holds},
           {"pairs_checked", r.pairs_checked},
           {"violations", r.violations},
           {"crossings", r.crossings},
           {"message", r.message}};
}

inline void from_json(const Json& j, MonotonicityReport& r) {
  r.holds = j.at("holds");
  r.pairs_checked = j.at("pairs_checked");
  r.violations = j.at("violations").get<std::vector<std::size_t>>();
  r.crossings = j.at("crossings").get<std::vector<std::size_t>>();
  r.message = j.at("message");
}

inline void to_json(Json& j, const ComparisonReport& r) {
  j = Json{{"adoption", r.adoption},         {"adoption_hat", r.adoption_hat},
           {"delay", r.delay},               {"delay_hat", r.delay_hat},
           {"adoption_greater", r.adoption_greater}, {"delay_less", r.delay_less},
           {"degenerate", r.degenerate},     {"holds", r.holds}};
}

inline void from_json(const Json& j, ComparisonReport& r) {
  r.adoption = j.at("adoption");
  r.adoption_hat = j.at("adoption_hat");
  r.delay = j.at("delay");
  r.delay_hat = j.at("delay_hat");
  r.adoption_greater = j.at("adoption_greater");
  r.delay_less = j.at("delay_less");
  r.degenerate = j.at("degenerate");
  r.holds = j.at("holds");
}

inline void to_json(Json& j, const WelfareComparison& w) {
  j = Json{{"part", w.part},
           {"welfare_without", w.welfare_without},
           {"welfare_with", w.welfare_with},
           {"welfare_with_min", w.welfare_with_min},
           {"welfare_with_max", w.welfare_with_max},
           {"claim_holds", w.claim_holds}};
}

inline void from_json(const Json& j, WelfareComparison& w) {
  w.part = j.at("part");
  w.welfare_without = j.at("welfare_without");
  w.welfare_with = j.at("welfare_with").get<std::vector<double>>();
  w.welfare_with_min = j.at("welfare_with_min");
  w.welfare_with_max = j.at("welfare_with_max");
  w.claim_holds = j.at("claim_holds");
}

// Simulation and verification --------------------------------------------------

inline void to_json(Json& j, const Estimate& e) {
  j = Json{{"mean", e.mean}, {"se", e.se}, {"n", e.n}};
}

inline void from_json(const Json& j, Estimate& e) {
  e.mean = j.at("mean");
  e.se = j.at("se");
  e.n = j.at("n");
}

inline void to_json(Json& j, const EstimateReport& r) {
  j = Json{{"seed", r.seed},
           {"n_paths", r.n_paths},
           {"buyer_payoff", r.buyer_payoff},
           {"seller_payoffs", r.seller_payoffs},
           {"discount_factors", r.discount_factors},
           {"discount", r.discount},
           {"expected_delay", r.expected_delay},
           {"trade_prob", r.trade_prob},
           {"tie_freq", r.tie_freq}};
}

inline void from_json(const Json& j, EstimateReport& r) {
  r.seed = j.at("seed");
  r.n_paths = j.at("n_paths");
  r.buyer_payoff = j.at("buyer_payoff").get<Estimate>();
  r.seller_payoffs = j.at("seller_payoffs").get<std::vector<Estimate>>();
  r.discount_factors = j.at("discount_factors").get<std::vector<Estimate>>();
  r.discount = j.at("discount").get<Estimate>();
  r.expected_delay = j.at("expected_delay").get<Estimate>();
  r.trade_prob = j.at("trade_prob").get<Estimate>();
  r.tie_freq = j.at("tie_freq").get<Estimate>();
}

inline void to_json(Json& j, const GapEntry& e) {
  j = Json{{"player", e.player}, {"type", e.type}, {"gain", e.gain}, {"argmax", e.argmax}};
}

inline void from_json(const Json& j, GapEntry& e) {
  e.player = j.at("player");
  e.type = j.at("type");
  e.gain = j.at("gain");
  e.argmax = j.at("argmax");
}

inline void to_json(Json& j, const GapReport& r) {
  j = Json{{"entries", r.entries},
           {"max_gain", r.max_gain},
           {"tolerance", r.tolerance},
           {"policy", r.policy},
           {"pass", r.pass}};
}

inline void from_json(const Json& j, GapReport& r) {
  r.entries = j.at("entries").get<std::vector<GapEntry>>();
  r.max_gain = j.at("max_gain");
  r.tolerance = j.at("tolerance");
  r.policy = j.at("policy");
  r.pass = j.at("pass");
}

inline void to_json(Json& j, const IndifferenceReport& r) {
  j = Json{{"tolerance", r.tolerance},
           {"buyer_spread", r.buyer_spread},
           {"seller_spread", r.seller_spread},
           {"waiting_violation", r.waiting_violation},
           {"atom_product", r.atom_product},
           {"exhaustion_gap", r.exhaustion_gap},
           {"vacuous", r.vacuous},
           {"pass", r.pass}};
}

inline void from_json(const Json& j, IndifferenceReport& r) {
  r.tolerance = j.at("tolerance");
  r.buyer_spread = j.at("buyer_spread");
  r.seller_spread = j.at("seller_spread").get<std::vector<double>>();
  r.waiting_violation = j.at("waiting_violation");
  r.atom_product = j.at("atom_product");
  r.exhaustion_gap = j.at("exhaustion_gap");
  r.vacuous = j.at("vacuous");
  r.pass = j.at("pass");
}

}  // namespace rbargain

#endif  // RBARGAIN_SERIALIZE_HPP_
