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

// Best-response certification of strategy profiles and of war-of-attrition
// solutions, plus finite-eps instantiation of limit profiles.

#ifndef RBARGAIN_VERIFY_HPP_
#define RBARGAIN_VERIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rbargain/adoption.hpp"
#include "rbargain/error.hpp"
#include "rbargain/law.hpp"
#include "rbargain/limiteq.hpp"
#include "rbargain/params.hpp"
#include "rbargain/sim.hpp"
#include "rbargain/woa.hpp"

namespace rbargain {

// ---------------------------------------------------------------------------
// Time grids

// 0, n geometric points on [horizon * 1e-6, horizon], the extra points and
// infinity, sorted and deduplicated.
inline std::vector<double> concession_time_grid(double horizon, std::size_t n,
                                                const std::vector<double>& extra = {}) {
  std::vector<double> t{0.0};
  if (horizon > 0.0 && n > 0) {
    const double lo = horizon * 1e-6;
    const double ratio = n > 1 ? std::pow(horizon / lo, 1.0 / static_cast<double>(n - 1)) : 1.0;
    double x = n > 1 ? lo : horizon;
    for (std::size_t i = 0; i < n; ++i, x *= ratio) t.push_back(std::min(x, horizon));
  }
  for (double e : extra)
    if (e >= 0.0) t.push_back(e);
  t.push_back(kInf);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

// Twice the last finite breakpoint, or long enough for an unbounded
// exponential tail to settle.
inline double law_horizon(const ConcessionLaw& law) {
  double last = 0.0;
  for (double b : law.breakpoints())
    if (b != kInf) last = std::max(last, b);
  double slowest = kInf;
  const auto& tail = law.segments.back();
  if (tail.end == kInf)
    for (const auto& t : tail.survival.terms)
      if (t.rate > 0.0) slowest = std::min(slowest, t.rate);
  double h = 2.0 * last;
  if (slowest != kInf) h = std::max(h, last + 40.0 / slowest);
  return h > 0.0 ? h : 1.0;
}

inline std::vector<double> law_time_grid(const ConcessionLaw& law, std::size_t n) {
  return concession_time_grid(law_horizon(law), n, law.breakpoints());
}

inline ConcessionLaw buyer_population(const Continuation& c) {
  if (c.eps_b_hat <= 0.0) return c.buyer;
  const ConcessionLaw never = ConcessionLaw::never();
  if (c.eps_b_hat >= 1.0) return never;
  return mix_laws({{c.eps_b_hat, &never}, {1.0 - c.eps_b_hat, &c.buyer}});
}

// ---------------------------------------------------------------------------
// War-of-attrition indifference

struct IndifferenceReport {
  double tolerance = 0.0;
  double buyer_spread = 0.0;          // payoff range over the buyer's support
  std::vector<double> seller_spread;  // same per conceding type
  double waiting_violation = 0.0;     // gain from leaving the support
  double atom_product = 0.0;          // c_b * c_s
  double exhaustion_gap = 0.0;        // |B(T) - eps_b| + |S(T) - tail|
  bool vacuous = false;
  bool pass = false;
};

inline IndifferenceReport verify_woa_indifference(const WoaSolution& sol,
                                                  double tolerance = 1e-6,
                                                  std::size_t time_points = 1000) {
  IndifferenceReport rep;
  rep.tolerance = tolerance;
  rep.atom_product = sol.c_b * sol.c_s;
  const WoaLaws laws = woa_laws(sol);
  const std::size_t n = sol.costs.size();
  rep.seller_spread.assign(n, 0.0);
  if (sol.T_end <= 0.0) {
    rep.vacuous = true;
    rep.pass = rep.atom_product <= 1e-15;
    return rep;
  }
  const std::vector<double> tail = detail::seller_tails(sol.beliefs, sol.m);
  rep.exhaustion_gap =
      std::abs(laws.buyer_population.survival(sol.T_end) - sol.beliefs.eps_b_hat) +
      std::abs(laws.seller_population.survival(sol.T_end) - tail[sol.m]);

  std::vector<double> extra = sol.phase_times;
  const auto grid = concession_time_grid(2.0 * sol.T_end, time_points, extra);
  const double pb = sol.p_b, ps = sol.p_s, mid = 0.5 * (pb + ps);

  auto spread_and_excess = [&](const ConcessionPayoffTable& f, double lo, double hi,
                               bool open_lo, double& spread, double& excess) {
    double vmin = kInf, vmax = -kInf;
    for (double t : grid) {
      const bool inside = (open_lo ? t > lo : t >= lo) && t < hi;
      if (!inside) continue;
      const double v = f(t);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    if (vmax == -kInf) return;
    spread = std::max(spread, vmax - vmin);
    for (double t : grid) {
      const bool inside = (open_lo ? t > lo : t >= lo) && t < hi;
      if (!inside) excess = std::max(excess, f(t) - vmax);
    }
  };

  {
    const ConcessionPayoffTable f(laws.seller_population, sol.r_b,
                                  {1.0 - pb, 1.0 - ps, 1.0 - mid});
    spread_and_excess(f, 0.0, sol.T_end, true, rep.buyer_spread, rep.waiting_violation);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double th = sol.costs[j];
    const ConcessionPayoffTable f(laws.buyer_population, sol.r_s,
                                  {ps - th, pb - th, mid - th});
    if (j < sol.m) {
      const double lo = j == 0 ? 0.0 : sol.phase_times[j - 1];
      const double hi = sol.phase_times[j];
      // A buyer atom at 0 pushes the seller's support off t = 0.
      const bool open_lo = j == 0 && sol.c_b > 0.0;
      if (hi > lo && sol.beliefs.pi_hat[j] > 0.0)
        spread_and_excess(f, lo, hi, open_lo, rep.seller_spread[j], rep.waiting_violation);
    } else {
      // Never conceding must be optimal.
      const double never = f(kInf);
      for (double t : grid)
        rep.waiting_violation = std::max(rep.waiting_violation, f(t) - never);
    }
  }
  double worst = std::max(rep.buyer_spread, rep.waiting_violation);
  for (double s : rep.seller_spread) worst = std::max(worst, s);
  rep.pass = worst <= tolerance && rep.atom_product <= 1e-15 &&
             rep.exhaustion_gap <= 1e-10;
  return rep;
}

// ---------------------------------------------------------------------------
// Best-response gaps

struct GapEntry {
  std::string player;  // buyer | seller | adoption
  int type = -1;       // 0-based seller type; -1 for the buyer
  double gain = 0.0;
  std::string argmax;
};

struct GapReport {
  std::vector<GapEntry> entries;
  double max_gain = 0.0;
  double tolerance = 0.0;
  std::string policy;
  bool pass = false;
};

struct VerifyOptions {
  double tolerance = 5e-3;
  std::size_t time_points = 1000;
  // Seller offers that only commitment buyers make carry weight at most eps;
  // they are scanned on a coarser time grid and every stride-th counteroffer.
  std::size_t coarse_time_points = 64;
  std::size_t coarse_price_stride = 16;
  std::string policy;  // recorded in the report
};

namespace detail {

inline double offer_prob(const OfferMix& mix, double p) {
  double s = 0.0;
  for (const auto& [q, w] : mix)
    if (std::abs(q - p) <= 1e-12) s += w;
  return s;
}

template <typename... Args>
std::string describe(const char* fmt, Args... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Memo of continuations for one buyer offer.
class ContinuationMemo {
 public:
  explicit ContinuationMemo(const StrategyProfile& pr) : pr_(pr) {}
  const Continuation& get(double p_b, double p_s) {
    if (p_b != p_b_) {
      memo_.clear();
      p_b_ = p_b;
    }
    auto it = memo_.find(p_s);
    if (it == memo_.end()) it = memo_.emplace(p_s, pr_.continuation(p_b, p_s)).first;
    return it->second;
  }

 private:
  const StrategyProfile& pr_;
  double p_b_ = -1.0;
  std::map<double, Continuation> memo_;
};

struct SellerSide {
  std::vector<double> eq;   // per type
  std::vector<double> dev;  // per type
  std::vector<std::string> arg;
};

inline SellerSide seller_side(const StrategyProfile& pr, const GameParams& params,
                              double p_b, bool full, const VerifyOptions& opt,
                              ContinuationMemo& memo) {
  const std::size_t n = pr.costs.size();
  SellerSide out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                 std::vector<std::string>(n)};
  const auto& sg = params.seller_grid.points;
  std::vector<double> cand;
  for (std::size_t i = 0; i < sg.size(); ++i)
    if (sg[i] > p_b && (full || i % opt.coarse_price_stride == 0 || i + 1 == sg.size()))
      cand.push_back(sg[i]);
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [q, w] : pr.seller_offers(j, p_b))
      if (q > p_b) cand.push_back(q);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const std::size_t tp = full ? opt.time_points : opt.coarse_time_points;

  for (std::size_t j = 0; j < n; ++j) {
    const double th = pr.costs[j];
    double eq = 0.0;
    for (const auto& [q, w] : pr.seller_offers(j, p_b)) {
      if (w <= 0.0) continue;
      if (q <= p_b) {
        eq += w * (p_b - th);
        continue;
      }
      const Continuation& c = memo.get(p_b, q);
      const ConcessionLaw pop = buyer_population(c);
      eq += w * expected_payoff(c.seller[j], pop, pr.r_s,
                                {q - th, p_b - th, 0.5 * (p_b + q) - th});
    }
    out.eq[j] = eq;
    out.dev[j] = p_b - th;
    out.arg[j] = describe("p_b=%.12g accept", p_b);
    for (double q : cand) {
      const Continuation& c = memo.get(p_b, q);
      const ConcessionLaw pop = buyer_population(c);
      const ConcessionPayoffTable f(pop, pr.r_s, {q - th, p_b - th, 0.5 * (p_b + q) - th});
      const auto [v, t] = f.best(law_time_grid(pop, tp));
      if (v > out.dev[j]) {
        out.dev[j] = v;
        out.arg[j] = describe("p_b=%.12g p_s=%.12g concede_at=%.12g", p_b, q, t);
      }
    }
  }
  return out;
}

// Rational buyer's payoff from offering p_b: the prescribed continuation
// when `deviate` is false, the best concession time otherwise.
inline double buyer_offer_value(const StrategyProfile& pr, const GameParams& params,
                                double p_b, bool deviate, const VerifyOptions& opt,
                                ContinuationMemo& memo) {
  const std::size_t n = pr.costs.size();
  const double eps = params.eps;
  std::map<double, std::vector<double>> rational;  // p_s -> weight per type
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [q, w] : pr.seller_offers(j, p_b)) {
      auto& v = rational[q];
      v.resize(n, 0.0);
      v[j] += (1.0 - eps) * pr.type_probs[j] * w;
    }
  double value = 0.0;
  const auto& sg = params.seller_grid.points;
  for (std::size_t i = 0; i < sg.size(); ++i) {
    const double q = sg[i];
    const double w = eps * params.mu_s[i];
    if (w <= 0.0) continue;
    if (q <= p_b) {
      value += w * (1.0 - p_b);
      continue;
    }
    bool shared = false;
    for (const auto& [r, v] : rational)
      if (std::abs(r - q) <= 1e-12) shared = true;
    if (shared || q >= 1.0) continue;
    // Only commitment sellers demand q: the best reply concedes at once.
    if (deviate) {
      value += w * (1.0 - q);
    } else {
      const Continuation& c = memo.get(p_b, q);
      value += w * (1.0 - q) * discounted_mass(c.buyer, pr.r_b);
    }
  }
  const ConcessionLaw never = ConcessionLaw::never();
  for (const auto& [q, wj] : rational) {
    double total = 0.0;
    for (double x : wj) total += x;
    if (total <= 0.0) continue;
    if (q <= p_b) {
      value += total * (1.0 - p_b);
      continue;
    }
    const Continuation& c = memo.get(p_b, q);
    std::vector<std::pair<double, const ConcessionLaw*>> parts;
    const double wc = eps * grid_weight(params.seller_grid, params.mu_s, q);
    if (wc > 0.0) parts.push_back({wc, &never});
    for (std::size_t j = 0; j < n; ++j)
      if (wj[j] > 0.0) parts.push_back({wj[j], &c.seller[j]});
    const double weight = total + wc;
    const ConcessionLaw opp = mix_laws(parts);
    const ConcessionGains g{1.0 - p_b, 1.0 - q, 1.0 - 0.5 * (p_b + q)};
    if (deviate) {
      const ConcessionPayoffTable f(opp, pr.r_b, g);
      value += weight * f.best(law_time_grid(opp, opt.time_points)).first;
    } else {
      value += weight * expected_payoff(c.buyer, opp, pr.r_b, g);
    }
  }
  return value;
}

}  // namespace detail

// Largest expected gain of any single player or seller type from deviating
// in offers (over the grids) or concession times (over a time grid),
// holding the rest of the profile fixed.
inline GapReport best_response_gap(const StrategyProfile& pr, const GameParams& params,
                                   const VerifyOptions& opt = {}) {
  check_profile(pr);
  require(pr.costs == params.costs, "costs", "profile and parameters disagree");
  GapReport rep;
  rep.tolerance = opt.tolerance;
  rep.policy = opt.policy;
  const std::size_t n = pr.costs.size();
  const auto& bg = params.buyer_grid.points;
  detail::ContinuationMemo memo(pr);

  // Buyer.
  double eq_b = 0.0;
  for (const auto& [p, w] : pr.buyer_offers)
    if (w > 0.0) eq_b += w * detail::buyer_offer_value(pr, params, p, false, opt, memo);
  double dev_b = -kInf;
  double arg_b = 0.0;
  for (double p : bg) {
    const double v = detail::buyer_offer_value(pr, params, p, true, opt, memo);
    if (v > dev_b) {
      dev_b = v;
      arg_b = p;
    }
  }
  rep.entries.push_back(
      {"buyer", -1, dev_b - eq_b, detail::describe("p_b=%.12g", arg_b)});

  // Seller types, weighting each buyer offer by its total probability.
  std::vector<double> gain(n, 0.0), eq_v(n, 0.0), worst(n, -kInf);
  std::vector<std::string> arg(n);
  std::vector<double> offers = bg;
  for (const auto& [p, w] : pr.buyer_offers) offers.push_back(p);
  std::sort(offers.begin(), offers.end());
  offers.erase(std::unique(offers.begin(), offers.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               offers.end());
  for (double p : offers) {
    const double rational = detail::offer_prob(pr.buyer_offers, p);
    const double w = (1.0 - params.eps) * rational +
                     params.eps * grid_weight(params.buyer_grid, params.mu_b, p);
    if (w <= 0.0) continue;
    const auto side = detail::seller_side(pr, params, p, rational > 0.0, opt, memo);
    for (std::size_t j = 0; j < n; ++j) {
      const double g = side.dev[j] - side.eq[j];
      gain[j] += w * g;
      eq_v[j] += w * side.eq[j];
      if (w * g > worst[j]) {
        worst[j] = w * g;
        arg[j] = side.arg[j];
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    rep.entries.push_back({"seller", static_cast<int>(j), gain[j], arg[j]});

  // Technology choice.
  if (!pr.adoption_costs.empty()) {
    double best = -kInf, mixed = 0.0;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = eq_v[j] - pr.adoption_costs[j];
      mixed += pr.type_probs[j] * v;
      if (v > best) {
        best = v;
        best_j = j;
      }
    }
    rep.entries.push_back({"adoption", static_cast<int>(best_j), best - mixed,
                           detail::describe("adopt theta=%.12g", pr.costs[best_j])});
  }

  rep.max_gain = -kInf;
  for (const auto& e : rep.entries) rep.max_gain = std::max(rep.max_gain, e.gain);
  rep.pass = rep.max_gain <= opt.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Finite-eps instantiation of limit profiles

inline std::shared_ptr<const BeliefPolicy> make_policy(const std::string& name) {
  if (name == "prior-restricted") return std::make_shared<PriorRestrictedPolicy>();
  if (name == "highest-conceding") return std::make_shared<HighestConcedingPolicy>();
  throw InvalidParameter("policy", "unknown belief policy '" + name + "'");
}

// Limit counteroffer snapped down to the seller grid; types that cannot
// concede to p_b demand 1.
inline double snapped_counteroffer(const PriceGrid& seller_grid,
                                   const std::vector<double>& costs, double theta,
                                   double p_b) {
  if (theta >= p_b) return 1.0;
  double below = costs.front();
  for (double t : costs)
    if (t < p_b) below = t;
  const double target = 1.0 + below - p_b;
  double q = seller_grid.points.front();
  for (double p : seller_grid.points)
    if (p <= target + 1e-12) q = p;
  return q <= p_b ? p_b : q;
}

using SellerRule = std::function<OfferMix(std::size_t type, double p_b)>;

inline SellerRule snapped_limit_rule(const PriceGrid& seller_grid,
                                     const std::vector<double>& costs) {
  return [seller_grid, costs](std::size_t j, double p_b) {
    return OfferMix{{snapped_counteroffer(seller_grid, costs, costs[j], p_b), 1.0}};
  };
}

// Buyer's eps -> 0 payoff from p with the grid fixed: immediate trade at
// max(p, q) with each type below p and nothing from the others.
inline double fixed_grid_limit_value(const GameParams& params, const std::vector<double>& pi,
                                     const SellerRule& rule, double p) {
  double v = 0.0;
  for (std::size_t j = 0; j < params.costs.size(); ++j) {
    if (params.costs[j] >= p) continue;
    for (const auto& [q, w] : rule(j, p)) v += pi[j] * w * (1.0 - std::max(p, q));
  }
  return v;
}

// Grid offer maximising the fixed-grid limit payoff; ties go to offers the
// lowest type accepts, then to the lowest offer.
inline double fixed_grid_limit_offer(const GameParams& params, const std::vector<double>& pi,
                                     const SellerRule& rule, double lo = 0.0,
                                     double hi = 1.0) {
  double best = -kInf, best_p = -1.0;
  bool best_accepts = false;
  for (double p : params.buyer_grid.points) {
    if (p < lo || p > hi) continue;
    const double v = fixed_grid_limit_value(params, pi, rule, p);
    const bool accepts = rule(0, p).front().first <= p;
    if (v > best + 1e-12 || (std::abs(v - best) <= 1e-12 && accepts && !best_accepts)) {
      best = v;
      best_p = p;
      best_accepts = accepts;
    }
  }
  require(best_p >= 0.0, "buyer_grid", "no buyer offer in range");
  return best_p;
}

// Strategy profile at finite eps built from a limit prescription: offers
// are fixed, posteriors follow Bayes' rule where rational players reach the
// observation and the belief policy elsewhere, and play after incompatible
// demands is the war-of-attrition equilibrium. When every rational seller
// demanding 1 is unable to concede the buyer is indifferent over concession
// times; she then concedes so that the lowest types are exactly deterred
// from demanding 1.
class LimitInstance : public std::enable_shared_from_this<LimitInstance> {
 public:
  LimitInstance(GameParams params, std::vector<double> pi, OfferMix buyer_offers,
                SellerRule rule, std::shared_ptr<const BeliefPolicy> policy)
      : params_(std::move(params)),
        pi_(std::move(pi)),
        buyer_offers_(std::move(buyer_offers)),
        rule_(std::move(rule)),
        policy_(std::move(policy)) {
    require_distribution(pi_, params_.costs.size());
    require(static_cast<bool>(policy_), "policy", "a belief policy is required");
  }

  const GameParams& params() const { return params_; }
  const std::vector<double>& pi() const { return pi_; }
  const OfferMix& buyer_offers() const { return buyer_offers_; }
  const BeliefPolicy& policy() const { return *policy_; }

  OfferMix seller_offers(std::size_t j, double p_b) const { return rule_(j, p_b); }

  BeliefState beliefs(double p_b, double p_s) const {
    const GameParams& g = params_;
    BeliefState b;
    const double sb = detail::offer_prob(buyer_offers_, p_b);
    if (sb > 0.0) {
      const double cb = g.eps * grid_weight(g.buyer_grid, g.mu_b, p_b);
      b.eps_b_hat = cb / (cb + (1.0 - g.eps) * sb);
    } else {
      b.eps_b_hat = policy_->buyer(g, p_b);
    }
    std::vector<double> w(pi_.size(), 0.0);
    double rational = 0.0;
    for (std::size_t j = 0; j < pi_.size(); ++j) {
      w[j] = (1.0 - g.eps) * pi_[j] * detail::offer_prob(rule_(j, p_b), p_s);
      rational += w[j];
    }
    if (rational > 0.0) {
      const double cs = g.eps * grid_weight(g.seller_grid, g.mu_s, p_s);
      const double total = cs + rational;
      b.eps_s_hat = cs / total;
      for (double& x : w) x /= total;
      b.pi_hat = std::move(w);
    } else {
      const BeliefState s = policy_->seller(g, pi_, p_b, p_s);
      b.eps_s_hat = s.eps_s_hat;
      b.pi_hat = s.pi_hat;
    }
    return b;
  }

  Continuation continuation(double p_b, double p_s) const {
    require(p_s > p_b, "p_s", "continuation needs incompatible demands");
    const auto& costs = params_.costs;
    const std::size_t n = costs.size();
    const BeliefState b = beliefs(p_b, p_s);
    Continuation c;
    c.p_b = p_b;
    c.p_s = p_s;
    c.eps_b_hat = b.eps_b_hat;
    std::size_t m = 0;
    while (m < n && costs[m] < p_b) ++m;
    if (m == 0) {
      c.buyer = ConcessionLaw::immediate();
      c.seller.assign(n, ConcessionLaw::never());
      return c;
    }
    double conceding = 0.0;
    for (std::size_t j = 0; j < m; ++j) conceding += b.pi_hat[j];
    if (p_s >= 1.0 && conceding <= 0.0) {
      c.buyer = deterring_law(p_b, b.eps_b_hat, m);
      c.seller.assign(n, ConcessionLaw::never());
      return c;
    }
    double tail = b.eps_s_hat;
    for (std::size_t j = m; j < n; ++j) tail += b.pi_hat[j];
    if (b.eps_b_hat <= 0.0 && tail <= 0.0) {
      c.buyer = ConcessionLaw::never();
      c.seller.assign(n, ConcessionLaw::never());
      for (std::size_t j = 0; j < m; ++j) c.seller[j] = ConcessionLaw::immediate();
      return c;
    }
    const WoaSolution sol =
        detail::solve_woa_core(p_b, p_s, b, costs, params_.r_b, params_.r_s);
    WoaLaws laws = woa_laws(sol);
    c.buyer = std::move(laws.buyer_rational);
    c.seller = std::move(laws.seller_types);
    return c;
  }

  // Type j's payoff under the profile after the buyer offers p_b.
  double seller_value(std::size_t j, double p_b) const {
    const auto key = std::make_pair(j, p_b);
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    const double th = params_.costs[j];
    double v = 0.0;
    for (const auto& [q, w] : rule_(j, p_b)) {
      if (q <= p_b) {
        v += w * (p_b - th);
      } else if (q >= 1.0) {
        v = kInf;  // demanding 1 is what the law deters; no bound from it
        break;
      } else {
        const Continuation c = continuation(p_b, q);
        v += w * expected_payoff(c.seller[j], buyer_population(c), params_.r_s,
                                 {q - th, p_b - th, 0.5 * (p_b + q) - th});
      }
    }
    values_.emplace(key, v);
    return v;
  }

  StrategyProfile profile() const {
    StrategyProfile pr;
    pr.costs = params_.costs;
    pr.type_probs = pi_;
    pr.adoption_costs = adoption_costs_;
    pr.eps_b = params_.eps;
    pr.eps_s = params_.eps;
    pr.buyer_grid = params_.buyer_grid;
    pr.mu_b = params_.mu_b;
    pr.seller_grid = params_.seller_grid;
    pr.mu_s = params_.mu_s;
    pr.r_b = params_.r_b;
    pr.r_s = params_.r_s;
    pr.buyer_offers = buyer_offers_;
    auto self = shared_from_this();
    pr.seller_offers = [self](std::size_t j, double p_b) { return self->seller_offers(j, p_b); };
    pr.continuation = [self](double p_b, double p_s) { return self->continuation(p_b, p_s); };
    return pr;
  }

  void set_adoption_costs(std::vector<double> c) { adoption_costs_ = std::move(c); }

 private:
  // Buyer law with E[exp(-r_s tau)] over the population equal to
  // min_j V_j / (1 - theta_j) across the conceding types.
  ConcessionLaw deterring_law(double p_b, double eps_b_hat, std::size_t m) const {
    double target = kInf;
    for (std::size_t j = 0; j < m; ++j)
      target = std::min(target, seller_value(j, p_b) / (1.0 - params_.costs[j]));
    const double rational = 1.0 - eps_b_hat;
    if (target == kInf || target >= rational) return ConcessionLaw::immediate();
    if (target <= 0.0) return ConcessionLaw::never();
    const double r = params_.r_s;
    const double lam = r * (p_b - params_.costs[m - 1]) / (1.0 - p_b);
    const double k = lam / (r + lam);
    const double atom = (target / rational - k) / (1.0 - k);
    if (atom >= 0.0) return ConcessionLaw::exponential(lam, std::min(atom, 1.0));
    return ConcessionLaw::exponential(r * target / (rational - target));
  }

  GameParams params_;
  std::vector<double> pi_;
  OfferMix buyer_offers_;
  SellerRule rule_;
  std::shared_ptr<const BeliefPolicy> policy_;
  std::vector<double> adoption_costs_;
  mutable std::map<std::pair<std::size_t, double>, double> values_;
};

// Exogenous limit equilibrium at finite eps: the buyer makes the grid offer
// that is optimal in the limit and sellers follow the snapped limit rule.
inline std::shared_ptr<LimitInstance> instantiate_exogenous(
    const GameParams& params, const std::vector<double>& pi,
    const std::string& policy = "highest-conceding") {
  const SellerRule rule = snapped_limit_rule(params.seller_grid, params.costs);
  const double p = fixed_grid_limit_offer(params, pi, rule);
  return std::make_shared<LimitInstance>(params, pi, OfferMix{{p, 1.0}}, rule,
                                         make_policy(policy));
}

struct EndogenousInstance {
  std::shared_ptr<LimitInstance> instance;
  double adoption_prob = 0.0;  // probability of theta1
  double pooling_prob = 0.0;   // buyer's weight on the pooling offer
  double pooling_offer = 0.0;
  double screening_offer = 0.0;
};

// Mixed adoption equilibrium at finite eps: adoption and offer
// probabilities make the buyer and the seller indifferent in the limit with
// the grid fixed.
inline EndogenousInstance instantiate_endogenous(
    const GameParams& params, double c, const std::string& policy = "highest-conceding") {
  require(params.costs.size() == 2, "costs", "two technologies required");
  const double th1 = params.costs[0], th2 = params.costs[1];
  const SellerRule rule = snapped_limit_rule(params.seller_grid, params.costs);
  EndogenousInstance out;
  out.pooling_offer = fixed_grid_limit_offer(params, {0.0, 1.0}, rule, th2 + 1e-12, 1.0);
  out.screening_offer = fixed_grid_limit_offer(params, {1.0, 0.0}, rule, th1 + 1e-12, th2);
  auto price = [&](std::size_t j, double p) { return std::max(p, rule(j, p).front().first); };
  const double u_pool = 1.0 - price(1, out.pooling_offer);
  const double u_scr = 1.0 - price(0, out.screening_offer);
  out.adoption_prob = u_pool / u_scr;
  require(out.adoption_prob > 0.0 && out.adoption_prob < 1.0, "c",
          "no mixed adoption equilibrium on this grid");
  const double v1p = price(0, out.pooling_offer) - th1;
  const double v2p = price(1, out.pooling_offer) - th2;
  const double v1s = price(0, out.screening_offer) - th1;
  const double v2s = (1.0 - th2) * v1s / (1.0 - th1);
  out.pooling_prob = (c - (v1s - v2s)) / ((v1p - v2p) - (v1s - v2s));
  require(out.pooling_prob > 0.0 && out.pooling_prob < 1.0, "c",
          "no mixed adoption equilibrium on this grid");
  out.instance = std::make_shared<LimitInstance>(
      params, std::vector<double>{out.adoption_prob, 1.0 - out.adoption_prob},
      OfferMix{{out.pooling_offer, out.pooling_prob},
               {out.screening_offer, 1.0 - out.pooling_prob}},
      rule, make_policy(policy));
  out.instance->set_adoption_costs({c, 0.0});
  return out;
}

// The screening instance with every type at or above the offer demanding
// its complete-information price instead of 1.
inline std::shared_ptr<LimitInstance> corrupt_high_type(
    const GameParams& params, const std::vector<double>& pi,
    const std::string& policy = "highest-conceding") {
  const auto base = instantiate_exogenous(params, pi, policy);
  const SellerRule rule = snapped_limit_rule(params.seller_grid, params.costs);
  const PriceGrid grid = params.seller_grid;
  const auto costs = params.costs;
  SellerRule bad = [rule, grid, costs](std::size_t j, double p_b) {
    if (costs[j] >= p_b) {
      double q = grid.points.front();
      for (double p : grid.points)
        if (p <= rubinstein_price(costs[j]) + 1e-12) q = p;
      if (q > p_b) return OfferMix{{q, 1.0}};
    }
    return rule(j, p_b);
  };
  return std::make_shared<LimitInstance>(params, pi, base->buyer_offers(), bad,
                                         make_policy(policy));
}

// The limit seller rule with the buyer offering the lowest cost.
inline std::shared_ptr<LimitInstance> corrupt_buyer_offer(
    const GameParams& params, const std::vector<double>& pi,
    const std::string& policy = "highest-conceding") {
  double p = params.buyer_grid.points.front();
  for (double x : params.buyer_grid.points)
    if (x <= params.costs.front() + 1e-12) p = x;
  return std::make_shared<LimitInstance>(
      params, pi, OfferMix{{p, 1.0}}, snapped_limit_rule(params.seller_grid, params.costs),
      make_policy(policy));
}

inline GapReport verify_instance(const LimitInstance& inst, VerifyOptions opt = {}) {
  opt.policy = inst.policy().name();
  return best_response_gap(inst.profile(), inst.params(), opt);
}

}  // namespace rbargain

#endif  // RBARGAIN_VERIFY_HPP_
