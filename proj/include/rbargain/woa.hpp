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

// War of attrition after incompatible demands p_b < p_s.

#ifndef RBARGAIN_WOA_HPP_
#define RBARGAIN_WOA_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "rbargain/error.hpp"
#include "rbargain/law.hpp"
#include "rbargain/params.hpp"

namespace rbargain {

struct BeliefState {
  double eps_b_hat = 0.0;
  double eps_s_hat = 0.0;
  std::vector<double> pi_hat;
};

inline void check_beliefs(const BeliefState& b, std::size_t n_types) {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  require(unit(b.eps_b_hat), "eps_b_hat", "must lie in [0,1]");
  require(unit(b.eps_s_hat), "eps_s_hat", "must lie in [0,1]");
  require(b.pi_hat.size() == n_types, "pi_hat", "one entry per cost type");
  double s = b.eps_s_hat;
  for (double p : b.pi_hat) {
    require(unit(p), "pi_hat", "must lie in [0,1]");
    s += p;
  }
  require(std::abs(s - 1.0) < 1e-9, "pi_hat", "eps_s_hat + sum(pi_hat) must be 1");
}

struct ConcessionRates {
  double lambda_s = 0.0;
  std::vector<double> lambda_b;  // lambda_b^j for the m conceding types
  std::size_t m = 0;             // number of types with cost below p_b
  bool seller_never_concedes = false;
};

// Rates keeping the opponent indifferent. The seller's rate discounts with
// the buyer's rate r_b and vice versa.
inline ConcessionRates concession_rates(double p_b, double p_s,
                                        const std::vector<double>& costs,
                                        double r_b, double r_s) {
  require(p_s > p_b, "p_s", "counteroffer must exceed the buyer's offer");
  require(p_b >= 0.0 && p_s <= 1.0, "p_s", "prices must lie in [0,1]");
  ConcessionRates out;
  out.lambda_s = r_b * (1.0 - p_s) / (p_s - p_b);
  out.seller_never_concedes = p_s == 1.0;
  for (double th : costs) {
    if (th >= p_b) break;
    out.lambda_b.push_back(r_s * (p_b - th) / (p_s - p_b));
  }
  out.m = out.lambda_b.size();
  return out;
}

inline ConcessionRates concession_rates(double p_b, double p_s,
                                        const std::vector<double>& costs,
                                        double r = 1.0) {
  return concession_rates(p_b, p_s, costs, r, r);
}

// Beliefs used after an observation the rational players never make.
class BeliefPolicy {
 public:
  virtual ~BeliefPolicy() = default;
  virtual std::string name() const = 0;
  virtual double buyer(const GameParams& params, double p_b) const = 0;
  virtual BeliefState seller(const GameParams& params,
                             const std::vector<double>& pi, double p_b,
                             double p_s) const = 0;
};

inline double grid_weight(const PriceGrid& g, const std::vector<double>& mu,
                          double p) {
  const auto i = g.index_of(p);
  return i == PriceGrid::npos ? 0.0 : mu[i];
}

// Prior restricted to the types for which the observation is not dominated.
// A seller type is dominated at demand p_s when p_s <= its cost.
class PriorRestrictedPolicy : public BeliefPolicy {
 public:
  std::string name() const override { return "prior-restricted"; }
  double buyer(const GameParams& params, double p_b) const override {
    const double c = params.eps * grid_weight(params.buyer_grid, params.mu_b, p_b);
    return c / (c + (1.0 - params.eps));
  }
  BeliefState seller(const GameParams& params, const std::vector<double>& pi,
                     double p_b, double p_s) const override {
    std::vector<double> w(pi.size(), 0.0);
    for (std::size_t j = 0; j < pi.size(); ++j)
      if (keep(params.costs, j, p_b, p_s)) w[j] = (1.0 - params.eps) * pi[j];
    return normalise(params, w, p_s);
  }

 protected:
  virtual bool keep(const std::vector<double>& costs, std::size_t j, double,
                    double p_s) const {
    return costs[j] < p_s;
  }
  static BeliefState normalise(const GameParams& params, std::vector<double> w,
                               double p_s) {
    const double c =
        params.eps * grid_weight(params.seller_grid, params.mu_s, p_s);
    double total = c;
    for (double x : w) total += x;
    BeliefState b;
    if (total <= 0.0) {
      b.eps_s_hat = 1.0;
      b.pi_hat.assign(w.size(), 0.0);
      return b;
    }
    b.eps_s_hat = c / total;
    for (double& x : w) x /= total;
    b.pi_hat = std::move(w);
    return b;
  }
};

// Rational mass only on the highest-cost type that can still concede to p_b.
class HighestConcedingPolicy : public PriorRestrictedPolicy {
 public:
  std::string name() const override { return "highest-conceding"; }

 protected:
  bool keep(const std::vector<double>& costs, std::size_t j, double p_b,
            double p_s) const override {
    std::size_t m = 0;
    while (m < costs.size() && costs[m] < p_b) ++m;
    return m > 0 && j == m - 1 && costs[j] < p_s;
  }
};

// Bayes posteriors after the buyer offers p_b and the seller answers p_s.
// sigma_b_pb is the rational buyer's probability of p_b and sigma_s_ps[j]
// type j's probability of p_s given p_b.
inline BeliefState posterior_beliefs(const GameParams& params, double sigma_b_pb,
                                     const std::vector<double>& sigma_s_ps,
                                     const std::vector<double>& pi, double p_b,
                                     double p_s,
                                     const BeliefPolicy* policy = nullptr) {
  require(pi.size() == params.costs.size(), "pi", "one entry per cost type");
  require(sigma_s_ps.size() == pi.size(), "sigma_s", "one entry per cost type");
  BeliefState b;
  const double cb = params.eps * grid_weight(params.buyer_grid, params.mu_b, p_b);
  const double db = cb + (1.0 - params.eps) * sigma_b_pb;
  if (db > 0.0) {
    b.eps_b_hat = cb / db;
  } else if (policy) {
    b.eps_b_hat = policy->buyer(params, p_b);
  } else {
    throw OffPath("buyer offer has zero probability");
  }
  const double cs =
      params.eps * grid_weight(params.seller_grid, params.mu_s, p_s);
  double ds = cs;
  std::vector<double> w(pi.size());
  for (std::size_t j = 0; j < pi.size(); ++j) {
    w[j] = (1.0 - params.eps) * pi[j] * sigma_s_ps[j];
    ds += w[j];
  }
  if (ds > 0.0) {
    b.eps_s_hat = cs / ds;
    for (double& x : w) x /= ds;
    b.pi_hat = std::move(w);
  } else if (policy) {
    const BeliefState s = policy->seller(params, pi, p_b, p_s);
    b.eps_s_hat = s.eps_s_hat;
    b.pi_hat = s.pi_hat;
  } else {
    throw OffPath("seller counteroffer has zero probability");
  }
  return b;
}

struct PayoffProfile {
  double buyer_value = 0.0;
  std::vector<double> seller_values;
  std::vector<double> discount_factors;
  double buyer_concession_discount = 0.0;
  // E[exp(-r_s min(tau_s, tau_b))] over both populations, commitment included.
  double expected_discount = 0.0;
};

enum class WeakSide { kNone, kBuyer, kSeller };

inline const char* to_string(WeakSide w) {
  switch (w) {
    case WeakSide::kBuyer: return "buyer";
    case WeakSide::kSeller: return "seller";
    default: return "none";
  }
}

struct WoaSolution {
  double p_b = 0.0;
  double p_s = 0.0;
  BeliefState beliefs;
  std::vector<double> costs;
  double r_b = 1.0;
  double r_s = 1.0;

  double lambda_s = 0.0;
  std::vector<double> lambda_b;
  double L = 1.0;
  WeakSide weak = WeakSide::kNone;
  std::size_t j_star = 1;  // 1-based
  double c_b = 0.0;
  double c_s = 0.0;
  std::vector<double> phase_times;  // T^1..T^m
  double T_end = 0.0;
  std::size_t m = 0;
  bool seller_never_concedes = false;
  PayoffProfile payoffs;
};

namespace detail {

// tail[j] = eps_s + sum_{i>j} pi_i for j = 0..m.
inline std::vector<double> seller_tails(const BeliefState& b, std::size_t m) {
  const std::size_t n = b.pi_hat.size();
  std::vector<double> tail(m + 1);
  double above = b.eps_s_hat;
  for (std::size_t i = n; i > m; --i) above += b.pi_hat[i - 1];
  tail[m] = above;
  for (std::size_t j = m; j > 0; --j) tail[j - 1] = tail[j] + b.pi_hat[j - 1];
  return tail;
}

}  // namespace detail

struct WoaLaws {
  ConcessionLaw buyer_population;  // rational and commitment buyers together
  ConcessionLaw buyer_rational;
  ConcessionLaw seller_population;
  std::vector<ConcessionLaw> seller_types;  // one per cost type
};

// Concession laws implied by the solution's atoms, hazards and phase times.
inline WoaLaws woa_laws(const WoaSolution& sol) {
  WoaLaws out;
  const std::size_t m = sol.m;
  const std::size_t n = sol.costs.size();
  const double eb = sol.beliefs.eps_b_hat;

  // Buyer: atom c_b then hazard lambda_b^j on (T^{j-1}, T^j].
  {
    ConcessionLaw law;
    double level = 1.0 - sol.c_b;
    double t0 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double t1 = sol.phase_times[j];
      if (t1 > t0) {
        law.segments.push_back({t0, t1, ExpSum::exp(level, sol.lambda_b[j])});
        level *= std::exp(-sol.lambda_b[j] * (t1 - t0));
        t0 = t1;
      }
    }
    law.segments.push_back({t0, kInf, ExpSum(level)});
    out.buyer_population = law;
    if (eb < 1.0) {
      ConcessionLaw r;
      for (const auto& s : law.segments)
        r.segments.push_back(
            {s.start, s.end,
             (s.survival + ExpSum(-eb)).scaled(1.0 / (1.0 - eb))});
      // Clip round-off below zero at the end.
      auto& last = r.segments.back().survival;
      if (std::abs(last.limit()) < 1e-12) last = ExpSum();
      out.buyer_rational = r;
    } else {
      out.buyer_rational = ConcessionLaw::never();
    }
  }

  // Seller population: atom c_s then hazard lambda_s until T_end.
  const std::vector<double> tail = detail::seller_tails(sol.beliefs, m);
  {
    ConcessionLaw law;
    const double t_end = sol.T_end;
    if (t_end > 0.0 && sol.lambda_s > 0.0)
      law.segments.push_back({0.0, t_end, ExpSum::exp(1.0 - sol.c_s, sol.lambda_s)});
    else if (t_end > 0.0)
      law.segments.push_back({0.0, t_end, ExpSum(1.0 - sol.c_s)});
    law.segments.push_back({t_end, kInf, ExpSum(tail[m])});
    if (law.segments.front().start != 0.0) law.segments.front().start = 0.0;
    out.seller_population = law;
  }

  out.seller_types.resize(n, ConcessionLaw::never());
  for (std::size_t j = 0; j < m; ++j) {
    const double pj = sol.beliefs.pi_hat[j];
    const double lo = j == 0 ? 0.0 : sol.phase_times[j - 1];
    const double hi = sol.phase_times[j];
    ConcessionLaw law;
    if (lo > 0.0) law.segments.push_back({0.0, lo, ExpSum(1.0)});
    if (pj > 0.0 && hi > lo) {
      // (S(t) - tail_j) / pi_j on [lo, hi).
      ExpSum s = ExpSum::exp((1.0 - sol.c_s) / pj, sol.lambda_s).shifted(lo) +
                 ExpSum(-tail[j + 1] / pj);
      law.segments.push_back({lo, hi, s});
      law.segments.push_back({hi, kInf, ExpSum()});
    } else {
      law.segments.push_back({lo, kInf, ExpSum()});
    }
    out.seller_types[j] = law;
  }
  return out;
}

inline PayoffProfile woa_payoffs(const WoaSolution& sol) {
  const WoaLaws laws = woa_laws(sol);
  PayoffProfile pp;
  const double pb = sol.p_b, ps = sol.p_s;
  if (sol.weak == WeakSide::kBuyer)
    pp.buyer_value = 1.0 - ps;
  else
    pp.buyer_value = sol.c_s * (1.0 - pb) + (1.0 - sol.c_s) * (1.0 - ps);
  pp.buyer_concession_discount = discounted_mass(laws.buyer_population, sol.r_s);
  const std::size_t n = sol.costs.size();
  pp.seller_values.resize(n);
  pp.discount_factors.resize(n);
  const ConcessionGains unit{1.0, 1.0, 1.0};
  pp.expected_discount = sol.beliefs.eps_s_hat * pp.buyer_concession_discount;
  for (std::size_t j = 0; j < n; ++j) {
    const double th = sol.costs[j];
    const ConcessionGains g{ps - th, pb - th, 0.5 * (pb + ps) - th};
    if (j < sol.m) {
      pp.seller_values[j] = expected_payoff(laws.seller_types[j],
                                            laws.buyer_population, sol.r_s, g);
    } else {
      pp.seller_values[j] = (ps - th) * pp.buyer_concession_discount;
    }
    pp.discount_factors[j] = expected_payoff(
        laws.seller_types[j], laws.buyer_population, sol.r_s, unit);
    pp.expected_discount += sol.beliefs.pi_hat[j] * pp.discount_factors[j];
  }
  return pp;
}

namespace detail {

// Rates, atoms and phase times; payoffs are left empty.
inline WoaSolution solve_woa_core(double p_b, double p_s, const BeliefState& beliefs,
                                  const std::vector<double>& costs, double r_b,
                                  double r_s) {
  require(p_s > p_b, "p_s", "counteroffer must exceed the buyer's offer");
  require(p_s <= 1.0 && p_b >= 0.0, "p_s", "prices must lie in [0,1]");
  require(!costs.empty() && costs.front() < p_b, "p_b",
          "no conceding type: p_b must exceed the lowest cost");
  check_beliefs(beliefs, costs.size());

  const ConcessionRates rates = concession_rates(p_b, p_s, costs, r_b, r_s);
  WoaSolution sol;
  sol.p_b = p_b;
  sol.p_s = p_s;
  sol.beliefs = beliefs;
  sol.costs = costs;
  sol.r_b = r_b;
  sol.r_s = r_s;
  sol.lambda_s = rates.lambda_s;
  sol.lambda_b = rates.lambda_b;
  sol.m = rates.m;
  sol.seller_never_concedes = rates.seller_never_concedes;
  const std::size_t m = sol.m;
  const double eb = beliefs.eps_b_hat;
  const double lnb = eb > 0.0 ? -std::log(eb) : kInf;
  const std::vector<double> tail = detail::seller_tails(beliefs, m);
  sol.phase_times.assign(m, 0.0);

  if (sol.seller_never_concedes) {
    // Conceding types give in at once; the buyer concedes at the rate that
    // leaves the highest conceding type indifferent until she is exhausted.
    sol.c_s = 1.0 - tail[m];
    sol.c_b = 0.0;
    sol.L = 0.0;
    sol.weak = sol.c_s > 0.0 ? WeakSide::kSeller : WeakSide::kNone;
    sol.T_end = lnb / sol.lambda_b[m - 1];
    sol.phase_times[m - 1] = sol.T_end;
    sol.j_star = m;
    return sol;
  }

  require(!(eb == 0.0 && tail[m] <= 0.0), "beliefs",
          "no commitment mass on either side");
  if (tail[m] <= 0.0) {
    // The seller cannot build a reputation: all conceding mass gives in at 0.
    sol.c_s = 1.0;
    sol.L = 0.0;
    sol.weak = WeakSide::kSeller;
    sol.T_end = 0.0;
    sol.j_star = 1;
    return sol;
  }

  // T_s^j = -ln(tail_j) / lambda_s and the buyer's cumulative hazard there.
  std::vector<double> ts(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j)
    ts[j] = std::max(0.0, -std::log(tail[j]) / sol.lambda_s);
  double cum = 0.0;
  for (std::size_t j = 1; j <= m; ++j) cum += sol.lambda_b[j - 1] * (ts[j] - ts[j - 1]);

  sol.L = cum > 0.0 ? lnb / cum : kInf;
  if (lnb >= cum) {
    // Buyer finishes last unless she concedes with an atom.
    sol.weak = lnb > cum ? WeakSide::kBuyer : WeakSide::kNone;
    sol.c_b = eb > 0.0 ? -std::expm1(std::log(eb) + cum) : 1.0;
    sol.c_s = 0.0;
    for (std::size_t j = 1; j <= m; ++j) sol.phase_times[j - 1] = ts[j];
  } else {
    // Seller concedes with an atom: shift his schedule by s so both finish
    // together. The shifted buyer hazard integral is piecewise linear in s.
    sol.weak = WeakSide::kSeller;
    double shift = 0.0;
    double above = 0.0;  // sum over phases j > k
    for (std::size_t k = m; k >= 1; --k) {
      const double lam = sol.lambda_b[k - 1];
      const double full = above + lam * (ts[k] - ts[k - 1]);
      if (lnb <= full && lam > 0.0) {
        shift = ts[k] - (lnb - above) / lam;
        break;
      }
      above = full;
    }
    sol.c_s = -std::expm1(-sol.lambda_s * shift);
    sol.c_b = 0.0;
    for (std::size_t j = 1; j <= m; ++j)
      sol.phase_times[j - 1] = std::max(0.0, ts[j] - shift);
  }
  sol.T_end = m > 0 ? sol.phase_times[m - 1] : 0.0;
  sol.j_star = m;
  for (std::size_t j = 1; j <= m; ++j)
    if (sol.phase_times[j - 1] > 0.0) {
      sol.j_star = j;
      break;
    }
  return sol;
}

}  // namespace detail

// Equilibrium of the war of attrition with the given posteriors.
inline WoaSolution solve_woa(double p_b, double p_s, const BeliefState& beliefs,
                             const std::vector<double>& costs, double r_b,
                             double r_s) {
  WoaSolution sol = detail::solve_woa_core(p_b, p_s, beliefs, costs, r_b, r_s);
  sol.payoffs = woa_payoffs(sol);
  return sol;
}

inline WoaSolution solve_woa(double p_b, double p_s, const BeliefState& beliefs,
                             const std::vector<double>& costs, double r = 1.0) {
  return solve_woa(p_b, p_s, beliefs, costs, r, r);
}

enum class LimitSide { kSellerConcedes, kBuyerConcedes, kIndeterminate };

inline const char* to_string(LimitSide s) {
  switch (s) {
    case LimitSide::kSellerConcedes: return "seller";
    case LimitSide::kBuyerConcedes: return "buyer";
    default: return "indeterminate";
  }
}

struct ConcessionLimit {
  LimitSide side = LimitSide::kIndeterminate;
  int limit_case = 0;  // 1, 2 or 3; 0 when indeterminate
};

// Which atom tends to 1 as the vanishing belief components go to zero.
// Components of limit_beliefs equal to zero are the vanishing ones.
inline ConcessionLimit limit_weak_player(double p_b, double p_s,
                                         const BeliefState& limit_beliefs,
                                         const std::vector<double>& costs,
                                         double r_b, double r_s) {
  require(p_s > p_b, "p_s", "counteroffer must exceed the buyer's offer");
  require(costs.size() >= 1, "costs", "at least one cost type is required");
  const double lam_s = r_b * (1.0 - p_s) / (p_s - p_b);
  const double lam_b1 = r_s * (p_b - costs[0]) / (p_s - p_b);
  const bool two = costs.size() >= 2;
  const double lam_b2 = two ? r_s * (p_b - costs[1]) / (p_s - p_b) : -kInf;
  const double eb = limit_beliefs.eps_b_hat;
  const double es = limit_beliefs.eps_s_hat;
  const double pi2 = two ? limit_beliefs.pi_hat[1] : 0.0;
  if (es == 0.0 && two && lam_b2 > lam_s) return {LimitSide::kSellerConcedes, 1};
  if (eb == 0.0 && two && pi2 > 0.0 && (lam_s > lam_b2 || p_b <= costs[1]))
    return {LimitSide::kBuyerConcedes, 2};
  if (eb == 0.0 && (es > 0.0 || lam_s > lam_b1))
    return {LimitSide::kBuyerConcedes, 3};
  return {LimitSide::kIndeterminate, 0};
}

}  // namespace rbargain

#endif  // RBARGAIN_WOA_HPP_
