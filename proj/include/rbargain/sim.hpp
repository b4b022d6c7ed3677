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

// Monte Carlo play of explicit strategy profiles.

#ifndef RBARGAIN_SIM_HPP_
#define RBARGAIN_SIM_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "rbargain/adoption.hpp"
#include "rbargain/error.hpp"
#include "rbargain/law.hpp"
#include "rbargain/limiteq.hpp"
#include "rbargain/params.hpp"
#include "rbargain/woa.hpp"

namespace rbargain {

// (price, probability) pairs.
using OfferMix = std::vector<std::pair<double, double>>;

// Play after incompatible demands p_b < p_s.
struct Continuation {
  double p_b = 0.0;
  double p_s = 0.0;
  double eps_b_hat = 0.0;             // posterior that the buyer is committed
  ConcessionLaw buyer;                // rational buyer
  std::vector<ConcessionLaw> seller;  // one per rational seller type
};

struct StrategyProfile {
  std::vector<double> costs;
  std::vector<double> type_probs;      // rational seller's cost distribution
  std::vector<double> adoption_costs;  // per type; empty means none
  double eps_b = 0.0;                  // buyer commitment probability
  double eps_s = 0.0;                  // seller commitment probability
  PriceGrid buyer_grid;                // commitment demands and their weights
  std::vector<double> mu_b;
  PriceGrid seller_grid;
  std::vector<double> mu_s;
  double r_b = 1.0;
  double r_s = 1.0;
  OfferMix buyer_offers;
  // Counteroffer mix of a type to p_b; a price equal to p_b means accept.
  std::function<OfferMix(std::size_t type, double p_b)> seller_offers;
  std::function<Continuation(double p_b, double p_s)> continuation;
};

inline void check_profile(const StrategyProfile& pr) {
  require(!pr.costs.empty(), "costs", "profile has no cost types");
  require(pr.type_probs.size() == pr.costs.size(), "type_probs",
          "one probability per cost type");
  require(pr.adoption_costs.empty() || pr.adoption_costs.size() == pr.costs.size(),
          "adoption_costs", "one adoption cost per type");
  require(pr.eps_b >= 0.0 && pr.eps_b <= 1.0, "eps_b", "must lie in [0,1]");
  require(pr.eps_s >= 0.0 && pr.eps_s <= 1.0, "eps_s", "must lie in [0,1]");
  require(pr.eps_b == 0.0 || pr.mu_b.size() == pr.buyer_grid.size(), "mu_b",
          "weights must match the buyer grid");
  require(pr.eps_s == 0.0 || pr.mu_s.size() == pr.seller_grid.size(), "mu_s",
          "weights must match the seller grid");
  require(static_cast<bool>(pr.seller_offers), "seller_offers", "missing");
  require(static_cast<bool>(pr.continuation), "continuation", "missing");
  double s = 0.0;
  for (const auto& [p, w] : pr.buyer_offers) {
    require(w >= 0.0, "buyer_offers", "negative probability");
    s += w;
  }
  require(pr.eps_b == 1.0 || std::abs(s - 1.0) < 1e-9, "buyer_offers",
          "probabilities must sum to 1");
}

struct PathOutcome {
  double tau = kInf;  // trade time
  double price = 0.0;
  bool traded = false;
  bool tie = false;
  bool buyer_committed = false;
  bool seller_committed = false;
  int seller_type = -1;  // 0-based; -1 for a commitment seller
  double p_b = 0.0;
  double p_s = 0.0;
  double buyer_payoff = 0.0;
  double seller_payoff = 0.0;
  double discount = 0.0;  // exp(-r_s tau)
};

struct SimOptions {
  double tie_window = 0.0;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::size_t block = 4096;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  // (0,1): never exactly 0 so quantiles stay finite at the lower end.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline std::size_t draw_index(const std::vector<double>& w, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return w.size() - 1;
}

inline double draw_offer(const OfferMix& mix, double u) {
  double acc = 0.0;
  for (const auto& [p, w] : mix) {
    acc += w;
    if (u < acc) return p;
  }
  return mix.back().first;
}

// Thread-safe memo of continuations keyed by (p_b, p_s).
class ContinuationCache {
 public:
  explicit ContinuationCache(const StrategyProfile& pr) : pr_(pr) {}
  std::shared_ptr<const Continuation> get(double p_b, double p_s) {
    const auto key = std::make_pair(p_b, p_s);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto c = std::make_shared<const Continuation>(pr_.continuation(p_b, p_s));
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, c).first->second;
  }

 private:
  const StrategyProfile& pr_;
  std::mutex mu_;
  std::map<std::pair<double, double>, std::shared_ptr<const Continuation>> cache_;
};

inline PathOutcome play_path(const StrategyProfile& pr, std::mt19937_64& rng,
                             ContinuationCache& cache, const SimOptions& opt) {
  PathOutcome out;
  double seller_demand = 0.0;
  double adoption_cost = 0.0;
  out.seller_committed = uniform01(rng) < pr.eps_s;
  if (out.seller_committed) {
    seller_demand = pr.seller_grid.points[draw_index(pr.mu_s, uniform01(rng))];
  } else {
    out.seller_type = static_cast<int>(draw_index(pr.type_probs, uniform01(rng)));
    if (!pr.adoption_costs.empty())
      adoption_cost = pr.adoption_costs[static_cast<std::size_t>(out.seller_type)];
  }
  out.buyer_committed = uniform01(rng) < pr.eps_b;
  out.p_b = out.buyer_committed
                ? pr.buyer_grid.points[draw_index(pr.mu_b, uniform01(rng))]
                : draw_offer(pr.buyer_offers, uniform01(rng));
  if (out.seller_committed) {
    out.p_s = seller_demand <= out.p_b ? out.p_b : seller_demand;
  } else {
    const OfferMix mix =
        pr.seller_offers(static_cast<std::size_t>(out.seller_type), out.p_b);
    out.p_s = draw_offer(mix, uniform01(rng));
  }
  const double theta =
      out.seller_committed ? 0.0 : pr.costs[static_cast<std::size_t>(out.seller_type)];
  auto settle = [&](double tau, double price) {
    out.traded = true;
    out.tau = tau;
    out.price = price;
    out.buyer_payoff = std::exp(-pr.r_b * tau) * (1.0 - price);
    out.discount = std::exp(-pr.r_s * tau);
    out.seller_payoff = out.discount * (price - theta) - adoption_cost;
  };
  if (out.p_s <= out.p_b) {
    settle(0.0, out.p_b);
    return out;
  }
  double tau_b = kInf, tau_s = kInf;
  if (!out.buyer_committed || !out.seller_committed) {
    const auto cont = cache.get(out.p_b, out.p_s);
    const double ub = uniform01(rng);
    const double us = uniform01(rng);
    if (!out.buyer_committed) tau_b = cont->buyer.quantile(ub);
    if (!out.seller_committed)
      tau_s = cont->seller[static_cast<std::size_t>(out.seller_type)].quantile(us);
  }
  if (tau_b == kInf && tau_s == kInf) {
    out.seller_payoff = -adoption_cost;
    return out;
  }
  if (std::abs(tau_b - tau_s) <= opt.tie_window) {
    out.tie = true;
    settle(std::min(tau_b, tau_s), 0.5 * (out.p_b + out.p_s));
  } else if (tau_b < tau_s) {
    settle(tau_b, out.p_s);
  } else {
    settle(tau_s, out.p_b);
  }
  return out;
}

// Generator for block b of a run; block 0 starts with the path sample_path
// draws.
inline std::mt19937_64 block_rng(std::uint64_t seed, std::size_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(b)};
  return std::mt19937_64(seq);
}

}  // namespace detail

inline PathOutcome sample_path(const StrategyProfile& profile, std::uint64_t seed,
                               const SimOptions& opt = {}) {
  check_profile(profile);
  std::mt19937_64 rng = detail::block_rng(seed, 0);
  detail::ContinuationCache cache(profile);
  return detail::play_path(profile, rng, cache, opt);
}

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

struct EstimateReport {
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  Estimate buyer_payoff;                // rational buyers
  std::vector<Estimate> seller_payoffs;  // per rational type
  std::vector<Estimate> discount_factors;  // per rational type
  Estimate discount;                    // E[exp(-r_s tau)] over all paths
  Estimate expected_delay;              // 1 - discount
  Estimate trade_prob;
  Estimate tie_freq;
};

namespace detail {

struct Moments {
  double n = 0.0, s = 0.0, ss = 0.0;
  void add(double x) {
    n += 1.0;
    s += x;
    ss += x * x;
  }
  void merge(const Moments& o) {
    n += o.n;
    s += o.s;
    ss += o.ss;
  }
  Estimate estimate() const {
    Estimate e;
    e.n = static_cast<std::size_t>(n);
    if (n <= 0.0) return e;
    e.mean = s / n;
    if (n > 1.0) {
      const double var = std::max(0.0, (ss - n * e.mean * e.mean) / (n - 1.0));
      e.se = std::sqrt(var / n);
    }
    return e;
  }
};

struct BlockStats {
  Moments buyer, discount, trade, tie;
  std::vector<Moments> seller, seller_disc;
  explicit BlockStats(std::size_t n) : seller(n), seller_disc(n) {}
  void merge(const BlockStats& o) {
    buyer.merge(o.buyer);
    discount.merge(o.discount);
    trade.merge(o.trade);
    tie.merge(o.tie);
    for (std::size_t j = 0; j < seller.size(); ++j) {
      seller[j].merge(o.seller[j]);
      seller_disc[j].merge(o.seller_disc[j]);
    }
  }
};

}  // namespace detail

// Paths are split into fixed blocks with seeds derived from (seed, block);
// block sums are merged in block order, so the report does not depend on
// the thread count.
inline EstimateReport estimate_outcomes(const StrategyProfile& profile,
                                        std::size_t n_paths, std::uint64_t seed,
                                        const SimOptions& opt = {}) {
  check_profile(profile);
  require(n_paths >= 1, "n_paths", "at least one path is required");
  const std::size_t n_types = profile.costs.size();
  const std::size_t block = std::max<std::size_t>(1, opt.block);
  const std::size_t n_blocks = (n_paths + block - 1) / block;
  std::vector<detail::BlockStats> stats(n_blocks, detail::BlockStats(n_types));
  detail::ContinuationCache cache(profile);

  auto run_block = [&](std::size_t b) {
    std::mt19937_64 rng = detail::block_rng(seed, b);
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(n_paths, lo + block);
    auto& st = stats[b];
    for (std::size_t i = lo; i < hi; ++i) {
      const PathOutcome o = detail::play_path(profile, rng, cache, opt);
      st.discount.add(o.discount);
      st.trade.add(o.traded ? 1.0 : 0.0);
      st.tie.add(o.tie ? 1.0 : 0.0);
      if (!o.buyer_committed) st.buyer.add(o.buyer_payoff);
      if (!o.seller_committed) {
        const auto j = static_cast<std::size_t>(o.seller_type);
        st.seller[j].add(o.seller_payoff);
        st.seller_disc[j].add(o.discount);
      }
    }
  };

  std::size_t n_threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
  n_threads = std::max<std::size_t>(1, std::min(n_threads, n_blocks));
  if (n_threads == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> workers;
    std::exception_ptr err;
    std::mutex err_mu;
    for (std::size_t t = 0; t < n_threads; ++t)
      workers.emplace_back([&, t] {
        try {
          for (std::size_t b = t; b < n_blocks; b += n_threads) run_block(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      });
    for (auto& w : workers) w.join();
    if (err) std::rethrow_exception(err);
  }

  detail::BlockStats total(n_types);
  for (const auto& s : stats) total.merge(s);
  EstimateReport rep;
  rep.seed = seed;
  rep.n_paths = n_paths;
  rep.buyer_payoff = total.buyer.estimate();
  rep.discount = total.discount.estimate();
  rep.expected_delay = rep.discount;
  rep.expected_delay.mean = 1.0 - rep.discount.mean;
  rep.trade_prob = total.trade.estimate();
  rep.tie_freq = total.tie.estimate();
  for (std::size_t j = 0; j < n_types; ++j) {
    rep.seller_payoffs.push_back(total.seller[j].estimate());
    rep.discount_factors.push_back(total.seller_disc[j].estimate());
  }
  return rep;
}

// Writes up to `cap` paths as CSV.
inline void dump_paths(const StrategyProfile& profile, std::size_t n_paths,
                       std::uint64_t seed, std::ostream& os, std::size_t cap = 10000,
                       const SimOptions& opt = {}) {
  check_profile(profile);
  const std::size_t block = std::max<std::size_t>(1, opt.block);
  std::mt19937_64 rng = detail::block_rng(seed, 0);
  detail::ContinuationCache cache(profile);
  os << "path,seller_type,buyer_committed,seller_committed,p_b,p_s,tau,price,"
        "buyer_payoff,seller_payoff\n";
  char buf[256];
  for (std::size_t i = 0; i < std::min(n_paths, cap); ++i) {
    if (i > 0 && i % block == 0) rng = detail::block_rng(seed, i / block);
    const PathOutcome o = detail::play_path(profile, rng, cache, opt);
    std::snprintf(buf, sizeof buf, "%zu,%d,%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  i, o.seller_type, o.buyer_committed ? 1 : 0,
                  o.seller_committed ? 1 : 0, o.p_b, o.p_s, o.tau, o.price,
                  o.buyer_payoff, o.seller_payoff);
    os << buf;
  }
}

// Plays a single war of attrition with the solution's posteriors as priors.
inline StrategyProfile woa_profile(const WoaSolution& sol) {
  StrategyProfile pr;
  pr.costs = sol.costs;
  const double rational = 1.0 - sol.beliefs.eps_s_hat;
  pr.type_probs = sol.beliefs.pi_hat;
  for (double& p : pr.type_probs) p = rational > 0.0 ? p / rational : 0.0;
  if (rational <= 0.0) pr.type_probs.assign(pr.costs.size(), 1.0 / pr.costs.size());
  pr.eps_b = sol.beliefs.eps_b_hat;
  pr.eps_s = sol.beliefs.eps_s_hat;
  pr.buyer_grid = PriceGrid{{sol.p_b}};
  pr.mu_b = {1.0};
  pr.seller_grid = PriceGrid{{sol.p_s}};
  pr.mu_s = {1.0};
  pr.r_b = sol.r_b;
  pr.r_s = sol.r_s;
  pr.buyer_offers = {{sol.p_b, 1.0}};
  const double ps = sol.p_s;
  pr.seller_offers = [ps](std::size_t, double) { return OfferMix{{ps, 1.0}}; };
  const WoaLaws laws = woa_laws(sol);
  Continuation cont{sol.p_b, sol.p_s, sol.beliefs.eps_b_hat, laws.buyer_rational,
                    laws.seller_types};
  pr.continuation = [cont](double, double) { return cont; };
  return pr;
}

namespace detail {

// Limit play after incompatible demands: a demand of 1 meets buyer
// concession with E[exp(-r_s tau)] = d; any other demand is met at once.
inline std::function<Continuation(double, double)> limit_continuation(
    std::size_t n, double d, double r_s) {
  return [n, d, r_s](double p_b, double p_s) {
    Continuation c;
    c.p_b = p_b;
    c.p_s = p_s;
    c.seller.assign(n, ConcessionLaw::never());
    if (p_s < 1.0 || d >= 1.0)
      c.buyer = ConcessionLaw::immediate();
    else if (d <= 0.0)
      c.buyer = ConcessionLaw::never();
    else
      c.buyer = ConcessionLaw::exponential(r_s * d / (1.0 - d));
    return c;
  };
}

}  // namespace detail

// Limit (eps = 0) profile of an exogenous limit equilibrium.
inline StrategyProfile limit_profile(const LimitEquilibrium& eq, double r_b = 1.0,
                                     double r_s = 1.0) {
  StrategyProfile pr;
  pr.costs = eq.costs;
  pr.type_probs = eq.pi;
  pr.r_b = r_b;
  pr.r_s = r_s;
  pr.buyer_offers = {{eq.buyer_offer, 1.0}};
  const auto costs = eq.costs;
  pr.seller_offers = [costs](std::size_t j, double p_b) {
    return OfferMix{{seller_counteroffer(costs[j], p_b, costs), 1.0}};
  };
  const double d = eq.i_star < eq.costs.size() ? eq.delay_factor_map.back() : 1.0;
  pr.continuation = detail::limit_continuation(eq.costs.size(), d, r_s);
  return pr;
}

// Limit profile of an endogenous-adoption equilibrium: the seller adopts
// theta1 with adoption_prob and the buyer mixes over the two offers.
inline StrategyProfile limit_profile(const AdoptionEquilibrium& eq, double theta1,
                                     double theta2, double c, double r_b = 1.0,
                                     double r_s = 1.0) {
  StrategyProfile pr;
  pr.costs = {theta1, theta2};
  pr.type_probs = {eq.adoption_prob, 1.0 - eq.adoption_prob};
  pr.adoption_costs = {c, 0.0};
  pr.r_b = r_b;
  pr.r_s = r_s;
  if (eq.buyer_mix >= 1.0)
    pr.buyer_offers = {{eq.pooling_offer, 1.0}};
  else if (eq.buyer_mix <= 0.0)
    pr.buyer_offers = {{eq.screening_offer, 1.0}};
  else
    pr.buyer_offers = {{eq.pooling_offer, eq.buyer_mix},
                       {eq.screening_offer, 1.0 - eq.buyer_mix}};
  const std::vector<double> costs = pr.costs;
  pr.seller_offers = [costs](std::size_t j, double p_b) {
    return OfferMix{{seller_counteroffer(costs[j], p_b, costs), 1.0}};
  };
  const double d = delay_factor_high_type(theta1, theta2, r_b, r_s);
  pr.continuation = detail::limit_continuation(2, d, r_s);
  return pr;
}

}  // namespace rbargain

#endif  // RBARGAIN_SIM_HPP_
