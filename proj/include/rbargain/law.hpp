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

// Concession-time laws with piecewise sum-of-exponential survival functions.

#ifndef RBARGAIN_LAW_HPP_
#define RBARGAIN_LAW_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "rbargain/error.hpp"

namespace rbargain {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// f(x) = sum_k coef_k * exp(-rate_k * x).
struct ExpSum {
  struct Term {
    double coef;
    double rate;
  };
  std::vector<Term> terms;

  ExpSum() = default;
  explicit ExpSum(double constant) {
    if (constant != 0.0) terms.push_back({constant, 0.0});
  }
  static ExpSum exp(double coef, double rate) {
    ExpSum s;
    if (coef != 0.0) s.terms.push_back({coef, rate});
    return s;
  }

  double operator()(double x) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.rate == 0.0 ? t.coef : t.coef * std::exp(-t.rate * x);
    return v;
  }
  // Value as x -> infinity.
  double limit() const {
    double v = 0.0;
    for (const auto& t : terms)
      if (t.rate == 0.0) v += t.coef;
    return v;
  }
  // g(x) = f(x + dx).
  ExpSum shifted(double dx) const {
    ExpSum s = *this;
    for (auto& t : s.terms)
      if (t.rate != 0.0) t.coef *= std::exp(-t.rate * dx);
    return s;
  }
  ExpSum scaled(double k) const {
    ExpSum s = *this;
    for (auto& t : s.terms) t.coef *= k;
    return s;
  }
  ExpSum derivative() const {
    ExpSum s;
    for (const auto& t : terms)
      if (t.rate != 0.0) s.terms.push_back({-t.rate * t.coef, t.rate});
    return s;
  }
  ExpSum& operator+=(const ExpSum& o) {
    for (const auto& t : o.terms) {
      bool merged = false;
      for (auto& u : terms)
        if (u.rate == t.rate) {
          u.coef += t.coef;
          merged = true;
          break;
        }
      if (!merged) terms.push_back(t);
    }
    return *this;
  }
  friend ExpSum operator+(ExpSum a, const ExpSum& b) { return a += b; }
  friend ExpSum operator*(const ExpSum& a, const ExpSum& b) {
    ExpSum s;
    for (const auto& x : a.terms)
      for (const auto& y : b.terms)
        s += ExpSum::exp(x.coef * y.coef, x.rate + y.rate);
    return s;
  }
  // Integral over [0, len]; len may be infinite when every nonzero term decays.
  double integral(double len) const {
    double v = 0.0;
    for (const auto& t : terms) {
      if (t.coef == 0.0) continue;
      if (t.rate == 0.0) {
        if (len == kInf) return t.coef > 0 ? kInf : -kInf;
        v += t.coef * len;
      } else if (len == kInf) {
        v += t.coef / t.rate;
      } else {
        v += t.coef * (-std::expm1(-t.rate * len)) / t.rate;
      }
    }
    return v;
  }
};

// Law of a concession time tau on [0, inf]. Segment k covers
// [start_k, end_k) and gives P(tau > t) = survival(t - start_k) there.
// A drop between consecutive segments is a point mass at the later start;
// the drop from 1 to the first segment's value is the atom at 0. After the
// last segment survival stays at its end value; the remainder is the
// probability of never conceding.
struct ConcessionLaw {
  struct Segment {
    double start;
    double end;
    ExpSum survival;
  };
  std::vector<Segment> segments;

  static ConcessionLaw never() {
    return ConcessionLaw{{{0.0, kInf, ExpSum(1.0)}}};
  }
  static ConcessionLaw immediate() {
    return ConcessionLaw{{{0.0, kInf, ExpSum()}}};
  }
  // Atom a at 0 then hazard h on the remaining mass forever.
  static ConcessionLaw exponential(double h, double atom = 0.0) {
    return ConcessionLaw{{{0.0, kInf, ExpSum::exp(1.0 - atom, h)}}};
  }

  double segment_end_value(std::size_t k) const {
    const auto& s = segments[k];
    return s.end == kInf ? s.survival.limit() : s.survival(s.end - s.start);
  }
  double atom() const { return 1.0 - segments.front().survival(0.0); }
  double never_prob() const { return segment_end_value(segments.size() - 1); }

  // P(tau > t).
  double survival(double t) const {
    if (t < 0.0) return 1.0;
    if (t == kInf) return never_prob();
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto& s = segments[k];
      if (t < s.end || k + 1 == segments.size()) {
        if (t >= s.end) return segment_end_value(k);
        return s.survival(t - s.start);
      }
    }
    return never_prob();
  }
  // P(tau >= t), the left limit of survival.
  double survival_before(double t) const {
    if (t <= 0.0) return 1.0;
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto& s = segments[k];
      if (t <= s.end || k + 1 == segments.size()) {
        if (t > s.end) return segment_end_value(k);
        return s.survival(t - s.start);
      }
    }
    return never_prob();
  }
  double mass_at(double t) const { return survival_before(t) - survival(t); }

  // Breakpoints where the law may jump or change form.
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (const auto& s : segments) {
      b.push_back(s.start);
      if (s.end != kInf) b.push_back(s.end);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }

  // Inverse-CDF sample: smallest t with P(tau <= t) >= u, or infinity.
  double quantile(double u) const {
    const double v = 1.0 - u;
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto& s = segments[k];
      if (s.survival(0.0) <= v) return s.start;
      const double end_val = segment_end_value(k);
      if (end_val > v) continue;
      return s.start + solve_in_segment(s, v);
    }
    return kInf;
  }

  void check() const {
    require(!segments.empty(), "law", "no segments");
    require(segments.front().start == 0.0, "law", "must start at 0");
    double prev = 1.0;
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto& s = segments[k];
      if (k > 0)
        require(s.start == segments[k - 1].end, "law", "segments not contiguous");
      require(s.end >= s.start, "law", "segment reversed");
      const double v0 = s.survival(0.0);
      require(v0 <= prev + 1e-12 && v0 >= -1e-12, "law", "survival not monotone");
      prev = segment_end_value(k);
      require(prev <= v0 + 1e-12 && prev >= -1e-12, "law", "survival not monotone");
    }
  }

 private:
  // x in (0, len) with survival(x) = v; survival is decreasing on the segment.
  static double solve_in_segment(const Segment& s, double v) {
    const ExpSum& f = s.survival;
    int decaying = 0;
    double c = 0.0, a = 0.0, k = 0.0;
    for (const auto& t : f.terms) {
      if (t.rate == 0.0) {
        k += t.coef;
      } else {
        ++decaying;
        c = t.coef;
        a = t.rate;
      }
    }
    const double len = s.end - s.start;
    if (decaying == 1 && c > 0.0 && v - k > 0.0) {
      double x = -std::log((v - k) / c) / a;
      return std::clamp(x, 0.0, len);
    }
    double lo = 0.0;
    double hi = len;
    if (hi == kInf) {
      hi = 1.0;
      while (f(hi) > v && hi < 1e12) hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (f(mid) > v) lo = mid;
      else hi = mid;
    }
    return hi;
  }
};

// E[exp(-r tau) ; tau in [0, t)] for a law, computed in closed form.
inline double discounted_mass_before(const ConcessionLaw& law, double r, double t) {
  double acc = 0.0;
  double prev_end_val = 1.0;
  for (std::size_t k = 0; k < law.segments.size(); ++k) {
    const auto& s = law.segments[k];
    if (s.start >= t) break;
    const double jump = prev_end_val - s.survival(0.0);
    acc += jump * std::exp(-r * s.start);
    const double hi = std::min(t, s.end) - s.start;
    // density -S'(x) times exp(-r (start + x))
    const ExpSum dens = s.survival.derivative().scaled(-std::exp(-r * s.start));
    acc += (dens * ExpSum::exp(1.0, r)).integral(hi);
    prev_end_val = law.segment_end_value(k);
  }
  return acc;
}

// E[exp(-r tau)] with exp(-r * inf) = 0.
inline double discounted_mass(const ConcessionLaw& law, double r) {
  return discounted_mass_before(law, r, kInf);
}

// Payoffs to a player who concedes, depending on who concedes first.
struct ConcessionGains {
  double opponent_first;  // opponent concedes strictly first
  double own_first;       // player concedes strictly first
  double tie;             // simultaneous concession
};

// Payoff from conceding at time t (t = inf: never) against an opponent law.
inline double payoff_of_concession_time(const ConcessionLaw& opp, double r,
                                        const ConcessionGains& g, double t) {
  double v = g.opponent_first * discounted_mass_before(opp, r, t);
  if (t == kInf) return v;
  const double disc = std::exp(-r * t);
  v += g.tie * disc * opp.mass_at(t);
  v += g.own_first * disc * opp.survival(t);
  return v;
}

// Expected payoff when the player's own concession time follows `own`,
// independent of the opponent's time drawn from `opp`.
inline double expected_payoff(const ConcessionLaw& own, const ConcessionLaw& opp,
                              double r, const ConcessionGains& g) {
  std::vector<double> cuts = own.breakpoints();
  const auto ob = opp.breakpoints();
  cuts.insert(cuts.end(), ob.begin(), ob.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(kInf);

  auto seg_of = [](const ConcessionLaw& law, double t) -> std::size_t {
    for (std::size_t k = 0; k < law.segments.size(); ++k)
      if (t < law.segments[k].end) return k;
    return law.segments.size() - 1;
  };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    // Point mass of own law at a.
    const double m = own.mass_at(a);
    if (m > 0.0) total += m * payoff_of_concession_time(opp, r, g, a);
    if (b <= a) continue;
    // Continuous part of own law on (a, b).
    const auto ko = seg_of(own, a);
    const auto& so = own.segments[ko];
    if (a >= so.end) continue;  // past the last segment: no more density
    const ExpSum own_s = so.survival.shifted(a - so.start);
    const ExpSum own_dens = own_s.derivative().scaled(-1.0);
    if (own_dens.terms.empty()) continue;
    const auto kp = seg_of(opp, a);
    const auto& sp = opp.segments[kp];
    ExpSum opp_s = a >= sp.end ? ExpSum(opp.segment_end_value(kp))
                               : sp.survival.shifted(a - sp.start);
    // U(a + x) = g1 * (D(a) + int_0^x e^{-r(a+u)} f_opp(a+u) du)
    //          + g2 * e^{-r(a+x)} S_opp(a+x)
    const double d_a = discounted_mass_before(opp, r, a) +
                       opp.mass_at(a) * std::exp(-r * a);
    const ExpSum disc = ExpSum::exp(std::exp(-r * a), r);
    const ExpSum opp_dens_disc = opp_s.derivative().scaled(-1.0) * disc;
    // Antiderivative F(x) - F(0) of opp_dens_disc.
    ExpSum anti;
    double anti0 = 0.0;
    for (const auto& t : opp_dens_disc.terms) {
      if (t.rate == 0.0) continue;  // cannot occur: disc has positive rate
      anti += ExpSum::exp(-t.coef / t.rate, t.rate);
      anti0 += -t.coef / t.rate;
    }
    ExpSum u = ExpSum(g.opponent_first * (d_a - anti0)) +
               anti.scaled(g.opponent_first) +
               (opp_s * disc).scaled(g.own_first);
    total += (u * own_dens).integral(b == kInf ? kInf : b - a);
  }
  // Own mass at infinity: never concedes.
  const double never = own.never_prob();
  if (never > 0.0)
    total += never * g.opponent_first * discounted_mass(opp, r);
  return total;
}

// Mixture sum_i w_i * law_i with weights normalised to sum to 1.
inline ConcessionLaw mix_laws(
    const std::vector<std::pair<double, const ConcessionLaw*>>& parts) {
  double total = 0.0;
  for (const auto& [w, law] : parts) {
    require(w >= 0.0, "weight", "mixture weights must be nonnegative");
    total += w;
  }
  require(total > 0.0, "weight", "mixture has no mass");
  std::vector<double> cuts;
  for (const auto& [w, law] : parts) {
    if (w <= 0.0) continue;
    const auto b = law->breakpoints();
    cuts.insert(cuts.end(), b.begin(), b.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  ConcessionLaw out;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = i + 1 < cuts.size() ? cuts[i + 1] : kInf;
    ExpSum s;
    for (const auto& [w, law] : parts) {
      if (w <= 0.0) continue;
      std::size_t k = 0;
      while (k + 1 < law->segments.size() && a >= law->segments[k].end) ++k;
      const auto& seg = law->segments[k];
      const ExpSum piece = a >= seg.end ? ExpSum(law->segment_end_value(k))
                                        : seg.survival.shifted(a - seg.start);
      s += piece.scaled(w / total);
    }
    out.segments.push_back({a, b, s});
  }
  return out;
}

// Payoff of conceding at t against a fixed opponent law, with per-segment
// prefix sums so that each evaluation is O(log segments).
class ConcessionPayoffTable {
 public:
  ConcessionPayoffTable(const ConcessionLaw& opp, double r, const ConcessionGains& g)
      : opp_(opp), r_(r), g_(g) {
    double acc = 0.0;
    double prev_end_val = 1.0;
    for (std::size_t k = 0; k < opp_.segments.size(); ++k) {
      const auto& s = opp_.segments[k];
      Row row;
      row.before = acc;
      row.jump = prev_end_val - s.survival(0.0);
      const double disc0 = std::exp(-r * s.start);
      // Antiderivative of -S'(x) * exp(-r (start + x)).
      const ExpSum dens = s.survival.derivative().scaled(-disc0) * ExpSum::exp(1.0, r);
      for (const auto& t : dens.terms)
        if (t.rate != 0.0) row.anti += ExpSum::exp(-t.coef / t.rate, t.rate);
      row.anti0 = row.anti(0.0);
      acc += row.jump * disc0;
      const double len = s.end - s.start;
      acc += dens.integral(len);
      prev_end_val = opp_.segment_end_value(k);
      rows_.push_back(std::move(row));
    }
    total_ = acc;
  }

  double operator()(double t) const {
    if (t == kInf) return g_.opponent_first * total_;
    std::size_t k = 0;
    {
      std::size_t lo = 0, hi = opp_.segments.size();
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (opp_.segments[mid].start <= t) lo = mid;
        else hi = mid;
      }
      k = lo;
    }
    const auto& s = opp_.segments[k];
    const Row& row = rows_[k];
    const double disc = std::exp(-r_ * t);
    double before = row.before;
    double tie = 0.0;
    if (t > s.start) before += row.jump * std::exp(-r_ * s.start);
    else tie = row.jump;
    const double x = std::min(t, s.end) - s.start;
    before += row.anti(x) - row.anti0;
    const double surv = t >= s.end ? opp_.segment_end_value(k) : s.survival(x);
    return g_.opponent_first * before + g_.tie * disc * tie + g_.own_first * disc * surv;
  }

  // Best payoff over the given times (infinity allowed) and its argmax.
  std::pair<double, double> best(const std::vector<double>& times) const {
    double bv = -kInf, bt = 0.0;
    for (double t : times) {
      const double v = (*this)(t);
      if (v > bv) {
        bv = v;
        bt = t;
      }
    }
    return {bv, bt};
  }

 private:
  struct Row {
    double before = 0.0;  // discounted mass strictly before the segment start
    double jump = 0.0;    // point mass at the segment start
    ExpSum anti;
    double anti0 = 0.0;
  };
  ConcessionLaw opp_;
  double r_;
  ConcessionGains g_;
  std::vector<Row> rows_;
  double total_ = 0.0;
};

}  // namespace rbargain

#endif  // RBARGAIN_LAW_HPP_
