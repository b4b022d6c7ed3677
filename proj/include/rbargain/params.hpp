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

#ifndef RBARGAIN_PARAMS_HPP_
#define RBARGAIN_PARAMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rbargain/error.hpp"

namespace rbargain {

// Finite, strictly increasing set of prices in [0,1].
struct PriceGrid {
  std::vector<double> points;

  std::size_t size() const { return points.size(); }
  bool contains(double p, double tol = 1e-12) const {
    auto it = std::lower_bound(points.begin(), points.end(), p - tol);
    return it != points.end() && std::abs(*it - p) <= tol;
  }
  // Index of the point equal to p (within tol), or npos.
  std::size_t index_of(double p, double tol = 1e-12) const {
    auto it = std::lower_bound(points.begin(), points.end(), p - tol);
    if (it == points.end() || std::abs(*it - p) > tol) return npos;
    return static_cast<std::size_t>(it - points.begin());
  }
  // Largest gap between [0,1] and the grid: max over p of the distance to
  // the nearest grid point.
  double max_distance() const {
    if (points.empty()) return 1.0;
    double d = std::max(points.front(), 1.0 - points.back());
    for (std::size_t i = 1; i < points.size(); ++i)
      d = std::max(d, 0.5 * (points[i] - points[i - 1]));
    return d;
  }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

enum class GridMode { kGeometric, kUniform };
enum class MuMode { kUniform, kSpacing };

struct GridOptions {
  // Ratio q of the sequence 1 - q^j; defaults to 1 - nu.
  std::optional<double> geometric_base;
  std::size_t max_points = 4096;
  // The geometric tail stops once 1 - p^j falls below this.
  double tail_tol = 1e-9;
};

// Anchors k*nu on [0,1], the sequence 1-(1-nu)^j and the point 1.
inline PriceGrid build_commitment_grid(double nu, const GridOptions& opt = {}) {
  require(nu > 0.0 && nu < 1.0, "nu", "grid fineness must lie in (0,1)");
  const double q = opt.geometric_base.value_or(1.0 - nu);
  require(q > 0.0 && q < 1.0, "geometric_base", "must lie in (0,1)");
  std::vector<double> pts;
  const auto k_max = static_cast<std::size_t>(std::floor(1.0 / nu + 1e-9));
  for (std::size_t k = 0; k <= k_max; ++k) {
    double p = std::round(static_cast<double>(k) * nu * 1e12) / 1e12;
    if (p <= 1.0) pts.push_back(p);
  }
  double tail = 1.0;
  for (std::size_t j = 1; pts.size() < opt.max_points; ++j) {
    tail *= q;
    if (tail < opt.tail_tol) break;
    pts.push_back(1.0 - tail);
  }
  pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts)
    if (out.empty() || p - out.back() > 1e-12) out.push_back(p);
  return PriceGrid{out};
}

// Anchors only (spacing nu) plus the point 1.
inline PriceGrid build_uniform_grid(double nu) {
  require(nu > 0.0 && nu < 1.0, "nu", "grid fineness must lie in (0,1)");
  std::vector<double> out;
  const auto k_max = static_cast<std::size_t>(std::floor(1.0 / nu + 1e-9));
  for (std::size_t k = 0; k <= k_max; ++k)
    out.push_back(std::round(static_cast<double>(k) * nu * 1e12) / 1e12);
  if (1.0 - out.back() > 1e-12) out.push_back(1.0);
  return PriceGrid{out};
}

inline std::vector<double> grid_weights(const PriceGrid& g, MuMode mode) {
  const std::size_t n = g.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (mode == MuMode::kSpacing && n > 1) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double lo = i == 0 ? g.points[0] : g.points[i - 1];
      double hi = i + 1 == n ? g.points[n - 1] : g.points[i + 1];
      w[i] = std::max(hi - lo, 1e-12);
      total += w[i];
    }
    for (double& x : w) x /= total;
  }
  return w;
}

struct GameParams {
  std::vector<double> costs;           // theta_1 < ... < theta_n
  std::vector<double> adoption_costs;  // c_1 > ... > c_n = 0, or empty
  double r_b = 1.0;
  double r_s = 1.0;
  double eps = 0.01;
  double nu = 0.02;
  PriceGrid buyer_grid;
  PriceGrid seller_grid;
  std::vector<double> mu_b;
  std::vector<double> mu_s;
};

inline GameParams validate_params(const GameParams& raw) {
  const auto& th = raw.costs;
  require(!th.empty(), "costs", "at least one cost type is required");
  for (double t : th)
    require(t > 0.0 && t < 1.0, "costs", "each cost must lie in (0,1)");
  for (std::size_t i = 1; i < th.size(); ++i) {
    require(th[i] != th[i - 1], "costs", "degenerate costs (equal types)");
    require(th[i] > th[i - 1], "costs", "costs not increasing");
  }
  const auto& c = raw.adoption_costs;
  if (!c.empty()) {
    require(c.size() == th.size(), "adoption_costs",
            "one adoption cost per technology is required");
    for (std::size_t i = 1; i < c.size(); ++i)
      require(c[i] < c[i - 1], "adoption_costs", "adoption costs not decreasing");
    require(c.back() == 0.0, "adoption_costs", "default technology must cost 0");
  }
  require(raw.r_b > 0.0, "r_b", "discount rate must be positive");
  require(raw.r_s > 0.0, "r_s", "discount rate must be positive");
  require(raw.eps > 0.0 && raw.eps < 1.0, "eps", "ε must be interior");
  require(raw.nu > 0.0 && raw.nu < 1.0, "nu", "ν must be interior");

  auto check_grid = [&](const PriceGrid& g, const std::vector<double>& mu,
                        const std::string& name) {
    require(!g.points.empty(), name, "grid is empty");
    for (std::size_t i = 0; i < g.size(); ++i) {
      require(g.points[i] >= 0.0 && g.points[i] <= 1.0, name,
              "grid points must lie in [0,1]");
      if (i > 0)
        require(g.points[i] > g.points[i - 1], name,
                "grid not strictly increasing");
    }
    require(g.max_distance() <= raw.nu + 1e-12, name,
            "some price is farther than ν from the grid");
    require(mu.size() == g.size(), "mu", "weights must match grid size");
    double s = 0.0;
    for (double w : mu) {
      require(w > 0.0, "mu", "weights must have full support");
      s += w;
    }
    require(std::abs(s - 1.0) < 1e-9, "mu", "weights must sum to 1");
  };
  check_grid(raw.buyer_grid, raw.mu_b, "buyer_grid");
  check_grid(raw.seller_grid, raw.mu_s, "seller_grid");
  const auto& sp = raw.seller_grid.points;
  require(sp.back() == 1.0, "seller_grid", "must contain the point 1");
  require(sp.size() >= 2 && 1.0 - sp[sp.size() - 2] <= 1e-6, "seller_grid",
          "must contain prices accumulating at 1");
  return raw;
}

// Assembles and validates params from primitives.
inline GameParams make_params(std::vector<double> costs,
                              std::vector<double> adoption_costs, double r_b,
                              double r_s, double eps, double nu,
                              GridMode grid_mode = GridMode::kGeometric,
                              MuMode mu_mode = MuMode::kUniform) {
  GameParams p;
  p.costs = std::move(costs);
  p.adoption_costs = std::move(adoption_costs);
  p.r_b = r_b;
  p.r_s = r_s;
  p.eps = eps;
  p.nu = nu;
  require(nu > 0.0 && nu < 1.0, "nu", "ν must be interior");
  p.seller_grid = build_commitment_grid(nu);
  p.buyer_grid =
      grid_mode == GridMode::kUniform ? build_uniform_grid(nu) : p.seller_grid;
  p.mu_b = grid_weights(p.buyer_grid, mu_mode);
  p.mu_s = grid_weights(p.seller_grid, mu_mode);
  return validate_params(p);
}

inline double rubinstein_price(double theta, double r_b, double r_s) {
  require(r_b > 0.0 && r_s > 0.0, "r", "discount rates must be positive");
  return r_b / (r_b + r_s) + theta * r_s / (r_b + r_s);
}

inline double rubinstein_price(double theta) { return (1.0 + theta) / 2.0; }

struct BenchmarkOutcome {
  bool adopt = false;
  double price = 0.0;
  double buyer_payoff = 0.0;
  double seller_payoff = 0.0;
  bool efficient = false;
};

// Adoption observed by the buyer before bargaining.
inline BenchmarkOutcome observable_benchmark(double theta1, double theta2,
                                             double c, double r_b = 1.0,
                                             double r_s = 1.0) {
  require(theta1 > 0.0 && theta1 < theta2 && theta2 < 1.0, "costs",
          "costs not increasing");
  require(c > 0.0, "c", "adoption cost must be positive");
  const double p1 = rubinstein_price(theta1, r_b, r_s);
  const double p2 = rubinstein_price(theta2, r_b, r_s);
  BenchmarkOutcome out;
  out.adopt = c <= (p1 - theta1) - (p2 - theta2);
  out.price = out.adopt ? p1 : p2;
  out.buyer_payoff = 1.0 - out.price;
  out.seller_payoff =
      out.adopt ? out.price - theta1 - c : out.price - theta2;
  out.efficient = out.adopt == (c < theta2 - theta1);
  return out;
}

// Flat key=value configuration. Lines starting with '#' are comments.
struct Config {
  std::vector<double> theta{0.1, 0.7};
  std::vector<double> adoption_costs;
  double r_b = 1.0;
  double r_s = 1.0;
  double eps = 0.01;
  double nu = 0.02;
  GridMode grid_mode = GridMode::kGeometric;
  MuMode mu_mode = MuMode::kUniform;
  std::uint64_t seed = 1;

  GameParams to_params() const {
    return make_params(theta, adoption_costs, r_b, r_s, eps, nu, grid_mode,
                       mu_mode);
  }
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidParameter(key, "not a number: '" + v + "'");
  }
}

inline std::vector<double> parse_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

inline void apply_config_entry(Config& cfg, const std::string& key_raw,
                               const std::string& value_raw) {
  const std::string key = trim(key_raw);
  const std::string v = trim(value_raw);
  if (key == "theta") {
    cfg.theta = parse_list(key, v);
  } else if (key == "adoption_costs") {
    cfg.adoption_costs = parse_list(key, v);
  } else if (key == "r_b") {
    cfg.r_b = parse_double(key, v);
  } else if (key == "r_s") {
    cfg.r_s = parse_double(key, v);
  } else if (key == "eps") {
    cfg.eps = parse_double(key, v);
  } else if (key == "nu") {
    cfg.nu = parse_double(key, v);
  } else if (key == "grid_mode") {
    if (v == "geometric") cfg.grid_mode = GridMode::kGeometric;
    else if (v == "uniform") cfg.grid_mode = GridMode::kUniform;
    else throw InvalidParameter(key, "expected geometric or uniform");
  } else if (key == "mu_mode") {
    if (v == "uniform") cfg.mu_mode = MuMode::kUniform;
    else if (v == "spacing") cfg.mu_mode = MuMode::kSpacing;
    else throw InvalidParameter(key, "expected uniform or spacing");
  } else if (key == "seed") {
    try {
      cfg.seed = std::stoull(v);
    } catch (const std::exception&) {
      throw InvalidParameter(key, "not an unsigned integer: '" + v + "'");
    }
  } else {
    throw InvalidParameter(key, "unknown configuration key");
  }
}

// Applies "key=value" to cfg.
inline void apply_override(Config& cfg, const std::string& kv) {
  const auto eq = kv.find('=');
  require(eq != std::string::npos, "override", "expected key=value: " + kv);
  apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
}

inline Config parse_config(std::istream& in, Config cfg = {}) {
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    apply_override(cfg, line);
  }
  return cfg;
}

inline Config load_config(const std::string& path, Config cfg = {}) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "config", "cannot open " + path);
  return parse_config(in, std::move(cfg));
}

}  // namespace rbargain

#endif  // RBARGAIN_PARAMS_HPP_
