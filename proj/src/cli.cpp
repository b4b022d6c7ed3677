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

#include "rbargain/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbargain/rbargain.hpp"

namespace rbargain {
namespace {

// Thrown when certification fails after the artifact is written.
struct FailedCheck {};

struct UsageError {
  std::string what;
};

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_path;
  std::string format = "json";
  std::optional<double> theta1, theta2, c;
  std::optional<std::uint64_t> seed;

  // woa and simulate
  double p_b = 0.5, p_s = 0.8, eps_b = 0.1, eps_s = 0.1;
  std::vector<double> pi_hat;
  // solve-exo, simulate, verify
  std::vector<double> pi;
  std::optional<double> pi1;
  // sweep
  std::vector<std::string> axes, quantities;
  std::string mode = "auto";
  std::string check;
  std::string preset;
  // simulate
  std::string kind;
  std::size_t paths = 100000;
  std::string paths_csv;
  std::size_t paths_cap = 10000;
  // verify
  std::string policy = "highest-conceding";
  std::optional<double> tolerance;
};

Config build_config(const Options& o) {
  Config cfg;
  if (const char* env = std::getenv("RBARGAIN_SEED"); env && *env)
    apply_config_entry(cfg, "seed", env);
  if (!o.config_path.empty()) cfg = load_config(o.config_path, cfg);
  for (const auto& s : o.sets) apply_override(cfg, s);
  if (o.theta1 || o.theta2) {
    require(cfg.theta.size() == 2, "theta", "--theta1/--theta2 need two cost types");
    if (o.theta1) cfg.theta[0] = *o.theta1;
    if (o.theta2) cfg.theta[1] = *o.theta2;
  }
  if (o.c) cfg.adoption_costs = {*o.c, 0.0};
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

std::pair<double, double> binary_costs(const Config& cfg) {
  require(cfg.theta.size() == 2, "theta", "two cost types are required");
  require_binary(cfg.theta[0], cfg.theta[1]);
  return {cfg.theta[0], cfg.theta[1]};
}

double adoption_cost(const Config& cfg) {
  require(cfg.adoption_costs.size() == 2, "c", "an adoption cost is required (--c)");
  return cfg.adoption_costs[0];
}

std::vector<double> type_distribution(const Options& o, std::size_t n) {
  if (!o.pi.empty()) return o.pi;
  if (o.pi1) {
    require(n == 2, "pi1", "--pi1 needs two cost types");
    return {*o.pi1, 1.0 - *o.pi1};
  }
  throw InvalidParameter("pi", "a cost distribution is required (--pi or --pi1)");
}

std::string fmt(double x) { return format_number(round12(x)); }

class Emitter {
 public:
  Emitter(const Options& o, std::ostream& out, std::ostream& err)
      : o_(o), out_(out), err_(err) {}

  void emit(const std::string& artifact, const std::string& summary) {
    if (o_.out_path.empty()) {
      out_ << artifact;
      if (!artifact.empty() && artifact.back() != '\n') out_ << '\n';
      err_ << summary << '\n';
    } else {
      std::ofstream f(o_.out_path, std::ios::binary);
      require(static_cast<bool>(f), "out", "cannot write " + o_.out_path);
      f << artifact;
      if (!artifact.empty() && artifact.back() != '\n') f << '\n';
      out_ << summary << '\n';
    }
  }
  void json(const Json& j, const std::string& summary) {
    if (o_.format != "json") throw UsageError{"csv output is only available for sweep"};
    emit(dump_artifact(j), summary);
  }

 private:
  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

// regime ---------------------------------------------------------------------

void cmd_regime(const Options& o, Emitter& em) {
  const Config cfg = build_config(o);
  if (cfg.theta.size() > 2) {
    const RegimeMulti r = classify_regime_multi(cfg.theta, cfg.adoption_costs, cfg.r_b, cfg.r_s);
    em.json(Json(r), "regime: " + r.label + " j_o=" + std::to_string(r.j_o));
    return;
  }
  const auto [t1, t2] = binary_costs(cfg);
  const double c = adoption_cost(cfg);
  const Regime reg = classify_regime(t1, t2, c, cfg.r_b, cfg.r_s);
  const auto eqs = limit_equilibria_endogenous(t1, t2, c, cfg.r_b, cfg.r_s);
  const auto worst = worst_adoption_delay(t1, t2, c);
  Json j = reg;
  j["pi_star"] = pi_star(t1, t2, cfg.r_b, cfg.r_s);
  try {
    j["rho_star"] = rho_star(t1, t2, c);
  } catch (const InvalidParameter&) {
    j["rho_star"] = nullptr;
  }
  j["adoption_prob"] = worst.first;
  j["expected_delay"] = worst.second;
  j["equilibria"] = eqs;
  em.json(j, std::string("regime: ") + to_string(reg.label) + (reg.boundary ? " (boundary)" : "") +
                 " expected_delay=" + fmt(worst.second));
}

// solve-exo / solve-endo ------------------------------------------------------

void cmd_solve_exo(const Options& o, Emitter& em) {
  const Config cfg = build_config(o);
  require_costs(cfg.theta);
  const auto pi = type_distribution(o, cfg.theta.size());
  const LimitEquilibrium eq = limit_equilibrium_exogenous(pi, cfg.theta, cfg.r_b, cfg.r_s);
  em.json(Json(eq), "solve-exo: " + eq.regime_label + " i*=" + std::to_string(eq.i_star) +
                        " offer=" + fmt(eq.buyer_offer) + " welfare_loss=" +
                        fmt(eq.welfare_loss));
}

void cmd_solve_endo(const Options& o, Emitter& em) {
  const Config cfg = build_config(o);
  if (cfg.theta.size() > 2) {
    const RegimeMulti r = classify_regime_multi(cfg.theta, cfg.adoption_costs, cfg.r_b, cfg.r_s);
    em.json(Json(r), "solve-endo: " + r.label + " adoption_prob=" + fmt(r.adoption_prob));
    return;
  }
  const auto [t1, t2] = binary_costs(cfg);
  const double c = adoption_cost(cfg);
  const Regime reg = classify_regime(t1, t2, c, cfg.r_b, cfg.r_s);
  const auto eqs = limit_equilibria_endogenous(t1, t2, c, cfg.r_b, cfg.r_s);
  Json j{{"regime", reg}, {"equilibria", eqs},
         {"benchmark", observable_benchmark(t1, t2, c, cfg.r_b, cfg.r_s)}};
  em.json(j, std::string("solve-endo: ") + to_string(reg.label) + " equilibria=" +
                 std::to_string(eqs.size()));
}

// woa --------------------------------------------------------------------------

WoaSolution solve_from_options(const Options& o, const Config& cfg) {
  require_costs(cfg.theta);
  BeliefState b;
  b.eps_b_hat = o.eps_b;
  b.eps_s_hat = o.eps_s;
  if (!o.pi_hat.empty()) {
    b.pi_hat = o.pi_hat;
  } else {
    // Spread the rational mass in proportion to --pi, or evenly.
    const std::size_t n = cfg.theta.size();
    std::vector<double> w = o.pi.empty() ? std::vector<double>(n, 1.0 / n) : o.pi;
    for (double& x : w) x *= 1.0 - o.eps_s;
    b.pi_hat = w;
  }
  return solve_woa(o.p_b, o.p_s, b, cfg.theta, cfg.r_b, cfg.r_s);
}

void cmd_woa(const Options& o, Emitter& em) {
  const Config cfg = build_config(o);
  const WoaSolution sol = solve_from_options(o, cfg);
  em.json(Json(sol), std::string("woa: weak=") + to_string(sol.weak) + " L=" + fmt(sol.L) +
                         " c_b=" + fmt(sol.c_b) + " c_s=" + fmt(sol.c_s) +
                         " T_end=" + fmt(sol.T_end));
}

// sweep ------------------------------------------------------------------------

Axis parse_axis(const std::string& s) {
  const auto eq = s.find('=');
  require(eq != std::string::npos, "axis", "expected name=lo:hi:step or name=v1,v2,...");
  Axis a;
  a.name = trim(s.substr(0, eq));
  const std::string spec = s.substr(eq + 1);
  if (spec.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_double("axis", item));
    require(parts.size() == 3, "axis", "expected lo:hi:step");
    a.values = linspace_step(parts[0], parts[1], parts[2]);
  } else {
    a.values = parse_list("axis", spec);
  }
  return a;
}

std::string quantity_name(const std::string& q) {
  if (q == "delay") return "expected_delay";
  if (q == "adoption") return "adoption_prob";
  return q;
}

void cmd_sweep(const Options& o, Emitter& em) {
  Options opt = o;
  if (opt.preset == "figure1" || opt.preset == "figure2") {
    if (!opt.theta1) opt.theta1 = 0.05;
    opt.axes = {"delta=0:1:0.01", "c=0:1:0.01"};
    if (opt.mode == "auto") opt.mode = "endo";
    if (opt.quantities.empty()) opt.quantities = {"adoption_prob", "expected_delay"};
  } else {
    if (!opt.preset.empty()) throw UsageError{"unknown preset '" + opt.preset + "'"};
  }
  const Config cfg = build_config(opt);
  require(cfg.theta.size() == 2, "theta", "sweeps need two cost types");
  SweepSpec spec;
  spec.theta1 = cfg.theta[0];
  spec.theta2 = cfg.theta[1];
  spec.r_b = cfg.r_b;
  spec.r_s = cfg.r_s;
  if (opt.pi1) spec.pi1 = *opt.pi1;
  if (cfg.adoption_costs.size() == 2) spec.c = cfg.adoption_costs[0];
  require(!opt.axes.empty(), "axis", "at least one --axis is required");
  bool endo_axis = false;
  for (const auto& a : opt.axes) {
    spec.axes.push_back(parse_axis(a));
    endo_axis = endo_axis || spec.axes.back().name == "c";
  }
  if (opt.mode == "auto")
    spec.mode = endo_axis || opt.c ? SweepMode::kEndogenous : SweepMode::kExogenous;
  else if (opt.mode == "endo")
    spec.mode = SweepMode::kEndogenous;
  else if (opt.mode == "exo")
    spec.mode = SweepMode::kExogenous;
  else
    throw UsageError{"--mode expects auto, exo or endo"};
  std::vector<std::string> qs;
  for (const auto& q : opt.quantities) qs.push_back(quantity_name(q));
  const SweepTable table = sweep(spec, qs);

  std::map<std::string, int> counts;
  std::size_t boundaries = 0;
  for (const auto& r : table.rows) {
    ++counts[r.regime];
    boundaries += r.boundary ? 1 : 0;
  }
  std::string summary = "sweep: " + std::to_string(table.rows.size()) + " rows";
  for (const auto& [k, v] : counts) summary += " " + k + "=" + std::to_string(v);
  summary += " boundary=" + std::to_string(boundaries);

  bool failed = false;
  std::optional<MonotonicityReport> mono;
  if (!opt.check.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(opt.check);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 2 || parts.size() > 3 ||
        (parts[1] != "increasing" && parts[1] != "decreasing") ||
        (parts.size() == 3 && parts[2] != "strict"))
      throw UsageError{"--check expects quantity:increasing|decreasing[:strict]"};
    MonotonicityClaim claim;
    claim.quantity = quantity_name(parts[0]);
    claim.increasing = parts[1] == "increasing";
    claim.strict = parts.size() == 3;
    mono = check_monotonicity(table, claim);
    failed = !mono->holds;
    summary += std::string(" check=") + (mono->holds ? "pass" : "FAIL") + " (" +
               std::to_string(mono->pairs_checked) + " pairs)";
  }

  if (opt.format == "csv") {
    std::ostringstream os;
    write_csv(os, table);
    em.emit(os.str(), summary);
  } else if (opt.format == "json") {
    Json j = table;
    if (mono) j["monotonicity"] = *mono;
    em.emit(dump_artifact(j), summary);
  }
  if (failed) throw FailedCheck{};
}

// simulate -----------------------------------------------------------------------

StrategyProfile profile_for(const Options& o, const Config& cfg, std::string& what) {
  if (o.kind == "woa") {
    what = "woa";
    return woa_profile(solve_from_options(o, cfg));
  }
  if (o.kind == "exo") {
    require_costs(cfg.theta);
    const auto eq = limit_equilibrium_exogenous(type_distribution(o, cfg.theta.size()),
                                                cfg.theta, cfg.r_b, cfg.r_s);
    what = "exo " + eq.regime_label;
    return limit_profile(eq, cfg.r_b, cfg.r_s);
  }
  if (o.kind == "endo") {
    const auto [t1, t2] = binary_costs(cfg);
    const double c = adoption_cost(cfg);
    const auto eqs = limit_equilibria_endogenous(t1, t2, c, cfg.r_b, cfg.r_s);
    what = "endo " + eqs.front().kind;
    return limit_profile(eqs.front(), t1, t2, c, cfg.r_b, cfg.r_s);
  }
  throw UsageError{"--kind expects woa, exo or endo"};
}

void cmd_simulate(const Options& o, Emitter& em) {
  const Config cfg = build_config(o);
  std::string what;
  const StrategyProfile pr = profile_for(o, cfg, what);
  require(o.paths >= 1, "paths", "at least one path is required");
  const EstimateReport rep = estimate_outcomes(pr, o.paths, cfg.seed);
  if (!o.paths_csv.empty()) {
    std::ofstream f(o.paths_csv, std::ios::binary);
    require(static_cast<bool>(f), "paths_csv", "cannot write " + o.paths_csv);
    dump_paths(pr, o.paths, cfg.seed, f, o.paths_cap);
  }
  em.json(Json(rep), "simulate: " + what + " paths=" + std::to_string(rep.n_paths) +
                         " seed=" + std::to_string(rep.seed) + " buyer_payoff=" +
                         fmt(rep.buyer_payoff.mean) + " expected_delay=" +
                         fmt(rep.expected_delay.mean));
}

// verify ---------------------------------------------------------------------------

void cmd_verify(const Options& o, Emitter& em) {
  const Config cfg = build_config(o);
  if (o.kind == "woa") {
    const WoaSolution sol = solve_from_options(o, cfg);
    const IndifferenceReport rep = verify_woa_indifference(sol, o.tolerance.value_or(1e-6));
    em.json(Json(rep), std::string("verify woa: ") + (rep.pass ? "pass" : "FAIL") +
                           " buyer_spread=" + fmt(rep.buyer_spread));
    if (!rep.pass) throw FailedCheck{};
    return;
  }
  const GameParams params = cfg.to_params();
  std::shared_ptr<LimitInstance> inst;
  if (o.kind == "exo") {
    inst = instantiate_exogenous(params, type_distribution(o, params.costs.size()), o.policy);
  } else if (o.kind == "endo") {
    inst = instantiate_endogenous(params, adoption_cost(cfg), o.policy).instance;
  } else if (o.kind == "corrupt-high") {
    inst = corrupt_high_type(params, type_distribution(o, params.costs.size()), o.policy);
  } else if (o.kind == "corrupt-buyer") {
    inst = corrupt_buyer_offer(params, type_distribution(o, params.costs.size()), o.policy);
  } else {
    throw UsageError{"--kind expects woa, exo, endo, corrupt-high or corrupt-buyer"};
  }
  VerifyOptions vo;
  vo.tolerance = o.tolerance.value_or(5e-3);
  const GapReport rep = verify_instance(*inst, vo);
  em.json(Json(rep), "verify " + o.kind + ": " + (rep.pass ? "pass" : "FAIL") +
                         " max_gain=" + fmt(rep.max_gain) + " policy=" + rep.policy);
  if (!rep.pass) throw FailedCheck{};
}

// benchmark ------------------------------------------------------------------------

void cmd_benchmark(const Options& o, Emitter& em) {
  const Config cfg = build_config(o);
  const auto [t1, t2] = binary_costs(cfg);
  const BenchmarkOutcome b = observable_benchmark(t1, t2, adoption_cost(cfg), cfg.r_b, cfg.r_s);
  em.json(Json(b), std::string("benchmark: ") + (b.adopt ? "adopt" : "no adoption") +
                       " price=" + fmt(b.price));
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "key=value configuration file");
  sub->add_option("--set", o.sets, "override a configuration key (key=value)");
  sub->add_option("--out", o.out_path, "write the artifact to this file");
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--theta1", o.theta1, "low cost");
  sub->add_option("--theta2", o.theta2, "high cost");
  sub->add_option("--c", o.c, "adoption cost of the low-cost technology");
}

void add_woa(CLI::App* sub, Options& o) {
  sub->add_option("--pb", o.p_b, "buyer's demand");
  sub->add_option("--ps", o.p_s, "seller's demand");
  sub->add_option("--eps-b", o.eps_b, "posterior that the buyer is committed");
  sub->add_option("--eps-s", o.eps_s, "posterior that the seller is committed");
  sub->add_option("--pi-hat", o.pi_hat, "posterior on each rational type")->delimiter(',');
}

void add_pi(CLI::App* sub, Options& o) {
  sub->add_option("--pi", o.pi, "cost distribution")->delimiter(',');
  sub->add_option("--pi1", o.pi1, "probability of the low cost");
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bargaining with unobservable technology adoption", "rbargain"};
  app.require_subcommand(1);
  Options o;

  auto* regime = app.add_subcommand("regime", "classify (theta1, theta2, c)");
  add_common(regime, o);
  auto* solve_exo = app.add_subcommand("solve-exo", "limit equilibrium, exogenous costs");
  add_common(solve_exo, o);
  add_pi(solve_exo, o);
  auto* solve_endo = app.add_subcommand("solve-endo", "limit equilibria with adoption");
  add_common(solve_endo, o);
  auto* woa = app.add_subcommand("woa", "war of attrition after incompatible demands");
  add_common(woa, o);
  add_woa(woa, o);
  add_pi(woa, o);
  auto* sw = app.add_subcommand("sweep", "comparative statics grid");
  add_common(sw, o);
  sw->add_option("--axis", o.axes, "name=lo:hi:step or name=v1,v2 (name: pi1 theta1 theta2 c delta)");
  sw->add_option("--quantity", o.quantities,
                 "welfare_loss expected_delay adoption_prob buyer_payoff");
  sw->add_option("--mode", o.mode, "auto, exo or endo");
  sw->add_option("--pi1", o.pi1, "probability of the low cost");
  sw->add_option("--check", o.check, "quantity:increasing|decreasing[:strict]");
  sw->add_option("--preset", o.preset, "figure1: (theta2 - theta1, c) classification grid");
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of a profile");
  add_common(sim, o);
  add_woa(sim, o);
  add_pi(sim, o);
  sim->add_option("--kind", o.kind, "woa, exo or endo")->required();
  sim->add_option("--paths", o.paths, "number of paths");
  sim->add_option("--seed", o.seed, "seed (default: config, then RBARGAIN_SEED)");
  sim->add_option("--paths-csv", o.paths_csv, "dump individual paths to this CSV");
  sim->add_option("--paths-cap", o.paths_cap, "maximum number of dumped paths");
  auto* ver = app.add_subcommand("verify", "certify a profile");
  add_common(ver, o);
  add_woa(ver, o);
  add_pi(ver, o);
  ver->add_option("--kind", o.kind, "woa, exo, endo, corrupt-high or corrupt-buyer")->required();
  ver->add_option("--policy", o.policy, "prior-restricted or highest-conceding");
  ver->add_option("--tolerance", o.tolerance, "pass threshold");
  auto* bench = app.add_subcommand("benchmark", "outcome when adoption is observable");
  add_common(bench, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (auto* s : app.get_subcommands()) out << s->help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  Emitter em(o, out, err);
  try {
    if (*regime) cmd_regime(o, em);
    else if (*solve_exo) cmd_solve_exo(o, em);
    else if (*solve_endo) cmd_solve_endo(o, em);
    else if (*woa) cmd_woa(o, em);
    else if (*sw) cmd_sweep(o, em);
    else if (*sim) cmd_simulate(o, em);
    else if (*ver) cmd_verify(o, em);
    else if (*bench) cmd_benchmark(o, em);
  } catch (const FailedCheck&) {
    return kExitFailedCheck;
  } catch (const UsageError& e) {
    err << "error: " << e.what << "\n" << app.help();
    return kExitUsage;
  } catch (const NonGeneric& e) {
    err << "error: " << e.what();
    for (const auto& c : e.candidates()) err << " [" << c << "]";
    err << '\n';
    return kExitPrecondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
  return kExitOk;
}

}  // namespace rbargain
