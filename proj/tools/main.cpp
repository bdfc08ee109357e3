#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zdforge/equilibrium.hpp"
#include "zdforge/evaluation.hpp"
#include "zdforge/io.hpp"
#include "zdforge/parallel.hpp"
#include "zdforge/scenarios.hpp"
#include "zdforge/zd.hpp"

namespace {

using namespace zdforge;

// Exit codes: 0 ok, 2 bad parameters, 3 empty region, 4 gamma out of range,
// 5 unsupported size.
constexpr int kExitBadParams = 2;
constexpr int kExitEmptyRegion = 3;
constexpr int kExitGammaRange = 4;
constexpr int kExitUnsupported = 5;

std::vector<double> uniform_weights(int n) {
  return std::vector<double>(n - 1, 1.0 / (n - 1));
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) w.push_back(std::stod(item));
  return w;
}

int cmd_gen(const std::string& kind, int n, double r, double c, double b, double theta,
            const std::string& shares, const std::string& benefits, std::uint64_t seed,
            std::optional<double> delta_opt, const std::string& out) {
  const double delta = delta_opt.value_or(0.9);
  GameSpec game;
  if (kind == "pgg") {
    game = gen_pgg(n, r, c, delta);
  } else if (kind == "snowdrift") {
    game = gen_snowdrift(n, b, c, delta);
  } else if (kind == "async_pgg") {
    game = gen_async_pgg(parse_weights(shares), r, c, delta);
  } else if (kind == "async_snowdrift") {
    game = gen_async_snowdrift(parse_weights(benefits), c, delta);
  } else if (kind == "security") {
    game = gen_security(n, seed, delta);
  } else if (kind == "uav" || kind == "uav_random") {
    game = gen_uav_random(n, theta, seed, delta_opt.value_or(0.9));
  } else if (kind == "mtd" || kind == "mtd_random") {
    game = gen_mtd_random(seed, delta);
  } else {
    throw DomainError("unknown scenario kind: " + kind);
  }
  write_game_file(out, game);
  std::cout << "n=" << game.n << " delta=" << format_double(game.delta) << " kind=" << kind
            << "\n";
  return 0;
}

int cmd_zd(const std::string& game_path, const std::string& omega_text,
           std::optional<double> gamma_opt, const std::string& extreme,
           const std::string& out_base) {
  const std::string game_text = read_text_file(game_path);
  GameSpec game = parse_game_json(game_text);
  double leader_init = game.initial_probs[0];
  std::vector<double> omega;
  // An equalizer block embedded in the game file supplies defaults that
  // explicit flags still override.
  if (game_json_has_equalizer(game_text)) {
    EqualizerSpec embedded = parse_equalizer_json(game_text, game.n);
    omega = embedded.omega;
    leader_init = embedded.leader_init;
    if (!gamma_opt) gamma_opt = embedded.gamma;
  }
  if (!omega_text.empty()) omega = parse_weights(omega_text);
  if (omega.empty()) omega = uniform_weights(game.n);

  FeasibleRegion region = feasibility_region(game, omega, leader_init);
  {
    std::ostringstream cons, verts;
    write_region_constraints_csv(cons, region);
    write_region_vertices_csv(verts, region);
    write_text_file(out_base + ".constraints.csv", cons.str());
    write_text_file(out_base + ".vertices.csv", verts.str());
  }
  if (region.empty) {
    std::cout << "no equalizer exists\n";
    return kExitEmptyRegion;
  }
  std::cout << "gamma_minus=" << format_double(region.gamma_minus)
            << " gamma_plus=" << format_double(region.gamma_plus) << "\n";

  EqualizerSpec spec;
  spec.omega = omega;
  spec.leader_init = leader_init;
  if (gamma_opt) {
    spec.gamma = *gamma_opt;
    if (spec.gamma < region.gamma_minus || spec.gamma > region.gamma_plus) {
      std::cerr << "gamma " << format_double(spec.gamma) << " outside ["
                << format_double(region.gamma_minus) << ", "
                << format_double(region.gamma_plus) << "]\n";
      return kExitGammaRange;
    }
    auto range = phi_range_for_gamma(game, omega, leader_init, spec.gamma);
    if (!range) {
      std::cerr << "gamma " << format_double(spec.gamma) << " outside ["
                << format_double(region.gamma_minus) << ", "
                << format_double(region.gamma_plus) << "]\n";
      return kExitGammaRange;
    }
    spec.phi = 0.5 * (range->first + range->second);
  } else if (extreme == "minus") {
    spec.gamma = region.gamma_minus;
    spec.phi = region.minus_witness.u;
  } else {
    spec.gamma = region.gamma_plus;
    spec.phi = region.plus_witness.u;
  }
  MemoryOneStrategy strategy = synthesize_equalizer(game, spec);
  write_text_file(out_base + ".strategy.json",
                     equalizer_strategy_to_json(game, spec, strategy));
  std::cout << "gamma=" << format_double(spec.gamma) << " phi=" << format_double(spec.phi)
            << " strategy=" << out_base << ".strategy.json\n";
  return 0;
}

std::string gap_report_json(const GapReport& report) {
  std::ostringstream out;
  out << "{\n"
      << "  \"sse_value\": " << format_double(report.sse_value) << ",\n"
      << "  \"zd_value\": " << format_double(report.zd_value) << ",\n"
      << "  \"gap\": " << format_double(report.gap) << ",\n"
      << "  \"gamma_minus\": " << format_double(report.gamma_minus) << ",\n"
      << "  \"gamma_plus\": " << format_double(report.gamma_plus) << ",\n"
      << "  \"witness\": \"" << (report.witness == '+' ? "plus" : "minus") << "\",\n"
      << "  \"heuristic\": true\n"
      << "}\n";
  return out.str();
}

int cmd_gap(const std::string& game_path, const std::string& omega_text, const std::string& out,
            double tolerance) {
  GameSpec game = read_game_file(game_path);
  std::vector<double> omega =
      omega_text.empty() ? uniform_weights(game.n) : parse_weights(omega_text);
  GapReport report = gap_report(game, omega, tolerance);
  if (report.follower_tables_differ)
    std::cerr << "warning: follower tables differ; the extreme-equalizer bound assumes "
                 "identical follower payoffs\n";
  if (report.zd.interior_beats_extremes)
    std::cerr << "note: interior gamma " << format_double(report.zd.best_interior_gamma)
              << " beats both extremes (value " << format_double(report.zd.best_interior_value)
              << ")\n";
  std::cout << "sse_value=" << format_double(report.sse_value)
            << " zd_value=" << format_double(report.zd_value)
            << " gap=" << format_double(report.gap) << " heuristic=true\n";
  if (!out.empty()) write_text_file(out, gap_report_json(report));
  return 0;
}

int cmd_sweep(int n, std::uint64_t seed, int steps, double delta, const std::string& out,
              double tolerance) {
  if (steps < 1) throw DomainError("at least one theta step required");
  UavDraws draws = uav_draws(n, seed);
  std::vector<std::string> rows(steps);
  std::vector<std::string> warnings(steps);
  parallel_for(steps, [&](int k) {
    const double theta = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
    GameSpec game = uav_game(draws, theta, delta);
    try {
      GapReport report = gap_report(game, uniform_weights(n), tolerance);
      std::ostringstream row;
      row << format_double(theta) << ',' << format_double(report.sse_value) << ','
          << format_double(report.zd_value) << ',' << format_double(report.gamma_minus) << ','
          << format_double(report.gamma_plus) << ',' << format_double(report.gap) << "\n";
      rows[k] = row.str();
    } catch (const EmptyRegionError&) {
      warnings[k] = "theta=" + format_double(theta) + ": no equalizer exists; row skipped\n";
    }
  });
  std::ostringstream csv;
  csv << "theta,sse,zd,gamma_minus,gamma_plus,gap\n";
  for (const std::string& r : rows) csv << r;
  for (const std::string& w : warnings)
    if (!w.empty()) std::cerr << w;
  write_text_file(out, csv.str());
  std::cout << "rows=" << std::count_if(rows.begin(), rows.end(),
                                        [](const std::string& r) { return !r.empty(); })
            << " out=" << out << "\n";
  return 0;
}

int cmd_trace(const std::string& game_path, const std::string& leader_kind, int horizon,
              std::uint64_t seed, const std::string& out, double tolerance) {
  GameSpec game = read_game_file(game_path);
  const std::vector<double> omega = uniform_weights(game.n);

  MemoryOneStrategy leader;
  if (leader_kind == "uniform") {
    leader.probs.assign(game.state_count(), 0.5);
    leader.init_prob = game.initial_probs[0];
  } else if (leader_kind == "sse") {
    leader = sse_solve(game, tolerance).leader;
  } else if (leader_kind == "zd-plus" || leader_kind == "zd-minus") {
    ZdBest zd = best_zd_value(game, omega, tolerance);
    leader = leader_kind == "zd-plus" ? zd.pi_plus : zd.pi_minus;
  } else {
    throw DomainError("leader must be one of zd-plus, zd-minus, sse, uniform");
  }

  FollowerProfile fp = follower_profile_br(game, leader, tolerance);
  std::vector<MemoryOneStrategy> profile;
  profile.push_back(leader);
  for (int f = 0; f < game.n - 1; ++f)
    profile.push_back(fp.strategies[f].to_strategy(game.initial_probs[f + 1]));

  Trace trace = simulate(game, profile, horizon, seed);
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  write_text_file(out, csv.str());

  std::cout << "return_p1=" << format_double(trace.discounted_returns[0]);
  if (has_mtd_structure(game)) {
    // Fraction of stages where the defender guards the attacked target.
    int matches = 0;
    for (const TraceRecord& rec : trace.records)
      if (rec.profile[0] == rec.profile[1]) ++matches;
    std::cout << " match_rate="
              << format_double(static_cast<double>(matches) / trace.records.size());
  }
  std::cout << " out=" << out << "\n";
  return 0;
}

int cmd_eval(const std::string& game_path, const std::string& strategies_path) {
  GameSpec game = read_game_file(game_path);
  std::vector<MemoryOneStrategy> strategies =
      read_strategies_file(strategies_path, game.state_count());
  if (static_cast<int>(strategies.size()) != game.n)
    throw DomainError("expected one strategy per player");
  EvalResult result = analytic_utility(game, strategies);
  for (int i = 0; i < game.n; ++i)
    std::cout << "U" << (i + 1) << "=" << format_double(result.utilities[i]) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equalizer strategy synthesis and Stackelberg comparison for discounted "
               "repeated two-action games"};
  app.require_subcommand(1);
  double tolerance = 1e-9;
  app.add_option("--tolerance", tolerance, "best-response tie tolerance")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a game file");
  std::string kind, shares, benefits, out = "game.json";
  int n = 2;
  double r = 2.0, c = 1.0, b = 3.0, theta = 0.0;
  std::optional<double> delta_opt;
  std::uint64_t seed = 0;
  gen->add_option("kind", kind,
                  "pgg|snowdrift|async_pgg|async_snowdrift|security|uav|mtd")->required();
  gen->add_option("--n", n, "player count");
  gen->add_option("--r", r, "enhancement factor");
  gen->add_option("--c", c, "contribution / clearing cost");
  gen->add_option("--b", b, "snowdrift benefit");
  gen->add_option("--theta", theta, "sweep parameter in [0,1]");
  gen->add_option("--shares", shares, "comma list of share factors (async_pgg)");
  gen->add_option("--benefits", benefits, "comma list of benefits (async_snowdrift)");
  gen->add_option("--seed", seed, "random seed");
  double delta_value = 0.9;
  auto* delta_flag = gen->add_option("--delta", delta_value, "discount factor");
  gen->add_option("--out", out, "output path")->capture_default_str();

  // zd
  auto* zd = app.add_subcommand("zd", "feasibility region and equalizer synthesis");
  std::string zd_game, zd_omega, zd_extreme = "plus", zd_out = "zd";
  std::optional<double> zd_gamma;
  double zd_gamma_value = 0.0;
  zd->add_option("game", zd_game, "game JSON file")->required();
  zd->add_option("--omega", zd_omega, "comma list of follower weights (default uniform)");
  auto* zd_gamma_opt = zd->add_option("--gamma", zd_gamma_value, "target value to enforce");
  zd->add_option("--extreme", zd_extreme, "plus|minus (used when --gamma is absent)");
  zd->add_option("--out", zd_out, "output base path")->capture_default_str();

  // gap
  auto* gap = app.add_subcommand("gap", "leader value: equalizer extremes vs Stackelberg");
  std::string gap_game, gap_omega, gap_out;
  gap->add_option("game", gap_game, "game JSON file")->required();
  gap->add_option("--omega", gap_omega, "comma list of follower weights (default uniform)");
  gap->add_option("--out", gap_out, "write the report JSON here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "theta sweep over one random draw");
  int sweep_n = 2, sweep_steps = 33;
  std::uint64_t sweep_seed = 0;
  double sweep_delta = 0.9;
  std::string sweep_out = "sweep.csv";
  sweep->add_option("--n", sweep_n, "player count (2 or 3)");
  sweep->add_option("--seed", sweep_seed, "random seed for the payoff draws");
  sweep->add_option("--theta-steps", sweep_steps, "grid points on [0,1]")->capture_default_str();
  sweep->add_option("--delta", sweep_delta, "discount factor")->capture_default_str();
  sweep->add_option("--out", sweep_out, "output CSV")->capture_default_str();

  // trace
  auto* trace = app.add_subcommand("trace", "seeded rollout against best-responding followers");
  std::string trace_game, trace_leader = "zd-plus", trace_out = "trace.csv";
  int trace_T = 100;
  std::uint64_t trace_seed = 0;
  trace->add_option("game", trace_game, "game JSON file")->required();
  trace->add_option("--leader", trace_leader, "zd-plus|zd-minus|sse|uniform")
      ->capture_default_str();
  trace->add_option("--horizon", trace_T, "stages to simulate")->capture_default_str();
  trace->add_option("--seed", trace_seed, "simulation seed");
  trace->add_option("--out", trace_out, "output CSV")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "utilities of an explicit strategy profile");
  std::string eval_game, eval_strategies;
  eval->add_option("game", eval_game, "game JSON file")->required();
  eval->add_option("--strategies", eval_strategies, "strategy profile JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadParams;
  }

  try {
    if (gen->parsed()) {
      if (!delta_flag->empty()) delta_opt = delta_value;
      return cmd_gen(kind, n, r, c, b, theta, shares, benefits, seed, delta_opt, out);
    }
    if (zd->parsed()) {
      if (!zd_gamma_opt->empty()) zd_gamma = zd_gamma_value;
      return cmd_zd(zd_game, zd_omega, zd_gamma, zd_extreme, zd_out);
    }
    if (gap->parsed()) return cmd_gap(gap_game, gap_omega, gap_out, tolerance);
    if (sweep->parsed())
      return cmd_sweep(sweep_n, sweep_seed, sweep_steps, sweep_delta, sweep_out, tolerance);
    if (trace->parsed())
      return cmd_trace(trace_game, trace_leader, trace_T, trace_seed, trace_out, tolerance);
    if (eval->parsed()) return cmd_eval(eval_game, eval_strategies);
  } catch (const EmptyRegionError& e) {
    std::cout << e.what() << "\n";
    return kExitEmptyRegion;
  } catch (const InfeasibleEqualizerError& e) {
    std::cerr << e.what() << "\n";
    return kExitGammaRange;
  } catch (const UnsupportedSizeError& e) {
    std::cerr << e.what() << "\n";
    return kExitUnsupported;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitBadParams;
  }
  return 0;
}
