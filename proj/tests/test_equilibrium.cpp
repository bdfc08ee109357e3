#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "zdforge/equilibrium.hpp"
#include "zdforge/evaluation.hpp"
#include "zdforge/rng.hpp"
#include "zdforge/scenarios.hpp"

using namespace zdforge;

namespace {

GameSpec random_game(int n, double delta, SplitMix64& rng) {
  GameSpec g;
  g.n = n;
  g.delta = delta;
  g.tables.assign(n, PayoffTable{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)});
  g.initial_probs.assign(n, 0.0);
  for (auto& t : g.tables)
    for (int k = 0; k < n; ++k) {
      t.act1[k] = rng.uniform(0.0, 4.0);
      t.act2[k] = rng.uniform(0.0, 4.0);
    }
  return g;
}

MemoryOneStrategy random_leader(int n, SplitMix64& rng, double init) {
  MemoryOneStrategy s;
  s.probs.resize(1 << n);
  for (double& p : s.probs) p = rng.next_double();
  s.init_prob = init;
  return s;
}

}  // namespace

TEST_CASE("pure strategy enumeration order and budgets") {
  CHECK(pure_strategy_count(2) == 16);
  CHECK(pure_strategy_count(3) == 256);
  CHECK_THROWS_AS(pure_strategy_count(5), UnsupportedSizeError);

  auto all2 = all_pure_strategies(2);
  CHECK(all2.size() == 16);
  for (int j = 1; j <= 4; ++j) CHECK(all2.front().bit(j) == 0);  // opens with action 2
  CHECK(all2.front().to_strategy(0.0).probs == std::vector<double>{0.0, 0.0, 0.0, 0.0});
  CHECK(all2.back().to_strategy(0.0).probs == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  // Ascending ids read the state-1 probability off the top bit.
  CHECK(all2[8].bit(1) == 1);
  CHECK(all2[8].bit(2) == 0);
  CHECK(all_pure_strategies(3).size() == 256);
}

TEST_CASE("a payoff-flat follower is indifferent and the pick favors the leader") {
  SplitMix64 rng(81);
  GameSpec g = random_game(2, 0.9, rng);
  g.tables[1] = PayoffTable{{2.0, 2.0}, {2.0, 2.0}};
  MemoryOneStrategy leader = random_leader(2, rng, 0.0);
  BestResponse br = best_response(g, leader, {}, 2);
  CHECK(br.set.size() == 16);
  CHECK(br.follower_value == doctest::Approx(2.0).epsilon(1e-12));
  // The optimistic pick must dominate every member's leader value.
  for (const PureStrategy& s : br.set) {
    std::vector<MemoryOneStrategy> profile = {leader, s.to_strategy(0.0)};
    CHECK(br.leader_value >= analytic_utility(g, profile).utilities[0] - 1e-12);
  }
}

TEST_CASE("an equalizer leader flattens the follower's choice and keeps the best") {
  SplitMix64 rng(82);
  int tested = 0;
  for (int rep = 0; rep < 400 && tested < 6; ++rep) {
    GameSpec g = random_game(2, 0.9, rng);
    FeasibleRegion region = feasibility_region(g, {1.0}, 0.0);
    if (region.empty) continue;
    ++tested;
    EqualizerSpec spec;
    spec.omega = {1.0};
    spec.leader_init = 0.0;
    spec.gamma = region.gamma_plus;
    spec.phi = region.plus_witness.u;
    MemoryOneStrategy zd = synthesize_equalizer(g, spec);

    BestResponse br = best_response(g, zd, {}, 2);
    CHECK(br.set.size() == 16);  // every pure strategy earns gamma
    double best_leader = -1e30;
    for (const PureStrategy& s : all_pure_strategies(2)) {
      std::vector<MemoryOneStrategy> profile = {zd, s.to_strategy(0.0)};
      EvalResult ev = analytic_utility(g, profile);
      CHECK(std::fabs(ev.utilities[1] - spec.gamma) <= 1e-9);
      best_leader = std::max(best_leader, ev.utilities[0]);
    }
    CHECK(br.leader_value == doctest::Approx(best_leader).epsilon(1e-10));
  }
  CHECK(tested == 6);
}

TEST_CASE("pure best responses dominate random mixed strategies") {
  SplitMix64 rng(83);
  GameSpec g = random_game(2, 0.9, rng);
  MemoryOneStrategy leader = random_leader(2, rng, 0.0);
  BestResponse br = best_response(g, leader, {}, 2);
  for (int t = 0; t < 1000; ++t) {
    MemoryOneStrategy mixed = random_leader(2, rng, 0.0);
    std::vector<MemoryOneStrategy> profile = {leader, mixed};
    CHECK(br.follower_value >= analytic_utility(g, profile).utilities[1] - 1e-9);
  }
}

TEST_CASE("two players: the joint profile is just the single best response") {
  SplitMix64 rng(84);
  for (int rep = 0; rep < 10; ++rep) {
    GameSpec g = random_game(2, 0.9, rng);
    MemoryOneStrategy leader = random_leader(2, rng, 0.0);
    BestResponse br = best_response(g, leader, {}, 2);
    FollowerProfile fp = follower_profile_br(g, leader);
    REQUIRE(fp.strategies.size() == 1);
    CHECK(fp.strategies[0].code == br.pick.code);
    CHECK(fp.leader_value == doctest::Approx(br.leader_value).epsilon(1e-12));
    CHECK_FALSE(fp.relaxed);
  }
}

TEST_CASE("identical follower tables always leave a mutual best response") {
  SplitMix64 rng(85);
  for (int rep = 0; rep < 100; ++rep) {
    GameSpec g = random_game(3, 0.9, rng);
    g.tables[2] = g.tables[1];
    MemoryOneStrategy leader = random_leader(3, rng, 0.0);
    FollowerProfile fp = follower_profile_br(g, leader);
    CHECK_FALSE(fp.relaxed);

    // Mutual-best-response certificate against exhaustive deviations.
    for (int f = 0; f < 2; ++f) {
      std::vector<MemoryOneStrategy> profile = {
          leader, fp.strategies[0].to_strategy(0.0), fp.strategies[1].to_strategy(0.0)};
      const double own = analytic_utility(g, profile).utilities[f + 1];
      for (const PureStrategy& dev : all_pure_strategies(3)) {
        profile[f + 1] = dev.to_strategy(0.0);
        CHECK(own >= analytic_utility(g, profile).utilities[f + 1] - 1e-9);
        profile[f + 1] = fp.strategies[f].to_strategy(0.0);
      }
    }
  }
}

TEST_CASE("payoff-flat followers leave every profile standing") {
  SplitMix64 rng(86);
  GameSpec g = random_game(3, 0.9, rng);
  g.tables[1] = PayoffTable{{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  g.tables[2] = g.tables[1];
  MemoryOneStrategy leader = random_leader(3, rng, 0.0);
  FollowerProfile fp = follower_profile_br(g, leader);
  CHECK_FALSE(fp.relaxed);
  // The survivors include everything, so the pick attains the best leader value.
  double best = -1e30;
  SplitMix64 probe(87);
  for (int t = 0; t < 200; ++t) {
    std::vector<MemoryOneStrategy> profile = {
        leader,
        PureStrategy{3, static_cast<std::uint32_t>(probe.next_u64() & 255)}.to_strategy(0.0),
        PureStrategy{3, static_cast<std::uint32_t>(probe.next_u64() & 255)}.to_strategy(0.0)};
    best = std::max(best, analytic_utility(g, profile).utilities[0]);
  }
  CHECK(fp.leader_value >= best - 1e-9);
}

TEST_CASE("a flat leader table pins the optimum at the constant") {
  SplitMix64 rng(88);
  GameSpec g = random_game(2, 0.9, rng);
  g.tables[0] = PayoffTable{{3.25, 3.25}, {3.25, 3.25}};
  SseResult sse = sse_solve(g);
  CHECK(sse.leader_value == doctest::Approx(3.25).epsilon(1e-10));
  CHECK(sse.heuristic);
  for (double cert : sse.certificates) CHECK(cert >= -1e-9);
}

TEST_CASE("mutually dominant action pairs are found exactly") {
  GameSpec g;
  g.n = 2;
  g.delta = 0.9;
  // Both players: action 1 strictly dominant, best when matched.
  g.tables = {PayoffTable{{3.0, 5.0}, {0.0, 1.0}}, PayoffTable{{3.0, 5.0}, {0.0, 1.0}}};
  g.initial_probs = {0.0, 0.0};
  SseResult sse = sse_solve(g);
  // The zero-probability start forces (2,2) at stage 0, then (1,1) forever:
  // (1-d) * sum_{t>=1} d^t * 5 = d * 5.
  CHECK(sse.leader_value == doctest::Approx(0.9 * 5.0).epsilon(1e-9));
  // The follower plays action 1 on both on-path states (2,2) and (1,1).
  CHECK(sse.followers.front().bit(1) == 1);
  CHECK(sse.followers.front().bit(4) == 1);
}

TEST_CASE("the solver is not beaten by random leader probes") {
  SplitMix64 rng(89);
  GameSpec g = random_game(2, 0.9, rng);
  SseResult sse = sse_solve(g);
  for (double cert : sse.certificates) CHECK(cert >= -1e-9);
  double best_probe = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 10000; ++t) {
    MemoryOneStrategy probe = random_leader(2, rng, 0.0);
    best_probe = std::max(best_probe, follower_profile_br(g, probe).leader_value);
  }
  CHECK(sse.leader_value >= best_probe - 1e-6);
}

TEST_CASE("extreme equalizer value equals the determinant-ratio enumeration") {
  SplitMix64 rng(90);
  int tested = 0;
  for (int rep = 0; rep < 400 && tested < 6; ++rep) {
    GameSpec g = random_game(2, 0.9, rng);
    if (feasibility_region(g, {1.0}, 0.0).empty) continue;
    ++tested;
    ZdBest zd = best_zd_value(g, {1.0});
    for (const MemoryOneStrategy* pi : {&zd.pi_plus, &zd.pi_minus}) {
      double best_ratio = -std::numeric_limits<double>::infinity();
      for (const PureStrategy& s : all_pure_strategies(2)) {
        std::vector<MemoryOneStrategy> profile = {*pi, s.to_strategy(0.0)};
        best_ratio = std::max(best_ratio, determinant_utility(g, profile, 1));
      }
      const double via_br = follower_profile_br(g, *pi).leader_value;
      CHECK(std::fabs(best_ratio - via_br) <= 1e-9);
    }
    CHECK(zd.value == doctest::Approx(std::max(zd.plus_value, zd.minus_value)).epsilon(1e-12));
  }
  CHECK(tested == 6);
}

TEST_CASE("the gap stays above the numerical floor on random games") {
  SplitMix64 rng(91);
  int tested = 0;
  for (int rep = 0; rep < 400 && tested < 5; ++rep) {
    GameSpec g = random_game(2, 0.9, rng);
    if (feasibility_region(g, {1.0}, 0.0).empty) continue;
    ++tested;
    GapReport report = gap_report(g, {1.0});
    CHECK(report.gap >= -1e-6);
    CHECK(report.gap == doctest::Approx(report.sse_value - report.zd_value).epsilon(1e-12));
    CHECK(report.heuristic);
    CHECK((report.witness == '+' || report.witness == '-'));
  }
  CHECK(tested == 5);
}

TEST_CASE("three-player gap report flags differing follower tables") {
  SplitMix64 rng(92);
  int tested = 0;
  for (int rep = 0; rep < 3000 && tested < 1; ++rep) {
    GameSpec g = random_game(3, 0.9, rng);
    g.tables[2] = g.tables[1];
    if (feasibility_region(g, {0.5, 0.5}, 0.0).empty) continue;
    ++tested;
    GapReport report = gap_report(g, {0.5, 0.5});
    CHECK_FALSE(report.follower_tables_differ);
    CHECK(report.gap >= -1e-6);

    GameSpec g2 = g;
    g2.tables[2].act1[0] += 0.25;
    if (!feasibility_region(g2, {0.5, 0.5}, 0.0).empty) {
      GapReport r2 = gap_report(g2, {0.5, 0.5});
      CHECK(r2.follower_tables_differ);
    }
  }
  CHECK(tested == 1);
}

TEST_CASE("three players: the solver dominates probes and equalizers stay pinned under BR") {
  SplitMix64 rng(94);
  int tested = 0;
  for (int rep = 0; rep < 3000 && tested < 3; ++rep) {
    GameSpec g = random_game(3, 0.9, rng);
    g.tables[2] = g.tables[1];
    if (feasibility_region(g, {0.5, 0.5}, 0.0).empty) continue;
    ++tested;
    GapReport report = gap_report(g, {0.5, 0.5});
    CHECK(report.gap >= -1e-6);

    // Random leader probes never beat the reported optimum.
    for (int probe = 0; probe < 30; ++probe) {
      MemoryOneStrategy leader = random_leader(3, rng, 0.0);
      CHECK(report.sse_value + 1e-6 >= follower_profile_br(g, leader).leader_value);
    }

    // At the optimistic best response to either extreme equalizer, the
    // weighted follower utility still sits on the enforced target.
    for (char side : {'+', '-'}) {
      const MemoryOneStrategy& pi = side == '+' ? report.zd.pi_plus : report.zd.pi_minus;
      const double gamma = side == '+' ? report.gamma_plus : report.gamma_minus;
      FollowerProfile fp = follower_profile_br(g, pi);
      std::vector<MemoryOneStrategy> profile = {pi, fp.strategies[0].to_strategy(0.0),
                                                fp.strategies[1].to_strategy(0.0)};
      EvalResult ev = analytic_utility(g, profile);
      CHECK(std::fabs(0.5 * (ev.utilities[1] + ev.utilities[2]) - gamma) <= 1e-8);
    }
  }
  CHECK(tested == 3);
}

TEST_CASE("rollouts of the extreme equalizer against best responders match the resolvent") {
  GameSpec g = gen_mtd_random(4, 0.9);
  ZdBest zd = best_zd_value(g, {1.0});
  FollowerProfile fp = follower_profile_br(g, zd.pi_plus);
  std::vector<MemoryOneStrategy> profile = {zd.pi_plus,
                                            fp.strategies[0].to_strategy(g.initial_probs[1])};
  EvalResult ev = analytic_utility(g, profile);
  MonteCarloResult mc = monte_carlo_utility(g, profile, 400, 200, 2024);
  for (int i = 0; i < 2; ++i)
    CHECK(std::fabs(mc.mean[i] - ev.utilities[i]) <=
          4.0 * mc.std_error[i] + mc.truncation_bias[i]);
  CHECK(ev.utilities[0] == doctest::Approx(zd.plus_value).epsilon(1e-10));
}

TEST_CASE("empty regions and oversized games raise the documented errors") {
  GameSpec g;
  g.n = 2;
  g.delta = 0.9;
  g.tables = {PayoffTable{{1.0, 1.0}, {1.0, 1.0}}, PayoffTable{{3.0, 3.0}, {1.0, 1.0}}};
  g.initial_probs = {0.0, 0.0};
  CHECK_THROWS_AS(best_zd_value(g, {1.0}), EmptyRegionError);

  SplitMix64 rng(93);
  GameSpec g4 = random_game(4, 0.9, rng);
  CHECK_THROWS_AS(sse_solve(g4), UnsupportedSizeError);
  MemoryOneStrategy leader = random_leader(4, rng, 0.0);
  CHECK_THROWS_AS(follower_profile_br(g4, leader), UnsupportedSizeError);
}
