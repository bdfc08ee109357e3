#pragma once

#include <cstdint>
#include <vector>

#include "zdforge/game.hpp"
#include "zdforge/zd.hpp"

namespace zdforge {

// Leader-follower analysis: pure best responses with leader-optimistic tie
// breaking, a desk-scale Stackelberg solver, and the comparison of the
// leader's value under the extreme equalizers against it.

// Deterministic memory-one strategy. `code` read in ascending binary order
// is the strategy id: bit (2^n - j) of code is P(action 1 | state j), so
// code 0 always plays action 2 and enumeration order is just 0, 1, 2, ...
// The stage-0 action comes from the game's initial probability for the
// player; with a zero initial vector every pure strategy opens with action 2.
struct PureStrategy {
  int n = 2;
  std::uint32_t code = 0;

  int state_count() const { return 1 << n; }
  int bit(int state_idx) const {  // 1-based state index
    return static_cast<int>((code >> (state_count() - state_idx)) & 1u);
  }
  MemoryOneStrategy to_strategy(double init_prob) const;
};

std::uint64_t pure_strategy_count(int n);  // 2^(2^n); n <= 4 enforced
PureStrategy pure_from_code(int n, std::uint32_t code);
std::vector<PureStrategy> all_pure_strategies(int n);

struct BestResponse {
  std::vector<PureStrategy> set;  // every pure strategy within tie_tol of the optimum
  PureStrategy pick;              // the member maximizing the leader's utility
  double follower_value = 0.0;
  double leader_value = 0.0;
};

// Best pure response of `follower` (2..n) when player 1 plays `leader` and
// the remaining followers play `others` (indexed by player-2-based position;
// the entry for `follower` itself is ignored). Pure strategies suffice: with
// the opponents fixed the follower faces a finite MDP whose optimal
// stationary policy is deterministic.
BestResponse best_response(const GameSpec& game, const MemoryOneStrategy& leader,
                           const std::vector<PureStrategy>& others, int follower,
                           double tie_tol = 1e-9);

struct FollowerProfile {
  std::vector<PureStrategy> strategies;  // players 2..n
  double leader_value = 0.0;
  bool relaxed = false;        // set when the tie tolerance had to be widened
  double tolerance_used = 1e-9;
};

// Joint pure follower profile where each follower best-responds to the rest
// (mutual best response), leader-optimistic among the survivors with ties
// broken by ascending strategy ids. If no profile survives at tie_tol the
// tolerance is relaxed by decades up to 1e-6 and the result is flagged.
FollowerProfile follower_profile_br(const GameSpec& game, const MemoryOneStrategy& leader,
                                    double tie_tol = 1e-9);

struct SseResult {
  MemoryOneStrategy leader;
  std::vector<PureStrategy> followers;
  double leader_value = 0.0;
  std::vector<double> certificates;  // per follower: min over pure deviations of U_j(BR) - U_j(dev)
  int starts = 0;
  long iterations = 0;     // coordinate sweeps performed
  bool heuristic = true;   // best-found, not certified global
};

// Leader's problem: maximize U_1 over memory-one leader strategies subject
// to every follower playing a pure best response. Solved per candidate
// follower profile by multi-start projected coordinate ascent (32 starts:
// corner seeds up to 16, remainder quasi-random) with exact-penalty
// constraint handling; extra warm starts may be supplied.
SseResult sse_solve(const GameSpec& game, double tie_tol = 1e-9,
                    const std::vector<MemoryOneStrategy>& warm_leaders = {});

struct ZdBest {
  double value = 0.0;  // leader's utility under the better extreme equalizer
  char witness = '+';
  double gamma_minus = 0.0, gamma_plus = 0.0;
  MemoryOneStrategy pi_plus, pi_minus;
  double plus_value = 0.0, minus_value = 0.0;
  // 33-point gamma sweep diagnostic: does some interior gamma beat both
  // extremes against best-responding followers? Reported, never asserted.
  bool interior_beats_extremes = false;
  double best_interior_gamma = 0.0, best_interior_value = 0.0;
};

// Synthesizes the extreme equalizers (gamma at each end of the enforceable
// interval, phi from the attaining vertex), plays each against the
// optimistic follower profile, and keeps the better one. Throws
// EmptyRegionError when no equalizer exists.
ZdBest best_zd_value(const GameSpec& game, const std::vector<double>& omega,
                     double tie_tol = 1e-9);

struct GapReport {
  double sse_value = 0.0;
  double zd_value = 0.0;
  double gap = 0.0;
  double gamma_minus = 0.0, gamma_plus = 0.0;
  char witness = '+';
  double witness_gamma = 0.0;
  bool heuristic = true;
  // Set for n > 2 when the followers' tables differ; the extreme-equalizer
  // bound is derived for followers with identical payoffs.
  bool follower_tables_differ = false;
  ZdBest zd;
  SseResult sse;
};

GapReport gap_report(const GameSpec& game, const std::vector<double>& omega,
                     double tie_tol = 1e-9);

}  // namespace zdforge
