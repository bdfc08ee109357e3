#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "zdforge/game.hpp"

namespace zdforge {

// Expected long-term discounted utilities, normalized by (1 - delta).

struct EvalResult {
  std::vector<double> utilities;  // one per player
};

// Exact utilities via the resolvent: solve (I - delta M)^T w = (1-delta) v0
// once, then U_i = w . S^i. Stage-0 probabilities come from the strategies.
EvalResult analytic_utility(const GameSpec& game,
                            const std::vector<MemoryOneStrategy>& strategies);

// Same quantity as a ratio of two determinants: (I - delta M) with its last
// column replaced by the player's reward vector, over det(I - delta M).
// Requires every stage-0 action-1 probability to be zero, so all initial
// mass sits on state (2,...,2).
double determinant_utility(const GameSpec& game,
                           const std::vector<MemoryOneStrategy>& strategies, int player);

struct TraceRecord {
  int stage = 0;
  std::vector<int> profile;
  std::vector<double> rewards;
};

struct Trace {
  std::uint64_t seed = 0;
  std::vector<TraceRecord> records;
  std::vector<double> discounted_returns;  // (1-delta) sum delta^t r_i over the horizon
};

// Seeded rollout: stage 0 from the strategies' init_prob, later stages from
// the previous joint state. Identical inputs give bit-identical traces.
// Draw order within a stage is player 1, 2, ..., n.
Trace simulate(const GameSpec& game, const std::vector<MemoryOneStrategy>& strategies,
               int horizon, std::uint64_t seed);

struct MonteCarloResult {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::vector<double> truncation_bias;  // delta^(T+1) * max |table entry|, per player
  int replications = 0;
};

// Mean and standard error of `replications` independent discounted returns.
// Replication r uses substream seed + r; the reduction runs in replication
// order so the output does not depend on the worker schedule.
MonteCarloResult monte_carlo_utility(const GameSpec& game,
                                     const std::vector<MemoryOneStrategy>& strategies,
                                     int horizon, int replications, std::uint64_t seed);

// Header: stage,action_p1,...,action_pn,reward_p1,...,reward_pn
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace zdforge
