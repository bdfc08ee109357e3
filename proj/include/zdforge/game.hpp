#pragma once

#include <cstdint>
#include <vector>

#include "zdforge/errors.hpp"
#include "zdforge/linalg.hpp"

namespace zdforge {

// Each of n players picks action 1 or action 2 per stage. A player's stage
// reward depends only on its own action and on how many of the others picked
// action 1, so payoffs are stored as a 2 x n table per player.
//
// Joint action profiles double as Markov states. States are indexed 1..2^n
// in lexicographic order (1,..,1), (1,..,2), ..., (2,..,2) with player 1 as
// the most significant digit; that single ordering is used everywhere.

inline constexpr int kMaxPlayers = 12;  // 2^12-state dense algebra budget

// Payoff rows indexed by own action, columns by the count of action-1
// players among the others, ascending 0..n-1.
struct PayoffTable {
  std::vector<double> act1;
  std::vector<double> act2;

  double at(int action, int count) const {
    return action == 1 ? act1[count] : act2[count];
  }
};

struct GameSpec {
  int n = 2;
  double delta = 0.0;                 // discount factor in [0, 1)
  std::vector<PayoffTable> tables;    // one per player
  std::vector<double> initial_probs;  // P(action 1 at stage 0) per player

  int state_count() const { return 1 << n; }
  void validate() const;  // throws DomainError
};

// P(action 1 | previous joint state), one entry per state, plus the
// stage-0 action-1 probability.
struct MemoryOneStrategy {
  std::vector<double> probs;
  double init_prob = 0.0;

  void validate(int state_count) const;
};

struct ReducedState {
  int own = 1;           // this player's action, 1 or 2
  int others_count = 0;  // action-1 players among the others
};

// Action of player k (1-based) in state idx; the closed-form index map.
int decode_action(int idx, int k, int n);

// State idx -> joint profile (a^1, ..., a^n).
std::vector<int> decode_state(int idx, int n);

// Joint profile -> state idx (inverse of decode_state).
int encode_state(const std::vector<int>& profile);

ReducedState reduce_state(const std::vector<int>& profile, int player);

double stage_reward(const GameSpec& game, const std::vector<int>& profile, int player);

// Player's reward at every state: the table expanded over the 2^n profiles.
std::vector<double> full_reward_vector(const GameSpec& game, int player);

// Row-stochastic transition matrix; entry (j, i) is the probability of
// moving from state j to state i when every player draws independently
// from its strategy at state j.
Matrix build_transition_matrix(const GameSpec& game,
                               const std::vector<MemoryOneStrategy>& strategies);

// Distribution of the stage-0 profile induced by the game's initial_probs.
std::vector<double> initial_distribution(const GameSpec& game);

// Same product form for an arbitrary vector of stage-0 probabilities.
std::vector<double> profile_distribution(const std::vector<double>& action1_probs);

// Expand a rule given on (own action, count) pairs to the full state space:
// states sharing the player's reduced state get the same entry.
MemoryOneStrategy lift_reduced(int n, int player, const std::vector<double>& act1_rule,
                               const std::vector<double>& act2_rule, double init_prob);

}  // namespace zdforge
