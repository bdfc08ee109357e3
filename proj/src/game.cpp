#include "zdforge/game.hpp"

#include <cmath>
#include <string>

namespace zdforge {

void GameSpec::validate() const {
  if (n < 2) throw DomainError("player count must be at least 2");
  if (n > kMaxPlayers)
    throw DomainError("player count " + std::to_string(n) + " exceeds the supported maximum " +
                      std::to_string(kMaxPlayers));
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("delta must lie in [0, 1)");
  if (static_cast<int>(tables.size()) != n) throw DomainError("one payoff table per player required");
  for (const auto& t : tables) {
    if (static_cast<int>(t.act1.size()) != n || static_cast<int>(t.act2.size()) != n)
      throw DomainError("each payoff table needs 2 x n entries");
    for (double v : t.act1)
      if (!std::isfinite(v)) throw DomainError("payoff tables must be finite");
    for (double v : t.act2)
      if (!std::isfinite(v)) throw DomainError("payoff tables must be finite");
  }
  if (static_cast<int>(initial_probs.size()) != n)
    throw DomainError("one initial action probability per player required");
  for (double p : initial_probs)
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("initial probabilities must lie in [0, 1]");
}

void MemoryOneStrategy::validate(int state_count) const {
  if (static_cast<int>(probs.size()) != state_count)
    throw DomainError("strategy needs one probability per state (" +
                      std::to_string(state_count) + ")");
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("strategy probabilities must lie in [0, 1]");
  if (!(init_prob >= 0.0 && init_prob <= 1.0))
    throw DomainError("initial probability must lie in [0, 1]");
}

int decode_action(int idx, int k, int n) {
  if (idx < 1 || idx > (1 << n))
    throw DomainError("state index " + std::to_string(idx) + " outside 1..2^n");
  // Equivalent to ((ceil(idx / 2^(n-k)) + 1) mod 2) + 1.
  return (((idx - 1) >> (n - k)) & 1) + 1;
}

std::vector<int> decode_state(int idx, int n) {
  if (idx < 1 || idx > (1 << n))
    throw DomainError("state index " + std::to_string(idx) + " outside 1..2^n");
  std::vector<int> profile(n);
  for (int k = 1; k <= n; ++k) profile[k - 1] = (((idx - 1) >> (n - k)) & 1) + 1;
  return profile;
}

int encode_state(const std::vector<int>& profile) {
  const int n = static_cast<int>(profile.size());
  int bits = 0;
  for (int k = 1; k <= n; ++k) {
    int a = profile[k - 1];
    if (a != 1 && a != 2) throw DomainError("actions must be 1 or 2");
    bits |= (a - 1) << (n - k);
  }
  return bits + 1;
}

ReducedState reduce_state(const std::vector<int>& profile, int player) {
  const int n = static_cast<int>(profile.size());
  if (player < 1 || player > n) throw DomainError("player index outside 1..n");
  ReducedState r;
  r.own = profile[player - 1];
  if (r.own != 1 && r.own != 2) throw DomainError("actions must be 1 or 2");
  r.others_count = 0;
  for (int j = 0; j < n; ++j) {
    if (j == player - 1) continue;
    if (profile[j] != 1 && profile[j] != 2) throw DomainError("actions must be 1 or 2");
    if (profile[j] == 1) ++r.others_count;
  }
  return r;
}

double stage_reward(const GameSpec& game, const std::vector<int>& profile, int player) {
  ReducedState r = reduce_state(profile, player);
  return game.tables[player - 1].at(r.own, r.others_count);
}

std::vector<double> full_reward_vector(const GameSpec& game, int player) {
  const int m = game.state_count();
  std::vector<double> s(m);
  std::vector<int> profile(game.n);
  for (int idx = 1; idx <= m; ++idx) {
    for (int k = 1; k <= game.n; ++k) profile[k - 1] = (((idx - 1) >> (game.n - k)) & 1) + 1;
    s[idx - 1] = stage_reward(game, profile, player);
  }
  return s;
}

Matrix build_transition_matrix(const GameSpec& game,
                               const std::vector<MemoryOneStrategy>& strategies) {
  const int n = game.n;
  const int m = game.state_count();
  if (static_cast<int>(strategies.size()) != n)
    throw DomainError("one strategy per player required");
  for (const auto& s : strategies) s.validate(m);

  Matrix mat(m, m);
  std::vector<double> row;
  std::vector<double> next;
  row.reserve(m);
  next.reserve(m);
  for (int j = 0; j < m; ++j) {
    // Tensor the per-player branch probabilities; player 1 lands on the
    // most significant digit of the destination index.
    row.assign(1, 1.0);
    for (int k = 0; k < n; ++k) {
      const double p = strategies[k].probs[j];
      next.assign(row.size() * 2, 0.0);
      for (std::size_t t = 0; t < row.size(); ++t) {
        next[2 * t] = row[t] * p;
        next[2 * t + 1] = row[t] * (1.0 - p);
      }
      row.swap(next);
    }
    for (int i = 0; i < m; ++i) mat(j, i) = row[i];
  }
  return mat;
}

std::vector<double> profile_distribution(const std::vector<double>& action1_probs) {
  std::vector<double> dist(1, 1.0);
  std::vector<double> next;
  for (double p : action1_probs) {
    next.assign(dist.size() * 2, 0.0);
    for (std::size_t t = 0; t < dist.size(); ++t) {
      next[2 * t] = dist[t] * p;
      next[2 * t + 1] = dist[t] * (1.0 - p);
    }
    dist.swap(next);
  }
  return dist;
}

std::vector<double> initial_distribution(const GameSpec& game) {
  return profile_distribution(game.initial_probs);
}

MemoryOneStrategy lift_reduced(int n, int player, const std::vector<double>& act1_rule,
                               const std::vector<double>& act2_rule, double init_prob) {
  if (static_cast<int>(act1_rule.size()) != n || static_cast<int>(act2_rule.size()) != n)
    throw DomainError("reduced rule needs n entries per action row");
  const int m = 1 << n;
  MemoryOneStrategy s;
  s.probs.resize(m);
  s.init_prob = init_prob;
  std::vector<int> profile(n);
  for (int idx = 1; idx <= m; ++idx) {
    for (int k = 1; k <= n; ++k) profile[k - 1] = (((idx - 1) >> (n - k)) & 1) + 1;
    ReducedState r = reduce_state(profile, player);
    s.probs[idx - 1] = r.own == 1 ? act1_rule[r.others_count] : act2_rule[r.others_count];
  }
  return s;
}

}  // namespace zdforge
