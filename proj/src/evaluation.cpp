#include "zdforge/evaluation.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "zdforge/io.hpp"
#include "zdforge/parallel.hpp"
#include "zdforge/rng.hpp"

namespace zdforge {

namespace {

std::vector<double> strategy_inits(const std::vector<MemoryOneStrategy>& strategies) {
  std::vector<double> inits;
  inits.reserve(strategies.size());
  for (const auto& s : strategies) inits.push_back(s.init_prob);
  return inits;
}

// Fixed-tree pairwise reduction: deterministic regardless of thread count,
// and exact when all addends coincide (power-of-two replication counts).
double pairwise_sum(const double* x, int count) {
  if (count <= 2) {
    if (count == 2) return x[0] + x[1];
    return count == 1 ? x[0] : 0.0;
  }
  const int half = count / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, count - half);
}

}  // namespace

EvalResult analytic_utility(const GameSpec& game,
                            const std::vector<MemoryOneStrategy>& strategies) {
  game.validate();
  const int m = game.state_count();
  Matrix mt = build_transition_matrix(game, strategies);

  // Factor (I - delta M)^T once; w = (1-delta) (I - delta M)^-T v0 is the
  // discounted state-visit weight, and U_i = w . S^i for every player.
  Matrix at(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) at(i, j) = (i == j ? 1.0 : 0.0) - game.delta * mt(j, i);
  LuFactorization f = lu_factor(std::move(at));
  if (!f.ok) throw InternalError("resolvent factorization failed (delta < 1 should prevent this)");

  std::vector<double> w = profile_distribution(strategy_inits(strategies));
  f.solve(w);
  const double scale = 1.0 - game.delta;
  for (double& x : w) x *= scale;

  EvalResult result;
  result.utilities.resize(game.n);
  for (int i = 1; i <= game.n; ++i)
    result.utilities[i - 1] = dot(w, full_reward_vector(game, i));
  return result;
}

double determinant_utility(const GameSpec& game,
                           const std::vector<MemoryOneStrategy>& strategies, int player) {
  game.validate();
  if (player < 1 || player > game.n) throw DomainError("player index outside 1..n");
  for (const auto& s : strategies)
    if (s.init_prob != 0.0)
      throw PreconditionError(
          "determinant form requires zero initial action-1 probabilities for every player");

  const int m = game.state_count();
  Matrix mt = build_transition_matrix(game, strategies);
  Matrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - game.delta * mt(i, j);

  Matrix replaced = a;
  std::vector<double> s = full_reward_vector(game, player);
  for (int i = 0; i < m; ++i) replaced(i, m - 1) = s[i];

  LuFactorization fa = lu_factor(std::move(a));
  LuFactorization fr = lu_factor(std::move(replaced));
  if (!fa.ok) throw InternalError("determinant evaluation hit a singular system");
  return (1.0 - game.delta) * fr.det() / fa.det();
}

Trace simulate(const GameSpec& game, const std::vector<MemoryOneStrategy>& strategies,
               int horizon, std::uint64_t seed) {
  game.validate();
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  const int n = game.n;
  const int m = game.state_count();
  if (static_cast<int>(strategies.size()) != n)
    throw DomainError("one strategy per player required");
  for (const auto& s : strategies) s.validate(m);

  Trace trace;
  trace.seed = seed;
  trace.records.reserve(horizon);
  trace.discounted_returns.assign(n, 0.0);

  SplitMix64 rng(seed);
  std::vector<int> profile(n);
  double weight = 1.0;
  int prev_state = 0;
  for (int t = 0; t < horizon; ++t) {
    for (int k = 0; k < n; ++k) {
      const double p = t == 0 ? strategies[k].init_prob : strategies[k].probs[prev_state];
      profile[k] = rng.bernoulli(p) ? 1 : 2;
    }
    TraceRecord rec;
    rec.stage = t;
    rec.profile = profile;
    rec.rewards.resize(n);
    for (int i = 1; i <= n; ++i) {
      rec.rewards[i - 1] = stage_reward(game, profile, i);
      trace.discounted_returns[i - 1] += weight * rec.rewards[i - 1];
    }
    trace.records.push_back(std::move(rec));
    prev_state = encode_state(profile) - 1;
    weight *= game.delta;
  }
  const double scale = 1.0 - game.delta;
  for (double& r : trace.discounted_returns) r *= scale;
  return trace;
}

MonteCarloResult monte_carlo_utility(const GameSpec& game,
                                     const std::vector<MemoryOneStrategy>& strategies,
                                     int horizon, int replications, std::uint64_t seed) {
  game.validate();
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (replications < 2) throw DomainError("at least 2 replications required");
  const int n = game.n;

  // One substream per replication; slots are written independently and the
  // reduction below runs in replication order, so results are schedule-free.
  std::vector<std::vector<double>> returns(replications);
  parallel_for(replications, [&](int r) {
    returns[r] =
        simulate(game, strategies, horizon, seed + static_cast<std::uint64_t>(r)).discounted_returns;
  });

  MonteCarloResult res;
  res.replications = replications;
  res.mean.assign(n, 0.0);
  res.std_error.assign(n, 0.0);
  res.truncation_bias.assign(n, 0.0);
  std::vector<double> column(replications);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < replications; ++r) column[r] = returns[r][i];
    res.mean[i] = pairwise_sum(column.data(), replications) / replications;
    for (int r = 0; r < replications; ++r) {
      const double d = column[r] - res.mean[i];
      column[r] = d * d;
    }
    res.std_error[i] = pairwise_sum(column.data(), replications);
  }
  for (int i = 0; i < n; ++i) {
    res.std_error[i] = std::sqrt(res.std_error[i] / (replications - 1.0) / replications);
    double max_abs = 0.0;
    for (double v : game.tables[i].act1) max_abs = std::max(max_abs, std::fabs(v));
    for (double v : game.tables[i].act2) max_abs = std::max(max_abs, std::fabs(v));
    res.truncation_bias[i] = std::pow(game.delta, horizon + 1) * max_abs;
  }
  return res;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  if (trace.records.empty()) return;
  const int n = static_cast<int>(trace.records.front().profile.size());
  out << "stage";
  for (int i = 1; i <= n; ++i) out << ",action_p" << i;
  for (int i = 1; i <= n; ++i) out << ",reward_p" << i;
  out << "\n";
  for (const auto& rec : trace.records) {
    out << rec.stage;
    for (int a : rec.profile) out << ',' << a;
    for (double r : rec.rewards) out << ',' << format_double(r);
    out << "\n";
  }
}

}  // namespace zdforge
