#include "zdforge/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "zdforge/rng.hpp"
#include "zdforge/zd.hpp"

namespace zdforge {

namespace {

GameSpec blank_game(int n, double delta) {
  GameSpec g;
  g.n = n;
  g.delta = delta;
  g.tables.assign(n, PayoffTable{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)});
  g.initial_probs.assign(n, 0.0);
  return g;
}

std::vector<double> sorted_draws(SplitMix64& rng, int count, double lo, double hi,
                                 bool ascending) {
  std::vector<double> v(count);
  for (double& x : v) x = rng.uniform(lo, hi);
  std::sort(v.begin(), v.end());
  if (!ascending) std::reverse(v.begin(), v.end());
  return v;
}

}  // namespace

GameSpec gen_pgg(int n, double r, double c, double delta) {
  if (!(r > 0.0) || !(c > 0.0)) throw DomainError("pgg requires r > 0 and c > 0");
  GameSpec g = blank_game(n, delta);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      g.tables[i].act1[k] = r * c * (k + 1) / n - c;
      g.tables[i].act2[k] = r * c * k / n;
    }
  g.validate();
  return g;
}

GameSpec gen_snowdrift(int n, double b, double c, double delta) {
  if (!(b > 0.0) || !(c > 0.0)) throw DomainError("snowdrift requires b > 0 and c > 0");
  GameSpec g = blank_game(n, delta);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      g.tables[i].act1[k] = b - c / (k + 1);
      g.tables[i].act2[k] = k == 0 ? 0.0 : b;  // nobody clears, nobody gains
    }
  g.validate();
  return g;
}

GameSpec gen_async_pgg(const std::vector<double>& shares, double r, double c, double delta) {
  const int n = static_cast<int>(shares.size());
  if (n < 2) throw DomainError("at least two share factors required");
  if (!(r > 0.0) || !(c > 0.0)) throw DomainError("pgg requires r > 0 and c > 0");
  double sum = 0.0;
  for (double a : shares) sum += a;
  if (std::fabs(sum - 1.0) > 1e-12) throw DomainError("share factors must sum to 1");
  GameSpec g = blank_game(n, delta);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      g.tables[i].act1[k] = shares[i] * r * c * (k + 1) - c;
      g.tables[i].act2[k] = shares[i] * r * c * k;
    }
  g.validate();
  return g;
}

GameSpec gen_async_snowdrift(const std::vector<double>& benefits, double c, double delta) {
  const int n = static_cast<int>(benefits.size());
  if (n < 2) throw DomainError("at least two benefits required");
  if (!(c > 0.0)) throw DomainError("snowdrift requires c > 0");
  for (double b : benefits)
    if (!(b > 0.0)) throw DomainError("benefits must be positive");
  GameSpec g = blank_game(n, delta);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      g.tables[i].act1[k] = benefits[i] - c / (k + 1);
      g.tables[i].act2[k] = k == 0 ? 0.0 : benefits[i];
    }
  g.validate();
  return g;
}

GameSpec gen_security(int n, std::uint64_t seed, double delta) {
  if (n < 2) throw DomainError("at least two players required");
  GameSpec g = blank_game(n, delta);
  SplitMix64 rng(seed);
  // Defender earns more on action 1 as more attackers pick target 1;
  // attackers prefer the thin end of the crowd.
  g.tables[0].act1 = sorted_draws(rng, n, 0.0, 4.0, true);
  g.tables[0].act2 = sorted_draws(rng, n, 0.0, 4.0, false);
  for (int i = 1; i < n; ++i) {
    g.tables[i].act1 = sorted_draws(rng, n, 0.0, 4.0, false);
    g.tables[i].act2 = sorted_draws(rng, n, 0.0, 4.0, true);
  }
  g.validate();
  return g;
}

UavDraws uav_draws(int n, std::uint64_t seed) {
  UavDraws d;
  d.n = n;
  d.p.assign(n, PayoffTable{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)});
  d.q.assign(n, PayoffTable{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)});
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i)
    for (int a = 1; a <= 2; ++a)
      for (int k = 0; k < n; ++k)
        (a == 1 ? d.p[i].act1 : d.p[i].act2)[k] = rng.uniform(0.0, 4.0);
  for (int i = 0; i < n; ++i)
    for (int a = 1; a <= 2; ++a)
      for (int k = 0; k < n; ++k)
        (a == 1 ? d.q[i].act1 : d.q[i].act2)[k] = rng.uniform(0.0, 1.0);
  return d;
}

GameSpec uav_game(const UavDraws& draws, double theta, double delta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0, 1]");
  GameSpec g = blank_game(draws.n, delta);
  const double t2 = theta * theta;
  for (int i = 0; i < draws.n; ++i)
    for (int k = 0; k < draws.n; ++k) {
      g.tables[i].act1[k] = draws.p[i].act1[k] + draws.q[i].act1[k] * t2;
      g.tables[i].act2[k] = draws.p[i].act2[k] + draws.q[i].act2[k] * t2;
    }
  g.validate();
  return g;
}

GameSpec gen_uav_random(int n, double theta, std::uint64_t seed, double delta) {
  return uav_game(uav_draws(n, seed), theta, delta);
}

GameSpec gen_mtd_random(std::uint64_t seed, double delta) {
  SplitMix64 rng(seed);
  const std::vector<double> omega = {1.0};
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    GameSpec g = blank_game(2, delta);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        g.tables[i].act1[k] = rng.uniform(0.0, 4.0);
        g.tables[i].act2[k] = rng.uniform(0.0, 4.0);
      }
    if (!has_mtd_structure(g)) continue;
    // Keep only draws where the defender can pin the attacker's utility.
    if (feasibility_region(g, omega, 0.0).empty) continue;
    return g;
  }
  throw InternalError("mtd rejection sampling did not converge");
}

bool has_mtd_structure(const GameSpec& game) {
  if (game.n != 2) return false;
  const PayoffTable& d = game.tables[0];
  const PayoffTable& a = game.tables[1];
  // Defender is rewarded for matching the attacked target.
  const bool defender_matches =
      std::min(d.act1[1], d.act2[0]) > std::max(d.act1[0], d.act2[1]);
  // Attacker prefers the unguarded target, whichever target is guarded.
  const bool attacker_mismatches = a.act1[1] < a.act2[1] && a.act2[0] < a.act1[0];
  return defender_matches && attacker_mismatches;
}

}  // namespace zdforge
