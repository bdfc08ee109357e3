#pragma once

#include <cstdint>
#include <vector>

#include "zdforge/game.hpp"

namespace zdforge {

// Game generators. All are pure functions of their parameters and seed, and
// all emit games with zero initial action-1 probabilities.

// Public goods: each contributor pays c, contributions are scaled by r and
// shared equally. U1[k] = r c (k+1)/n - c, U2[k] = r c k / n.
GameSpec gen_pgg(int n, double r, double c, double delta);

// Snowdrift: contributors split the clearing cost c, everyone enjoys b;
// nobody clears, nobody gains. U1[k] = b - c/(k+1); U2[0] = 0, U2[k>0] = b.
GameSpec gen_snowdrift(int n, double b, double c, double delta);

// Unequal shares a_i (sum 1): U1[k] = a_i r c (k+1) - c, U2[k] = a_i r c k.
GameSpec gen_async_pgg(const std::vector<double>& shares, double r, double c, double delta);

// Per-player benefits b_i > 0 in the snowdrift.
GameSpec gen_async_snowdrift(const std::vector<double>& benefits, double c, double delta);

// Defender (player 1) prefers crowded targets: its action-1 row strictly
// increases with the attacker count while its action-2 row decreases.
// Attackers prefer the opposite ordering.
GameSpec gen_security(int n, std::uint64_t seed, double delta);

// Random tables U = p + q * theta^2 with p ~ U[0,4] and q ~ U[0,1]. The
// (p, q) draws depend only on (n, seed), so a theta sweep over one seed
// moves along smooth curves.
struct UavDraws {
  int n = 2;
  std::vector<PayoffTable> p, q;
};
UavDraws uav_draws(int n, std::uint64_t seed);
GameSpec uav_game(const UavDraws& draws, double theta, double delta);
GameSpec gen_uav_random(int n, double theta, std::uint64_t seed, double delta = 0.9);

// Two-player matching game: the defender is rewarded for guarding the
// attacked target, min{U1_{1,1}, U1_{2,0}} > max{U1_{1,0}, U1_{2,1}}; the
// attacker prefers the unguarded target, U2_{1,1} < U2_{2,1} and
// U2_{2,0} < U2_{1,0}. Draws are rejected until the orderings hold and an
// equalizer exists for the defender.
GameSpec gen_mtd_random(std::uint64_t seed, double delta);

// True when a two-player game has the matching structure above (used to
// decide whether a trace should report the defender/attacker match rate).
bool has_mtd_structure(const GameSpec& game);

}  // namespace zdforge
