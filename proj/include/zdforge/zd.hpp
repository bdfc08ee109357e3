#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "zdforge/game.hpp"

namespace zdforge {

// Equalizer strategies for player 1 (the leader).
//
// With weights omega over the followers summing to 1, W_j = sum_i omega_i S^i_j
// the weighted opponent reward at state j, and hat_j = 1 iff player 1's own
// action in state j is 1, the rule
//
//     probs_j = [ phi (gamma - W_j) - (1-delta) pi0 + hat_j ] / delta
//
// pins the weighted sum of the followers' discounted utilities to gamma, no
// matter what the followers play, provided every probs_j lands in [0, 1].
// Validity of all 2^n entries is a pair of linear constraints per state in
// (u, v) = (phi, phi*gamma):
//
//     (1-delta) pi0 - hat_j  <=  -u W_j + v  <=  delta + (1-delta) pi0 - hat_j
//
// so the admissible set is a convex polygon per sign of u, and the
// enforceable gamma = v/u is extremized at its vertices.

struct EqualizerSpec {
  std::vector<double> omega;  // follower weights, players 2..n, sum to 1
  double gamma = 0.0;         // enforced value of the weighted opponent utility
  double phi = 1.0;           // scaling, nonzero
  double leader_init = 0.0;   // player 1's stage-0 action-1 probability

  // Two-player alias: the single follower weight written with opposite sign.
  double beta() const { return -omega.at(0); }

  void validate(int n) const;  // throws DomainError
};

struct HalfPlane {
  double cu = 0.0, cv = 0.0, b = 0.0;  // cu*u + cv*v <= b
};

struct RegionVertex {
  double u = 0.0, v = 0.0;
  double gamma() const { return v / u; }
};

struct FeasibleRegion {
  std::vector<HalfPlane> constraints;  // two band constraints per state
  std::vector<RegionVertex> vertices;  // union over the u>0 and u<0 components
  bool empty = true;
  double gamma_minus = 0.0, gamma_plus = 0.0;
  RegionVertex minus_witness{}, plus_witness{};  // vertices attaining the bounds
};

// W over states for the given weights.
std::vector<double> weighted_opponent_rewards(const GameSpec& game,
                                              const std::vector<double>& omega);

// hat over states: 1 where player 1's previous action is 1.
std::vector<double> leader_repeat_indicator(int n);

// Builds the admissible polygon. Components with |u| < 1e-9 are discarded.
// An empty region is a result, not an error.
FeasibleRegion feasibility_region(const GameSpec& game, const std::vector<double>& omega,
                                  double leader_init);

// Enforceable interval (gamma_minus, gamma_plus), or nullopt when no
// equalizer exists.
std::optional<std::pair<double, double>> gamma_interval(const GameSpec& game,
                                                        const std::vector<double>& omega,
                                                        double leader_init);

// The interval of scalings phi for which `gamma` is enforceable (single sign
// component; |phi| >= 1e-9). nullopt when gamma is not enforceable.
std::optional<std::pair<double, double>> phi_range_for_gamma(const GameSpec& game,
                                                             const std::vector<double>& omega,
                                                             double leader_init, double gamma);

// Two-player closed-form screen for admissible scalings, kept verbatim as a
// ten-comparison diagnostic:
//   phi <= min_{x in row1, y in row2} (U2_x - U2_y) / (1 - delta)
//   phi >= max{ |U2_{1,1}-U2_{1,0}|/delta, |U2_{2,1}-U2_{2,0}|/delta,
//               max_{x,y} (U2_x - U2_y) / (1 + delta) }
// Acceptance here guarantees the existence of an equalizer; it is not a
// per-phi witness (see the soundness tests for the relation to the direct
// inequality system).
bool lambda_closed_form_check(const GameSpec& game, double phi);

// Builds player 1's equalizer strategy. Entries outside [0,1] by more than
// 1e-9 raise InfeasibleEqualizerError naming the state; smaller excursions
// are clamped to the boundary.
MemoryOneStrategy synthesize_equalizer(const GameSpec& game, const EqualizerSpec& spec);

// Draws `trials` random follower profiles (probabilities and stage-0 draws
// uniform), evaluates |sum_j omega_j U_j - gamma| exactly, returns the max.
double verify_enforcement(const GameSpec& game, const EqualizerSpec& spec,
                          const MemoryOneStrategy& zd, int trials, std::uint64_t seed);

// CSV: constraints as `cu,cv,b`; vertices as `u,v,gamma`.
void write_region_constraints_csv(std::ostream& out, const FeasibleRegion& region);
void write_region_vertices_csv(std::ostream& out, const FeasibleRegion& region);

}  // namespace zdforge
