#include "zdforge/zd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "zdforge/evaluation.hpp"
#include "zdforge/io.hpp"
#include "zdforge/rng.hpp"

namespace zdforge {

namespace {

constexpr double kMinScaling = 1e-9;  // |phi| below this enforces nothing

struct Bands {
  std::vector<double> w;   // weighted opponent reward per state
  std::vector<double> lo;  // per-state lower bound on  -u W_j + v
  std::vector<double> hi;  // per-state upper bound
};

Bands make_bands(const GameSpec& game, const std::vector<double>& omega, double leader_init) {
  Bands b;
  b.w = weighted_opponent_rewards(game, omega);
  const std::vector<double> hat = leader_repeat_indicator(game.n);
  const int m = game.state_count();
  b.lo.resize(m);
  b.hi.resize(m);
  const double base = (1.0 - game.delta) * leader_init;
  for (int j = 0; j < m; ++j) {
    b.lo[j] = base - hat[j];
    b.hi[j] = game.delta + base - hat[j];
  }
  return b;
}

void check_weights(const GameSpec& game, const std::vector<double>& omega) {
  if (static_cast<int>(omega.size()) != game.n - 1)
    throw DomainError("expected one weight per follower (n-1 entries)");
  double sum = 0.0;
  for (double w : omega) {
    if (!std::isfinite(w)) throw DomainError("weights must be finite");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw DomainError("weights must sum to 1");
}

struct Point {
  double u, v;
};

// Clip a convex polygon against cu*u + cv*v <= b (Sutherland-Hodgman).
std::vector<Point> clip(const std::vector<Point>& poly, double cu, double cv, double b) {
  std::vector<Point> out;
  const std::size_t k = poly.size();
  if (k == 0) return out;
  out.reserve(k + 2);
  for (std::size_t i = 0; i < k; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % k];
    const double dp = cu * p.u + cv * p.v - b;
    const double dq = cu * q.u + cv * q.v - b;
    if (dp <= 0.0) out.push_back(p);
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      const double t = dp / (dp - dq);
      out.push_back({p.u + t * (q.u - p.u), p.v + t * (q.v - p.v)});
    }
  }
  return out;
}

std::vector<Point> component(const Bands& bands, double box_u, double box_v, int sign) {
  // Seed box, then the u-sign cut, then both band constraints per state.
  std::vector<Point> poly = {{-box_u, -box_v}, {box_u, -box_v}, {box_u, box_v}, {-box_u, box_v}};
  if (sign > 0)
    poly = clip(poly, -1.0, 0.0, -kMinScaling);  // u >= kMinScaling
  else
    poly = clip(poly, 1.0, 0.0, -kMinScaling);  // u <= -kMinScaling
  const int m = static_cast<int>(bands.w.size());
  for (int j = 0; j < m && !poly.empty(); ++j) {
    poly = clip(poly, bands.w[j], -1.0, -bands.lo[j]);  //  -u W + v >= lo
    poly = clip(poly, -bands.w[j], 1.0, bands.hi[j]);   //  -u W + v <= hi
  }
  // Merge coincident corners left behind by the clipping.
  if (poly.size() > 1) {
    std::vector<Point> merged;
    const double eps = 1e-12 * (1.0 + box_u + box_v);
    for (const Point& p : poly) {
      if (merged.empty() || std::fabs(merged.back().u - p.u) > eps ||
          std::fabs(merged.back().v - p.v) > eps)
        merged.push_back(p);
    }
    if (merged.size() > 1 && std::fabs(merged.front().u - merged.back().u) <= eps &&
        std::fabs(merged.front().v - merged.back().v) <= eps)
      merged.pop_back();
    poly.swap(merged);
  }
  return poly;
}

}  // namespace

void EqualizerSpec::validate(int n) const {
  if (static_cast<int>(omega.size()) != n - 1)
    throw DomainError("expected one weight per follower (n-1 entries)");
  double sum = 0.0;
  for (double w : omega) sum += w;
  if (std::fabs(sum - 1.0) > 1e-12) throw DomainError("weights must sum to 1");
  if (!(std::fabs(phi) >= kMinScaling)) throw DomainError("phi must be nonzero");
  if (!(leader_init >= 0.0 && leader_init <= 1.0))
    throw DomainError("leader_init must lie in [0, 1]");
  if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
}

std::vector<double> weighted_opponent_rewards(const GameSpec& game,
                                              const std::vector<double>& omega) {
  game.validate();
  check_weights(game, omega);
  const int m = game.state_count();
  std::vector<double> w(m, 0.0);
  for (int i = 2; i <= game.n; ++i) {
    const std::vector<double> s = full_reward_vector(game, i);
    const double wi = omega[i - 2];
    for (int j = 0; j < m; ++j) w[j] += wi * s[j];
  }
  return w;
}

std::vector<double> leader_repeat_indicator(int n) {
  const int m = 1 << n;
  std::vector<double> hat(m, 0.0);
  for (int j = 0; j < m; ++j) hat[j] = (j >> (n - 1)) & 1 ? 0.0 : 1.0;
  return hat;
}

FeasibleRegion feasibility_region(const GameSpec& game, const std::vector<double>& omega,
                                  double leader_init) {
  if (!(leader_init >= 0.0 && leader_init <= 1.0))
    throw DomainError("leader_init must lie in [0, 1]");
  Bands bands = make_bands(game, omega, leader_init);
  const int m = game.state_count();

  FeasibleRegion region;
  region.constraints.reserve(2 * m);
  for (int j = 0; j < m; ++j) {
    region.constraints.push_back({bands.w[j], -1.0, -bands.lo[j]});
    region.constraints.push_back({-bands.w[j], 1.0, bands.hi[j]});
  }

  const double w_min = *std::min_element(bands.w.begin(), bands.w.end());
  const double w_max = *std::max_element(bands.w.begin(), bands.w.end());
  if (w_max - w_min < 1e-15) return region;  // no lever on the followers: empty

  // Any feasible u satisfies |u| <= 2 / (w_max - w_min); pad the box a bit.
  const double box_u = 2.5 / (w_max - w_min);
  const double box_v = box_u * std::max(std::fabs(w_min), std::fabs(w_max)) + 3.0;

  double best_plus = -std::numeric_limits<double>::infinity();
  double best_minus = std::numeric_limits<double>::infinity();
  for (int sign : {+1, -1}) {
    std::vector<Point> poly = component(bands, box_u, box_v, sign);
    for (const Point& p : poly) {
      region.vertices.push_back({p.u, p.v});
      const double g = p.v / p.u;
      if (g > best_plus) {
        best_plus = g;
        region.plus_witness = {p.u, p.v};
      }
      if (g < best_minus) {
        best_minus = g;
        region.minus_witness = {p.u, p.v};
      }
    }
  }
  if (!region.vertices.empty()) {
    region.empty = false;
    region.gamma_plus = best_plus;
    region.gamma_minus = best_minus;
  }
  return region;
}

std::optional<std::pair<double, double>> gamma_interval(const GameSpec& game,
                                                        const std::vector<double>& omega,
                                                        double leader_init) {
  FeasibleRegion region = feasibility_region(game, omega, leader_init);
  if (region.empty) return std::nullopt;
  return std::make_pair(region.gamma_minus, region.gamma_plus);
}

std::optional<std::pair<double, double>> phi_range_for_gamma(const GameSpec& game,
                                                             const std::vector<double>& omega,
                                                             double leader_init, double gamma) {
  Bands bands = make_bands(game, omega, leader_init);
  const int m = game.state_count();
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    const double c = gamma - bands.w[j];  // u * c must land in [lo_j, hi_j]
    if (c == 0.0) {
      if (bands.lo[j] > 0.0 || bands.hi[j] < 0.0) return std::nullopt;
      continue;
    }
    double a = bands.lo[j] / c;
    double b = bands.hi[j] / c;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    if (lo > hi) return std::nullopt;
  }
  // Keep the sign component the interval actually lives in.
  if (hi >= kMinScaling && lo <= -kMinScaling) {
    // Straddles zero; both cuts are valid, return the wider side.
    return (hi > -lo) ? std::make_pair(kMinScaling, hi) : std::make_pair(lo, -kMinScaling);
  }
  if (hi >= kMinScaling) return std::make_pair(std::max(lo, kMinScaling), hi);
  if (lo <= -kMinScaling) return std::make_pair(lo, std::min(hi, -kMinScaling));
  return std::nullopt;
}

bool lambda_closed_form_check(const GameSpec& game, double phi) {
  game.validate();
  if (game.n != 2) throw DomainError("closed-form scaling check is defined for two players");
  const PayoffTable& t = game.tables[1];
  const double row1_min = std::min(t.act1[0], t.act1[1]);
  const double row1_max = std::max(t.act1[0], t.act1[1]);
  const double row2_min = std::min(t.act2[0], t.act2[1]);
  const double row2_max = std::max(t.act2[0], t.act2[1]);
  const double min_cross = row1_min - row2_max;
  const double max_cross = row1_max - row2_min;
  const double d1 = std::fabs(t.act1[1] - t.act1[0]);
  const double d2 = std::fabs(t.act2[1] - t.act2[0]);

  const double inf = std::numeric_limits<double>::infinity();
  const double upper = min_cross / (1.0 - game.delta);
  double lower = max_cross / (1.0 + game.delta);
  lower = std::max(lower, d1 == 0.0 ? 0.0 : (game.delta == 0.0 ? inf : d1 / game.delta));
  lower = std::max(lower, d2 == 0.0 ? 0.0 : (game.delta == 0.0 ? inf : d2 / game.delta));
  return phi >= lower && phi <= upper;
}

MemoryOneStrategy synthesize_equalizer(const GameSpec& game, const EqualizerSpec& spec) {
  game.validate();
  spec.validate(game.n);
  if (game.delta <= 0.0)
    throw DomainError("equalizer synthesis requires a positive discount factor");

  const std::vector<double> w = weighted_opponent_rewards(game, spec.omega);
  const std::vector<double> hat = leader_repeat_indicator(game.n);
  const int m = game.state_count();
  const double u = spec.phi;
  const double v = spec.phi * spec.gamma;
  const double base = (1.0 - game.delta) * spec.leader_init;

  MemoryOneStrategy s;
  s.init_prob = spec.leader_init;
  s.probs.resize(m);
  constexpr double tol = 1e-9;
  for (int j = 0; j < m; ++j) {
    const double p = (v - u * w[j] - base + hat[j]) / game.delta;
    if (p < -tol || p > 1.0 + tol)
      throw InfeasibleEqualizerError(
          "equalizer infeasible: P(action 1 | state " + std::to_string(j + 1) + ") = " +
              format_double(p) + " is outside [0, 1]",
          j + 1, p);
    s.probs[j] = std::min(1.0, std::max(0.0, p));
  }
  return s;
}

double verify_enforcement(const GameSpec& game, const EqualizerSpec& spec,
                          const MemoryOneStrategy& zd, int trials, std::uint64_t seed) {
  game.validate();
  spec.validate(game.n);
  zd.validate(game.state_count());
  const int m = game.state_count();

  double worst = 0.0;
  SplitMix64 rng(seed);
  std::vector<MemoryOneStrategy> profile(game.n);
  profile[0] = zd;
  for (int t = 0; t < trials; ++t) {
    for (int i = 1; i < game.n; ++i) {
      profile[i].probs.resize(m);
      for (int j = 0; j < m; ++j) profile[i].probs[j] = rng.next_double();
      profile[i].init_prob = rng.next_double();
    }
    EvalResult ev = analytic_utility(game, profile);
    double pinned = 0.0;
    for (int i = 1; i < game.n; ++i) pinned += spec.omega[i - 1] * ev.utilities[i];
    worst = std::max(worst, std::fabs(pinned - spec.gamma));
  }
  return worst;
}

void write_region_constraints_csv(std::ostream& out, const FeasibleRegion& region) {
  out << "cu,cv,b\n";
  for (const HalfPlane& h : region.constraints)
    out << format_double(h.cu) << ',' << format_double(h.cv) << ',' << format_double(h.b) << "\n";
}

void write_region_vertices_csv(std::ostream& out, const FeasibleRegion& region) {
  out << "u,v,gamma\n";
  for (const RegionVertex& p : region.vertices)
    out << format_double(p.u) << ',' << format_double(p.v) << ',' << format_double(p.gamma())
        << "\n";
}

}  // namespace zdforge
