#include "zdforge/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "zdforge/evaluation.hpp"

namespace zdforge {

namespace {

constexpr int kMaxEnumeratedPlayers = 4;   // 2^(2^4) pure strategies per follower
constexpr std::uint64_t kJointBudget = 1u << 16;  // joint follower profiles
constexpr double kRelaxCeiling = 1e-6;

int pure_bit(std::uint32_t code, int m, int j) {  // j is 0-based
  return static_cast<int>((code >> (m - 1 - j)) & 1u);
}

// Evaluator for profiles where every follower is deterministic and only the
// leader mixes. Each state then has exactly two successors (one per leader
// action), so utilities come from one small LU solve:
//   w = (1-delta) (I - delta M)^-T v0,   U_i = w . S^i.
struct PureProfileEngine {
  int n = 2, m = 4;
  double delta = 0.0;
  std::vector<std::vector<double>> rewards;  // S^i per player
  std::vector<double> v0;

  // scratch buffers sized once
  mutable std::vector<double> at, w;
  mutable std::vector<int> piv;
  mutable std::vector<int> succ1, succ2;

  explicit PureProfileEngine(const GameSpec& game)
      : n(game.n), m(game.state_count()), delta(game.delta) {
    rewards.reserve(n);
    for (int i = 1; i <= n; ++i) rewards.push_back(full_reward_vector(game, i));
    v0 = initial_distribution(game);
    at.resize(static_cast<std::size_t>(m) * m);
    w.resize(m);
    piv.resize(m);
    succ1.resize(m);
    succ2.resize(m);
  }

  // Destination states (0-based) for follower codes, per leader action.
  void successors(const std::uint32_t* codes) const {
    for (int j = 0; j < m; ++j) {
      int bits = 0;
      for (int f = 0; f < n - 1; ++f)
        bits |= (1 - pure_bit(codes[f], m, j)) << (n - 2 - f);
      succ1[j] = bits;
      succ2[j] = bits | (1 << (n - 1));
    }
  }

  // Utilities for (leader probs, follower codes); optionally det(I - delta M).
  // successors(codes) must have been called for the same codes.
  void eval(const double* leader_probs, double* util, double* det_out) const {
    double* a = at.data();
    std::memset(a, 0, sizeof(double) * m * m);
    for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i) * m + i] = 1.0;
    for (int j = 0; j < m; ++j) {
      const double p = leader_probs[j];
      a[static_cast<std::size_t>(succ1[j]) * m + j] -= delta * p;
      a[static_cast<std::size_t>(succ2[j]) * m + j] -= delta * (1.0 - p);
    }
    int sign = 1;
    if (!lu_factor_inplace(a, m, piv.data(), sign))
      throw InternalError("pure-profile resolvent is singular");
    std::copy(v0.begin(), v0.end(), w.begin());
    lu_solve_inplace(a, piv.data(), m, w.data());
    const double scale = 1.0 - delta;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      const double* ri = rewards[i].data();
      for (int j = 0; j < m; ++j) s += w[j] * ri[j];
      util[i] = scale * s;
    }
    if (det_out) *det_out = lu_det(a, m, sign);
  }
};

std::vector<double> leader_prob_vector(const MemoryOneStrategy& s) { return s.probs; }

// Low-discrepancy start points: coordinate d of point k is frac(0.5 + (k+1) a_d)
// with a_d the fractional part of sqrt of the d-th prime.
double weyl_coordinate(int point, int dim) {
  static const int primes[16] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  const double alpha = std::sqrt(static_cast<double>(primes[dim % 16]));
  const double x = 0.5 + (point + 1) * (alpha - std::floor(alpha));
  return x - std::floor(x);
}

}  // namespace

MemoryOneStrategy PureStrategy::to_strategy(double init_prob) const {
  MemoryOneStrategy s;
  const int m = state_count();
  s.probs.resize(m);
  for (int j = 1; j <= m; ++j) s.probs[j - 1] = static_cast<double>(bit(j));
  s.init_prob = init_prob;
  return s;
}

std::uint64_t pure_strategy_count(int n) {
  if (n < 2) throw DomainError("player count must be at least 2");
  if (n > kMaxEnumeratedPlayers)
    throw UnsupportedSizeError(
        "pure-strategy enumeration supports n <= 4; use sampled strategies beyond that");
  return 1ull << (1 << n);
}

PureStrategy pure_from_code(int n, std::uint32_t code) {
  if (code >= pure_strategy_count(n)) throw DomainError("pure strategy id out of range");
  return PureStrategy{n, code};
}

std::vector<PureStrategy> all_pure_strategies(int n) {
  const std::uint64_t count = pure_strategy_count(n);
  std::vector<PureStrategy> out;
  out.reserve(count);
  for (std::uint64_t c = 0; c < count; ++c) out.push_back(PureStrategy{n, static_cast<std::uint32_t>(c)});
  return out;
}

BestResponse best_response(const GameSpec& game, const MemoryOneStrategy& leader,
                           const std::vector<PureStrategy>& others, int follower,
                           double tie_tol) {
  game.validate();
  const int n = game.n;
  const int m = game.state_count();
  leader.validate(m);
  if (follower < 2 || follower > n) throw DomainError("follower index outside 2..n");
  if (!(others.size() == static_cast<std::size_t>(n - 1) || (n == 2 && others.empty())))
    throw DomainError("expected one pure strategy slot per follower");

  PureProfileEngine engine(game);
  std::vector<std::uint32_t> codes(n - 1, 0);
  for (int f = 0; f < n - 1; ++f)
    if (f != follower - 2 && f < static_cast<int>(others.size())) codes[f] = others[f].code;

  const std::uint32_t count = static_cast<std::uint32_t>(pure_strategy_count(n));
  std::vector<double> util(n);
  std::vector<double> val_follower(count), val_leader(count);
  const std::vector<double> probs = leader_prob_vector(leader);
  for (std::uint32_t c = 0; c < count; ++c) {
    codes[follower - 2] = c;
    engine.successors(codes.data());
    engine.eval(probs.data(), util.data(), nullptr);
    val_follower[c] = util[follower - 1];
    val_leader[c] = util[0];
  }

  const double best = *std::max_element(val_follower.begin(), val_follower.end());
  BestResponse br;
  br.follower_value = best;
  double best_leader = -std::numeric_limits<double>::infinity();
  std::uint32_t pick = 0;
  for (std::uint32_t c = 0; c < count; ++c) {
    if (val_follower[c] >= best - tie_tol) {
      br.set.push_back(PureStrategy{n, c});
      if (val_leader[c] > best_leader) {  // ties fall to the smaller id
        best_leader = val_leader[c];
        pick = c;
      }
    }
  }
  br.pick = PureStrategy{n, pick};
  br.leader_value = best_leader;
  return br;
}

FollowerProfile follower_profile_br(const GameSpec& game, const MemoryOneStrategy& leader,
                                    double tie_tol) {
  game.validate();
  const int n = game.n;
  leader.validate(game.state_count());

  if (n == 2) {
    BestResponse br = best_response(game, leader, {}, 2, tie_tol);
    FollowerProfile fp;
    fp.strategies = {br.pick};
    fp.leader_value = br.leader_value;
    fp.tolerance_used = tie_tol;
    return fp;
  }

  const std::uint64_t per_follower = pure_strategy_count(n);
  double joint = 1.0;
  for (int f = 0; f < n - 1; ++f) joint *= static_cast<double>(per_follower);
  if (joint > static_cast<double>(kJointBudget))
    throw UnsupportedSizeError("joint follower enumeration exceeds the 2^16 profile budget");

  // n == 3 from here on: two followers, full pair sweep.
  const std::uint32_t count = static_cast<std::uint32_t>(per_follower);
  PureProfileEngine engine(game);
  const std::vector<double> probs = leader_prob_vector(leader);
  std::vector<double> u1(static_cast<std::size_t>(count) * count);
  std::vector<double> u2(static_cast<std::size_t>(count) * count);
  std::vector<double> u3(static_cast<std::size_t>(count) * count);
  std::array<std::uint32_t, 2> codes{};
  std::array<double, 3> util{};
  for (std::uint32_t c2 = 0; c2 < count; ++c2) {
    codes[0] = c2;
    for (std::uint32_t c3 = 0; c3 < count; ++c3) {
      codes[1] = c3;
      engine.successors(codes.data());
      engine.eval(probs.data(), util.data(), nullptr);
      const std::size_t k = static_cast<std::size_t>(c2) * count + c3;
      u1[k] = util[0];
      u2[k] = util[1];
      u3[k] = util[2];
    }
  }
  std::vector<double> best2(count, -std::numeric_limits<double>::infinity());  // per c3
  std::vector<double> best3(count, -std::numeric_limits<double>::infinity());  // per c2
  for (std::uint32_t c2 = 0; c2 < count; ++c2)
    for (std::uint32_t c3 = 0; c3 < count; ++c3) {
      const std::size_t k = static_cast<std::size_t>(c2) * count + c3;
      best2[c3] = std::max(best2[c3], u2[k]);
      best3[c2] = std::max(best3[c2], u3[k]);
    }

  FollowerProfile fp;
  for (double tol = tie_tol;; tol *= 10.0) {
    double best_leader = -std::numeric_limits<double>::infinity();
    std::uint32_t pick2 = 0, pick3 = 0;
    bool found = false;
    for (std::uint32_t c2 = 0; c2 < count; ++c2)
      for (std::uint32_t c3 = 0; c3 < count; ++c3) {
        const std::size_t k = static_cast<std::size_t>(c2) * count + c3;
        if (u2[k] >= best2[c3] - tol && u3[k] >= best3[c2] - tol && u1[k] > best_leader) {
          best_leader = u1[k];
          pick2 = c2;
          pick3 = c3;
          found = true;
        }
      }
    if (found) {
      fp.strategies = {PureStrategy{n, pick2}, PureStrategy{n, pick3}};
      fp.leader_value = best_leader;
      fp.relaxed = tol > tie_tol;
      fp.tolerance_used = tol;
      return fp;
    }
    if (tol >= kRelaxCeiling) break;
  }

  // No mutual best response even at the relaxed tolerance: fall back to the
  // profile with the smallest worst deviation incentive, flagged as such.
  double best_viol = std::numeric_limits<double>::infinity();
  std::uint32_t pick2 = 0, pick3 = 0;
  for (std::uint32_t c2 = 0; c2 < count; ++c2)
    for (std::uint32_t c3 = 0; c3 < count; ++c3) {
      const std::size_t k = static_cast<std::size_t>(c2) * count + c3;
      const double viol = std::max(best2[c3] - u2[k], best3[c2] - u3[k]);
      if (viol < best_viol) {
        best_viol = viol;
        pick2 = c2;
        pick3 = c3;
      }
    }
  fp.strategies = {PureStrategy{n, pick2}, PureStrategy{n, pick3}};
  fp.leader_value = u1[static_cast<std::size_t>(pick2) * count + pick3];
  fp.relaxed = true;
  fp.tolerance_used = best_viol;
  return fp;
}

namespace {

struct CandidateProfile {
  std::vector<std::uint32_t> codes;
  std::vector<std::vector<double>> warm_leaders;

  bool operator<(const CandidateProfile& o) const { return codes < o.codes; }
};

// Best feasible points bucketed by the exact worst deviation incentive.
struct FeasiblePool {
  std::vector<double> tiers;
  std::vector<bool> has;
  std::vector<double> value;
  std::vector<std::vector<double>> leader;
  std::vector<std::vector<std::uint32_t>> codes;

  explicit FeasiblePool(double tie_tol) {
    for (double t = tie_tol; t < kRelaxCeiling * 10.0 - 1e-18; t *= 10.0) tiers.push_back(t);
    has.assign(tiers.size(), false);
    value.assign(tiers.size(), -std::numeric_limits<double>::infinity());
    leader.resize(tiers.size());
    codes.resize(tiers.size());
  }

  void offer(double val, double max_violation, const std::vector<double>& p,
             const std::vector<std::uint32_t>& c) {
    for (std::size_t t = 0; t < tiers.size(); ++t) {
      if (max_violation <= tiers[t] && val > value[t]) {
        has[t] = true;
        value[t] = val;
        leader[t] = p;
        codes[t] = c;
      }
    }
  }
};

struct CandidateOptimizer {
  const PureProfileEngine& engine;
  const std::vector<std::uint32_t>& sigma;  // candidate follower codes
  double mu;  // exact-penalty weight
  FeasiblePool& pool;
  long& sweeps_done;

  int n, m;
  std::uint32_t code_count;
  // per follower: utilities of every pure deviation at the current leader
  std::vector<std::vector<double>> dev_values;
  std::vector<std::vector<std::uint32_t>> active;
  std::vector<double> base_util;  // all players at (leader, sigma)
  std::vector<double> vstar;      // per follower
  std::vector<std::uint32_t> work_codes;

  CandidateOptimizer(const PureProfileEngine& eng, const std::vector<std::uint32_t>& sig,
                     double penalty, FeasiblePool& fp, long& sweeps)
      : engine(eng), sigma(sig), mu(penalty), pool(fp), sweeps_done(sweeps) {
    n = engine.n;
    m = engine.m;
    code_count = static_cast<std::uint32_t>(1u) << m;
    dev_values.assign(n - 1, std::vector<double>(code_count));
    active.assign(n - 1, {});
    base_util.assign(n, 0.0);
    vstar.assign(n - 1, 0.0);
    work_codes.assign(n - 1, 0);
  }

  // Exact pass: every deviation of every follower, refreshed active sets,
  // exact penalized objective, and a feasibility offer to the pool.
  double full_refresh(const std::vector<double>& p) {
    std::vector<double> util(n);
    for (int f = 0; f < n - 1; ++f) {
      work_codes = sigma;
      for (std::uint32_t c = 0; c < code_count; ++c) {
        work_codes[f] = c;
        engine.successors(work_codes.data());
        engine.eval(p.data(), util.data(), nullptr);
        dev_values[f][c] = util[f + 1];
      }
    }
    engine.successors(sigma.data());
    engine.eval(p.data(), base_util.data(), nullptr);

    double penalty = 0.0;
    double max_violation = -std::numeric_limits<double>::infinity();
    for (int f = 0; f < n - 1; ++f) {
      vstar[f] = *std::max_element(dev_values[f].begin(), dev_values[f].end());
      const double viol = vstar[f] - base_util[f + 1];
      max_violation = std::max(max_violation, viol);
      penalty += std::max(0.0, viol);

      // Active set: the strongest dozen deviations plus the candidate itself.
      std::vector<std::uint32_t>& act = active[f];
      act.clear();
      std::vector<std::uint32_t> order(code_count);
      for (std::uint32_t c = 0; c < code_count; ++c) order[c] = c;
      const std::size_t keep = std::min<std::size_t>(12, code_count);
      std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                        [&](std::uint32_t a, std::uint32_t b) {
                          return dev_values[f][a] > dev_values[f][b];
                        });
      act.assign(order.begin(), order.begin() + keep);
      if (std::find(act.begin(), act.end(), sigma[f]) == act.end()) act.push_back(sigma[f]);
    }
    pool.offer(base_util[0], max_violation, p, sigma);
    return base_util[0] - mu * penalty;
  }

  struct Fit {  // affine numerator/denominator in the active coordinate
    double num0 = 0, num1 = 0, den0 = 1, den1 = 1;
    double at(double x) const { return (num0 + x * (num1 - num0)) / (den0 + x * (den1 - den0)); }
  };

  // Fits along leader coordinate t for the base profile (all players) and
  // the active deviations (follower utility only). The determinant and the
  // weighted numerators are affine in a single coordinate, so two exact
  // evaluations pin each ratio down.
  void fit_coordinate(std::vector<double>& p, int t, std::vector<Fit>& base_fit,
                      std::vector<std::vector<Fit>>& dev_fit) {
    std::vector<double> util(n);
    double det = 0.0;
    const double saved = p[t];
    base_fit.assign(n, Fit{});
    dev_fit.assign(n - 1, {});

    engine.successors(sigma.data());
    p[t] = 0.0;
    engine.eval(p.data(), util.data(), &det);
    for (int i = 0; i < n; ++i) { base_fit[i].num0 = util[i] * det; base_fit[i].den0 = det; }
    p[t] = 1.0;
    engine.eval(p.data(), util.data(), &det);
    for (int i = 0; i < n; ++i) { base_fit[i].num1 = util[i] * det; base_fit[i].den1 = det; }

    for (int f = 0; f < n - 1; ++f) {
      dev_fit[f].resize(active[f].size());
      work_codes = sigma;
      for (std::size_t a = 0; a < active[f].size(); ++a) {
        work_codes[f] = active[f][a];
        engine.successors(work_codes.data());
        Fit fit;
        p[t] = 0.0;
        engine.eval(p.data(), util.data(), &det);
        fit.num0 = util[f + 1] * det;
        fit.den0 = det;
        p[t] = 1.0;
        engine.eval(p.data(), util.data(), &det);
        fit.num1 = util[f + 1] * det;
        fit.den1 = det;
        dev_fit[f][a] = fit;
      }
    }
    p[t] = saved;
  }

  double penalized_at(double x, const std::vector<Fit>& base_fit,
                      const std::vector<std::vector<Fit>>& dev_fit) const {
    double h = base_fit[0].at(x);
    for (int f = 0; f < n - 1; ++f) {
      const double mine = base_fit[f + 1].at(x);
      double best = -std::numeric_limits<double>::infinity();
      for (const Fit& fit : dev_fit[f]) best = std::max(best, fit.at(x));
      h -= mu * std::max(0.0, best - mine);
    }
    return h;
  }

  void run(std::vector<double> p, int max_sweeps) {
    for (double& x : p) x = std::min(1.0, std::max(0.0, x));
    double f_prev = full_refresh(p);
    std::vector<Fit> base_fit;
    std::vector<std::vector<Fit>> dev_fit;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      ++sweeps_done;
      for (int t = 0; t < m; ++t) {
        fit_coordinate(p, t, base_fit, dev_fit);
        // Coarse scan, then golden-section inside the best bracket.
        double best_x = p[t];
        double best_h = penalized_at(best_x, base_fit, dev_fit);
        for (int i = 0; i <= 16; ++i) {
          const double x = i / 16.0;
          const double h = penalized_at(x, base_fit, dev_fit);
          if (h > best_h) { best_h = h; best_x = x; }
        }
        double lo = std::max(0.0, best_x - 1.0 / 16.0);
        double hi = std::min(1.0, best_x + 1.0 / 16.0);
        const double gr = 0.6180339887498949;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double h1 = penalized_at(x1, base_fit, dev_fit);
        double h2 = penalized_at(x2, base_fit, dev_fit);
        while (hi - lo > 1e-10) {
          if (h1 >= h2) {
            hi = x2; x2 = x1; h2 = h1;
            x1 = hi - gr * (hi - lo);
            h1 = penalized_at(x1, base_fit, dev_fit);
          } else {
            lo = x1; x1 = x2; h1 = h2;
            x2 = lo + gr * (hi - lo);
            h2 = penalized_at(x2, base_fit, dev_fit);
          }
        }
        const double xg = h1 >= h2 ? x1 : x2;
        const double hg = std::max(h1, h2);
        if (hg > best_h) { best_h = hg; best_x = xg; }
        p[t] = best_x;
      }
      const double f_now = full_refresh(p);
      if (std::fabs(f_now - f_prev) < 1e-10) break;
      f_prev = f_now;
    }
  }
};

}  // namespace

SseResult sse_solve(const GameSpec& game, double tie_tol,
                    const std::vector<MemoryOneStrategy>& warm_leaders) {
  game.validate();
  if (game.n > 3)
    throw UnsupportedSizeError("the equilibrium pipeline supports n <= 3");
  const int n = game.n;
  const int m = game.state_count();

  PureProfileEngine engine(game);
  double scale = 1.0;
  for (const auto& t : game.tables) {
    for (double v : t.act1) scale = std::max(scale, std::fabs(v));
    for (double v : t.act2) scale = std::max(scale, std::fabs(v));
  }
  const double mu = 1e4 * scale;

  // Candidate follower profiles.
  std::vector<CandidateProfile> candidates;
  if (n == 2) {
    for (std::uint32_t c = 0; c < 16; ++c) candidates.push_back({{c}, {}});
  } else {
    // Enumerating all 2^16 joint profiles with a constrained solve each is
    // far past the budget; candidates are the leader-optimistic mutual-BR
    // profiles of a spread of probe leaders instead, each probe kept as a
    // warm start for the candidate it produced.
    std::vector<std::vector<double>> probes;
    probes.push_back(std::vector<double>(m, 0.0));
    probes.push_back(std::vector<double>(m, 1.0));
    probes.push_back(std::vector<double>(m, 0.5));
    for (int k = 0; k < 64; ++k) {
      std::vector<double> p(m);
      for (int d = 0; d < m; ++d) p[d] = weyl_coordinate(k, d);
      probes.push_back(std::move(p));
    }
    for (const auto& wl : warm_leaders) probes.push_back(leader_prob_vector(wl));

    for (const auto& probe : probes) {
      MemoryOneStrategy probe_leader;
      probe_leader.probs = probe;
      probe_leader.init_prob = game.initial_probs[0];
      FollowerProfile fp = follower_profile_br(game, probe_leader, tie_tol);
      const std::vector<std::uint32_t> codes = {fp.strategies[0].code, fp.strategies[1].code};
      bool merged = false;
      for (auto& c : candidates)
        if (c.codes == codes) {
          c.warm_leaders.push_back(probe);
          merged = true;
          break;
        }
      if (!merged) candidates.push_back({codes, {probe}});
    }
    std::sort(candidates.begin(), candidates.end());
  }

  FeasiblePool pool(tie_tol);
  long sweeps = 0;
  int starts_used = 0;
  std::vector<std::vector<std::uint32_t>> processed;
  auto optimize_candidate = [&](const CandidateProfile& cand) {
    processed.push_back(cand.codes);
    CandidateOptimizer opt(engine, cand.codes, mu, pool, sweeps);
    // 32 baseline starts: corner seeds up to 16, remainder quasi-random.
    std::vector<std::vector<double>> starts;
    const int corners = std::min(16, 1 << m);
    for (int c = 0; c < corners; ++c) {
      std::vector<double> p(m);
      for (int j = 0; j < m; ++j) p[j] = static_cast<double>(pure_bit(c, m, j));
      starts.push_back(std::move(p));
    }
    int k = 0;
    while (static_cast<int>(starts.size()) < 32) {
      std::vector<double> p(m);
      for (int d = 0; d < m; ++d) p[d] = weyl_coordinate(17 * (k + 1), d);
      starts.push_back(std::move(p));
      ++k;
    }
    for (const auto& wlp : cand.warm_leaders) starts.push_back(wlp);
    if (n == 2)
      for (const auto& wl : warm_leaders) starts.push_back(leader_prob_vector(wl));

    for (const auto& s : starts) {
      opt.run(s, 200);
      ++starts_used;
    }
  };
  for (const CandidateProfile& cand : candidates) optimize_candidate(cand);

  auto best_tier = [&]() {
    for (std::size_t t = 0; t < pool.tiers.size(); ++t)
      if (pool.has[t]) return static_cast<int>(t);
    return -1;
  };

  // Self-consistency rounds: if the optimistic mutual-BR profile of the best
  // leader found differs from its candidate, optimize that profile too.
  if (n == 3) {
    for (int round = 0; round < 8; ++round) {
      const int tier = best_tier();
      if (tier < 0) break;
      MemoryOneStrategy leader;
      leader.probs = pool.leader[tier];
      leader.init_prob = game.initial_probs[0];
      FollowerProfile fp = follower_profile_br(game, leader, tie_tol);
      const std::vector<std::uint32_t> codes = {fp.strategies[0].code, fp.strategies[1].code};
      if (std::find(processed.begin(), processed.end(), codes) != processed.end()) break;
      optimize_candidate({codes, {pool.leader[tier]}});
    }
  }

  // Tightest tolerance tier with a feasible point wins.
  const int tier = best_tier();
  if (tier < 0)
    throw InternalError("no feasible leader/follower pair found at any tolerance");

  SseResult res;
  res.leader.probs = pool.leader[tier];
  res.leader.init_prob = game.initial_probs[0];
  res.leader_value = pool.value[tier];
  res.starts = starts_used;
  res.iterations = sweeps;
  for (std::uint32_t c : pool.codes[tier]) res.followers.push_back(PureStrategy{n, c});

  // Post-hoc certificate: exact slack against every pure deviation.
  std::vector<double> util(n);
  std::vector<std::uint32_t> codes = pool.codes[tier];
  res.certificates.assign(n - 1, std::numeric_limits<double>::infinity());
  const std::uint32_t count = static_cast<std::uint32_t>(1u) << m;
  engine.successors(codes.data());
  engine.eval(res.leader.probs.data(), util.data(), nullptr);
  std::vector<double> own(n - 1);
  for (int f = 0; f < n - 1; ++f) own[f] = util[f + 1];
  for (int f = 0; f < n - 1; ++f) {
    std::vector<std::uint32_t> work = codes;
    for (std::uint32_t c = 0; c < count; ++c) {
      if (c == codes[f]) continue;
      work[f] = c;
      engine.successors(work.data());
      engine.eval(res.leader.probs.data(), util.data(), nullptr);
      res.certificates[f] = std::min(res.certificates[f], own[f] - util[f + 1]);
    }
  }
  return res;
}

ZdBest best_zd_value(const GameSpec& game, const std::vector<double>& omega, double tie_tol) {
  game.validate();
  const double leader_init = game.initial_probs[0];
  FeasibleRegion region = feasibility_region(game, omega, leader_init);
  if (region.empty) throw EmptyRegionError("no equalizer exists");

  ZdBest best;
  best.gamma_minus = region.gamma_minus;
  best.gamma_plus = region.gamma_plus;

  EqualizerSpec spec;
  spec.omega = omega;
  spec.leader_init = leader_init;

  spec.gamma = region.gamma_plus;
  spec.phi = region.plus_witness.u;
  best.pi_plus = synthesize_equalizer(game, spec);
  spec.gamma = region.gamma_minus;
  spec.phi = region.minus_witness.u;
  best.pi_minus = synthesize_equalizer(game, spec);

  best.plus_value = follower_profile_br(game, best.pi_plus, tie_tol).leader_value;
  best.minus_value = follower_profile_br(game, best.pi_minus, tie_tol).leader_value;
  if (best.plus_value >= best.minus_value) {
    best.value = best.plus_value;
    best.witness = '+';
  } else {
    best.value = best.minus_value;
    best.witness = '-';
  }

  // Diagnostic sweep: can an interior target beat both extremes?
  best.best_interior_value = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < 32; ++k) {
    const double gamma = region.gamma_minus +
                         k * (region.gamma_plus - region.gamma_minus) / 32.0;
    auto range = phi_range_for_gamma(game, omega, leader_init, gamma);
    if (!range) continue;
    spec.gamma = gamma;
    spec.phi = 0.5 * (range->first + range->second);
    MemoryOneStrategy pi;
    try {
      pi = synthesize_equalizer(game, spec);
    } catch (const InfeasibleEqualizerError&) {
      continue;  // numerically marginal target on the boundary
    }
    const double val = follower_profile_br(game, pi, tie_tol).leader_value;
    if (val > best.best_interior_value) {
      best.best_interior_value = val;
      best.best_interior_gamma = gamma;
    }
  }
  best.interior_beats_extremes =
      best.best_interior_value > std::max(best.plus_value, best.minus_value) + 1e-12;
  return best;
}

GapReport gap_report(const GameSpec& game, const std::vector<double>& omega, double tie_tol) {
  game.validate();
  if (game.n > 3)
    throw UnsupportedSizeError("the equilibrium pipeline supports n <= 3");
  GapReport report;
  report.zd = best_zd_value(game, omega, tie_tol);
  report.sse = sse_solve(game, tie_tol, {report.zd.pi_plus, report.zd.pi_minus});

  report.sse_value = report.sse.leader_value;
  report.zd_value = report.zd.value;
  report.gap = report.sse_value - report.zd_value;
  report.gamma_minus = report.zd.gamma_minus;
  report.gamma_plus = report.zd.gamma_plus;
  report.witness = report.zd.witness;
  report.witness_gamma = report.zd.witness == '+' ? report.zd.gamma_plus : report.zd.gamma_minus;
  report.heuristic = true;
  if (game.n > 2) {
    for (int i = 2; i < game.n; ++i) {
      const PayoffTable& a = game.tables[1];
      const PayoffTable& b = game.tables[i];
      if (a.act1 != b.act1 || a.act2 != b.act2) report.follower_tables_differ = true;
    }
  }
  return report;
}

}  // namespace zdforge
