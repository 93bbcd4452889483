#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the library's dynamic programs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "lmdp/model.hpp"

namespace oracle {

/// Finite-horizon value iteration for a single-context model (context 0).
inline double value_iteration(const lmdp::LmdpModel& model) {
  const int S = model.num_states(), A = model.num_actions();
  std::vector<double> v(static_cast<std::size_t>(S), 0.0), nv(v.size());
  for (int t = model.horizon(); t >= 1; --t) {
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        double q = model.reward(0, s, a);
        for (int s2 = 0; s2 < S; ++s2) q += model.transition(0, s, a, s2) * v[static_cast<std::size_t>(s2)];
        best = std::max(best, q);
      }
      nv[static_cast<std::size_t>(s)] = best;
    }
    v.swap(nv);
  }
  double out = 0.0;
  for (int s = 0; s < S; ++s) out += model.init(0, s) * v[static_cast<std::size_t>(s)];
  return out;
}

/// max p^T v over the box-simplex by enumerating vertices: every coordinate
/// at a bound except one, which absorbs the remaining mass.
inline double box_simplex_vertex_max(const std::vector<double>& phat, const std::vector<double>& eps,
                                     const std::vector<double>& v) {
  const std::size_t n = phat.size();
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = std::max(phat[i] - eps[i], 0.0);
    hi[i] = std::min(phat[i] + eps[i], 1.0);
  }
  double best = -std::numeric_limits<double>::infinity();
  const std::uint32_t combos = 1u << n;
  for (std::size_t free = 0; free < n; ++free) {
    for (std::uint32_t mask = 0; mask < combos; ++mask) {
      if (mask & (1u << free)) continue;
      double mass = 0.0, obj = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == free) continue;
        const double x = (mask & (1u << i)) ? hi[i] : lo[i];
        mass += x;
        obj += x * v[i];
      }
      const double rest = 1.0 - mass;
      if (rest < lo[free] - 1e-12 || rest > hi[free] + 1e-12) continue;
      best = std::max(best, obj + rest * v[free]);
    }
  }
  return best;
}

/// Direct sampler, separate from lmdp::Rng.
struct Sampler {
  std::mt19937_64 engine;
  explicit Sampler(std::uint64_t seed) : engine(seed) {}
  int draw(std::span<const double> p) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = u(engine), acc = 0.0;
    int last = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      acc += p[i];
      last = static_cast<int>(i);
      if (x < acc) return last;
    }
    return last;
  }
};

struct MomentEstimate {
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
};

/// Sample mean and variance with standard errors; the variance SE uses the
/// fourth central moment, sqrt((mu4 - sigma^4) / n).
inline MomentEstimate moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  MomentEstimate e;
  e.mean = mean;
  e.variance = m2 * n / (n - 1.0);
  e.mean_se = std::sqrt(m2 / n);
  e.variance_se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  return e;
}

/// Monte-Carlo total rewards of a policy given as a function of the
/// observed history (s_1, a_1, r_1, ..., s_t).
struct Obs {
  int state;
  int action;
  double reward;
};
using HistoryPolicy = std::function<int(const std::vector<Obs>& past, int state)>;

inline std::vector<double> sample_returns(const lmdp::LmdpModel& model, const HistoryPolicy& policy,
                                          int episodes, std::uint64_t seed,
                                          std::vector<double>* per_context_sum = nullptr,
                                          std::vector<int>* per_context_count = nullptr) {
  Sampler rng(seed);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(episodes));
  std::vector<Obs> past;
  for (int k = 0; k < episodes; ++k) {
    const int m = rng.draw(model.weights());
    int s = rng.draw(model.init(m));
    past.clear();
    double total = 0.0;
    for (int t = 0; t < model.horizon(); ++t) {
      const int a = policy(past, s);
      const double r = model.reward(m, s, a);
      total += r;
      past.push_back({s, a, r});
      s = rng.draw(model.transition(m, s, a));
    }
    out.push_back(total);
    if (per_context_sum) (*per_context_sum)[static_cast<std::size_t>(m)] += total;
    if (per_context_count) ++(*per_context_count)[static_cast<std::size_t>(m)];
  }
  return out;
}

/// Every deterministic history-dependent policy, by brute-force recursion
/// over histories; returns the best expected total reward. Tiny models only.
inline double brute_force_tree_optimum(const lmdp::LmdpModel& model) {
  const int M = model.num_contexts(), S = model.num_states(), A = model.num_actions();
  // Weighted value of a history with unnormalized weights beta: maximize over
  // the action, then branch on every observable (r, s').
  std::function<double(int, int, const std::vector<double>&)> best = [&](int t, int s,
                                                                          const std::vector<double>& beta) {
    if (t > model.horizon()) return 0.0;
    double top = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < A; ++a) {
      double v = 0.0;
      std::vector<std::pair<double, int>> seen;
      for (int m = 0; m < M; ++m) {
        if (beta[static_cast<std::size_t>(m)] <= 0.0) continue;
        v += beta[static_cast<std::size_t>(m)] * model.reward(m, s, a);
        for (int s2 = 0; s2 < S; ++s2) {
          if (model.transition(m, s, a, s2) > 0.0) seen.emplace_back(model.reward(m, s, a), s2);
        }
      }
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      for (const auto& [r, s2] : seen) {
        std::vector<double> nb(static_cast<std::size_t>(M), 0.0);
        for (int m = 0; m < M; ++m) {
          if (model.reward(m, s, a) == r) nb[static_cast<std::size_t>(m)] = beta[static_cast<std::size_t>(m)] * model.transition(m, s, a, s2);
        }
        v += best(t + 1, s2, nb);
      }
      top = std::max(top, v);
    }
    return top;
  };
  double total = 0.0;
  for (int s = 0; s < S; ++s) {
    std::vector<double> beta(static_cast<std::size_t>(M));
    double mass = 0.0;
    for (int m = 0; m < M; ++m) mass += (beta[static_cast<std::size_t>(m)] = model.weight(m) * model.init(m, s));
    if (mass > 0.0) total += best(1, s, beta);
  }
  return total;
}

}  // namespace oracle
