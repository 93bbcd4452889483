#include "lmdp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lmdp/environment.hpp"
#include "lmdp/errors.hpp"

namespace lmdp {

namespace {

std::int64_t factorial_capped(int n, std::int64_t cap) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) {
    if (f > cap / i) return cap + 1;
    f *= i;
  }
  return f;
}

}  // namespace

std::vector<int> permutation_from_index(std::int64_t m, int d1) {
  if (d1 <= 0 || m < 0 || m >= factorial_capped(d1, m + 1)) {
    throw DomainError("permutation index " + std::to_string(m) + " out of range for d1 = " +
                      std::to_string(d1));
  }
  std::vector<int> pool(static_cast<std::size_t>(d1));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(pool.size());
  std::int64_t rest = m;
  for (int i = d1; i >= 1; --i) {
    const std::int64_t block = factorial_capped(i - 1, rest + 1);
    const auto digit = static_cast<std::size_t>(rest / block);
    rest %= block;
    out.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return out;
}

HardInstance build_hard_instance(const HardInstanceParams& p) {
  const int M = p.contexts, S = p.states, A = p.actions;
  if (S < 6) throw DomainError("hard instance needs S >= 6");
  if (A < 2) throw DomainError("hard instance needs A >= 2");
  if (M < 1) throw DomainError("hard instance needs M >= 1");
  if (!(p.variance > 0.0 && p.variance <= 0.25)) throw DomainError("variance must lie in (0, 1/4]");
  if (p.episodes_hint < 1) throw DomainError("episode hint must be positive");

  HardInstanceMeta meta;
  meta.d1 = 1;
  while (factorial_capped(meta.d1, M) < M) ++meta.d1;
  if (meta.d1 > S / 2) throw DomainError("M exceeds floor(S/2)! contexts");
  meta.d2 = 1;
  while ((1 << (meta.d2 + 1)) - 1 <= S - meta.d1 - 2) ++meta.d2;
  meta.N_tree = (1 << meta.d2) - 1;
  meta.L = 1 << (meta.d2 - 1);
  meta.C = meta.L * A;
  const double C = meta.C;
  meta.epsilon = std::min(0.25, (1.0 / (2.0 * std::sqrt(2.0))) * (1.0 - 1.0 / C) *
                                    std::sqrt(C * 2.0 * M / static_cast<double>(p.episodes_hint)));
  meta.x = std::min(1.0, 2.0 * std::sqrt(p.variance));
  const int needed = meta.d1 + meta.d2 + 1;
  meta.horizon = p.horizon.value_or(meta.d1 + meta.d2 + 3);
  if (meta.horizon < needed) {
    throw DomainError("horizon must be at least d1 + d2 + 1 = " + std::to_string(needed));
  }

  if (!p.answers.empty()) {
    if (static_cast<int>(p.answers.size()) != M) throw DomainError("need one answer per context");
    for (const auto& [l, a] : p.answers) {
      if (l < 0 || l >= meta.L || a < 0 || a >= A) throw DomainError("answer out of range");
      meta.leaf.push_back(l);
      meta.action.push_back(a);
    }
  } else {
    Rng rng(p.seed);
    for (int m = 0; m < M; ++m) {
      meta.leaf.push_back(static_cast<int>(rng.uniform() * meta.L));
      meta.action.push_back(static_cast<int>(rng.uniform() * A));
    }
  }

  const auto idx = [&](int m, int s, int a) {
    return (static_cast<std::size_t>(m) * S + static_cast<std::size_t>(s)) * A + static_cast<std::size_t>(a);
  };
  std::vector<double> weights(static_cast<std::size_t>(M), 1.0 / M);
  std::vector<double> init(static_cast<std::size_t>(M) * S, 0.0);
  std::vector<double> trans(static_cast<std::size_t>(M) * S * A * S, 0.0);
  std::vector<double> rewards(static_cast<std::size_t>(M) * S * A, 0.0);
  const int g = meta.good_state(), t = meta.terminal_state();

  for (int m = 0; m < M; ++m) {
    meta.sigma.push_back(permutation_from_index(m, meta.d1));
    const auto& sigma = meta.sigma.back();
    init[static_cast<std::size_t>(m) * S + static_cast<std::size_t>(sigma[0])] = 1.0;
    auto set = [&](int s, int a, int s2, double v) { trans[idx(m, s, a) * S + static_cast<std::size_t>(s2)] = v; };
    for (int a = 0; a < A; ++a) {
      for (int i = 0; i + 1 < meta.d1; ++i) set(sigma[static_cast<std::size_t>(i)], a, sigma[static_cast<std::size_t>(i) + 1], 1.0);
      set(sigma[static_cast<std::size_t>(meta.d1) - 1], a, meta.tree_state(1), 1.0);
      // Action a picks child 2i + ((a + 1) mod 2).
      for (int i = 1; i < meta.L; ++i) set(meta.tree_state(i), a, meta.tree_state(2 * i + (a + 1) % 2), 1.0);
      for (int l = 0; l < meta.L; ++l) {
        const double bump =
            (l == meta.leaf[static_cast<std::size_t>(m)] && a == meta.action[static_cast<std::size_t>(m)]) ? meta.epsilon : 0.0;
        set(meta.leaf_state(l), a, t, 0.5 - bump);
        set(meta.leaf_state(l), a, g, 0.5 + bump);
      }
      set(g, a, t, 1.0);
      rewards[idx(m, g, a)] = meta.x;
      for (int s = t; s < S; ++s) set(s, a, t, 1.0);
    }
  }
  LmdpModel model(M, S, A, meta.horizon, std::move(weights), std::move(init), std::move(trans),
                  std::move(rewards));
  validate_model(model);
  return {std::move(model), std::move(meta)};
}

LmdpModel random_lmdp(int M, int S, int A, int H, int max_degree, std::uint64_t seed) {
  if (M <= 0 || S <= 0 || A <= 0 || H <= 0) throw DomainError("random_lmdp needs positive sizes");
  if (max_degree < 1 || max_degree > S) throw DomainError("max_degree must lie in [1, S]");
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> gamma1(1.0);
  std::uniform_int_distribution<int> degree(1, max_degree);

  auto dirichlet = [&](std::span<double> out, const std::vector<int>& support) {
    double total = 0.0;
    for (int i : support) total += (out[static_cast<std::size_t>(i)] = gamma1(engine));
    for (int i : support) out[static_cast<std::size_t>(i)] /= total;
  };
  std::vector<int> states(static_cast<std::size_t>(S));
  std::iota(states.begin(), states.end(), 0);
  auto pick_support = [&](int k) {
    std::vector<int> all = states;
    std::shuffle(all.begin(), all.end(), engine);
    all.resize(static_cast<std::size_t>(k));
    std::sort(all.begin(), all.end());
    return all;
  };

  std::vector<double> weights(static_cast<std::size_t>(M));
  {
    std::vector<int> ctx(static_cast<std::size_t>(M));
    std::iota(ctx.begin(), ctx.end(), 0);
    dirichlet(weights, ctx);
  }
  std::vector<double> init(static_cast<std::size_t>(M) * S, 0.0);
  std::vector<double> trans(static_cast<std::size_t>(M) * S * A * S, 0.0);
  std::vector<double> rewards(static_cast<std::size_t>(M) * S * A, 0.0);
  for (int m = 0; m < M; ++m) {
    dirichlet(std::span(init).subspan(static_cast<std::size_t>(m) * S, static_cast<std::size_t>(S)),
              pick_support(degree(engine)));
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const std::size_t r = (static_cast<std::size_t>(m) * S + static_cast<std::size_t>(s)) * A + static_cast<std::size_t>(a);
        dirichlet(std::span(trans).subspan(r * S, static_cast<std::size_t>(S)), pick_support(degree(engine)));
        rewards[r] = unit(engine);
      }
    }
  }
  LmdpModel raw(M, S, A, H, weights, init, trans, rewards);
  const double bound = max_total_reward(raw);
  const double scale = std::max({bound, *std::max_element(rewards.begin(), rewards.end()), 1e-300});
  if (scale > 1.0) {
    for (double& r : rewards) r /= scale;
  }
  LmdpModel model(M, S, A, H, std::move(weights), std::move(init), std::move(trans), std::move(rewards));
  validate_model(model);
  return model;
}

LmdpModel mdp_as_lmdp(int S, int A, int H, std::vector<double> init, std::vector<double> transitions,
                      std::vector<double> rewards) {
  LmdpModel model(1, S, A, H, {1.0}, std::move(init), std::move(transitions), std::move(rewards));
  validate_model(model);
  return model;
}

LmdpModel unroll_with_absorbing(const LmdpModel& base, int horizon) {
  const int M = base.num_contexts(), S = base.num_states(), A = base.num_actions();
  const int H0 = base.horizon();
  if (horizon < H0) throw DomainError("unrolled horizon must be at least the base horizon");
  const int S2 = H0 * S + 1;
  const int sink = S2 - 1;
  auto layer = [&](int t, int s) { return (t - 1) * S + s; };  // t in [1, H0]

  std::vector<double> init(static_cast<std::size_t>(M) * S2, 0.0);
  std::vector<double> trans(static_cast<std::size_t>(M) * S2 * A * S2, 0.0);
  std::vector<double> rewards(static_cast<std::size_t>(M) * S2 * A, 0.0);
  auto row = [&](int m, int s, int a) {
    return (static_cast<std::size_t>(m) * S2 + static_cast<std::size_t>(s)) * A + static_cast<std::size_t>(a);
  };
  for (int m = 0; m < M; ++m) {
    for (int s = 0; s < S; ++s) init[static_cast<std::size_t>(m) * S2 + static_cast<std::size_t>(s)] = base.init(m, s);
    for (int a = 0; a < A; ++a) trans[row(m, sink, a) * S2 + static_cast<std::size_t>(sink)] = 1.0;
    for (int t = 1; t <= H0; ++t) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          const std::size_t r = row(m, layer(t, s), a);
          rewards[r] = base.reward(m, s, a);
          if (t == H0) {
            trans[r * S2 + static_cast<std::size_t>(sink)] = 1.0;
          } else {
            const auto p = base.transition(m, s, a);
            for (int s2 = 0; s2 < S; ++s2) trans[r * S2 + static_cast<std::size_t>(layer(t + 1, s2))] = p[static_cast<std::size_t>(s2)];
          }
        }
      }
    }
  }
  LmdpModel model(M, S2, A, horizon, base.weights_data(), std::move(init), std::move(trans), std::move(rewards));
  validate_model(model);
  return model;
}

}  // namespace lmdp
