#include "lmdp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lmdp/errors.hpp"

namespace lmdp {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kDedupTol = 1e-14;

// Variance of alpha over the (context, initial state) distribution w o nu.
double initial_spread(const LmdpModel& model, auto alpha_of) {
  double mean = 0.0;
  for (int m = 0; m < model.num_contexts(); ++m) {
    for (int s = 0; s < model.num_states(); ++s) {
      mean += model.weight(m) * model.init(m, s) * alpha_of(m, s);
    }
  }
  double var = 0.0;
  for (int m = 0; m < model.num_contexts(); ++m) {
    for (int s = 0; s < model.num_states(); ++s) {
      const double d = alpha_of(m, s) - mean;
      var += model.weight(m) * model.init(m, s) * d * d;
    }
  }
  return var;
}

double stationary_variance(const LmdpModel& model, const StationaryPolicy& policy) {
  const int M = model.num_contexts(), S = model.num_states(), H = model.horizon();
  const DepthAlpha alpha = evaluate_stationary(model, policy, ExactBackup(model));
  DepthAlpha var(H, M, S);
  for (int t = H; t >= 1; --t) {
    for (int m = 0; m < M; ++m) {
      for (int s = 0; s < S; ++s) {
        const auto row = model.transition(m, s, policy.actions[static_cast<std::size_t>(s)]);
        const auto next_var = var.row(t + 1, m);
        double v = empirical_variance(row, alpha.row(t + 1, m));
        for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * next_var[i];
        var.row(t, m)[static_cast<std::size_t>(s)] = v;
      }
    }
  }
  double total = initial_spread(model, [&](int m, int s) { return alpha.at(1, m, s); });
  for (int m = 0; m < M; ++m) {
    for (int s = 0; s < S; ++s) total += model.weight(m) * model.init(m, s) * var.at(1, m, s);
  }
  return std::max(total, 0.0);
}

double tree_variance(const LmdpModel& model, const TreePolicy& policy) {
  const HistoryTree& tree = *policy.tree;
  const int M = model.num_contexts(), S = model.num_states(), H = model.horizon();
  const AlphaTable alpha = alpha_eval(model, tree, policy);
  std::vector<double> var(static_cast<std::size_t>(tree.size()) * M, 0.0);
  std::vector<double> next(static_cast<std::size_t>(S));
  for (int id = tree.size() - 1; id >= 0; --id) {
    const HistoryNode& node = tree.node(id);
    if (node.depth > H) continue;
    const int a = policy.actions[static_cast<std::size_t>(id)];
    for (int m = 0; m < M; ++m) {
      const auto row = model.transition(m, node.state, a);
      std::fill(next.begin(), next.end(), 0.0);
      double v = 0.0;
      const NodeRange group = tree.children(id, a, model.reward(m, node.state, a));
      for (int c = group.begin; c < group.end; ++c) {
        const auto s2 = static_cast<std::size_t>(tree.node(c).state);
        next[s2] = alpha.alpha(c, m);
        v += row[s2] * var[static_cast<std::size_t>(c) * M + m];
      }
      var[static_cast<std::size_t>(id) * M + m] = v + empirical_variance(row, next);
    }
  }
  double total = 0.0, mean = 0.0, second = 0.0;
  for (int root : tree.roots()) {
    const int s = tree.node(root).state;
    for (int m = 0; m < M; ++m) {
      const double p = model.weight(m) * model.init(m, s);
      const double al = alpha.alpha(root, m);
      total += p * var[static_cast<std::size_t>(root) * M + m];
      mean += p * al;
      second += p * al * al;
    }
  }
  return std::max(total + std::max(second - mean * mean, 0.0), 0.0);
}

void dedup(std::vector<std::vector<double>>& set) {
  std::sort(set.begin(), set.end());
  auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i] - y[i]) > kDedupTol) return false;
    }
    return true;
  };
  set.erase(std::unique(set.begin(), set.end(), same), set.end());
}

[[noreturn]] void moment_cap(std::size_t cap) {
  throw EnumerationCapExceeded("variance search exceeds the enumeration cap of " +
                               std::to_string(cap));
}

// Max variance over tree policies. Each node carries the set of achievable
// (alpha_m, E[X_m^2]) pairs over the contexts with positive path weight.
double tree_var_star(const LmdpModel& model, const HistoryTree& tree, std::size_t cap) {
  const int M = model.num_contexts(), A = model.num_actions(), H = model.horizon();
  const int n = tree.size();
  std::vector<std::vector<int>> rel(static_cast<std::size_t>(n));
  for (int id = 0; id < n; ++id) {
    const auto beta = tree.beta(id);
    for (int m = 0; m < M; ++m) {
      if (beta[static_cast<std::size_t>(m)] > 0.0) rel[static_cast<std::size_t>(id)].push_back(m);
    }
  }
  auto rel_pos = [&](int node, int m) {
    const auto& r = rel[static_cast<std::size_t>(node)];
    return static_cast<int>(std::lower_bound(r.begin(), r.end(), m) - r.begin());
  };

  using Moments = std::vector<double>;  // [alpha_k..., second_k...]
  std::vector<std::vector<Moments>> sets(static_cast<std::size_t>(n));
  std::vector<int> used;
  for (int id = n - 1; id >= 0; --id) {
    const auto& r = rel[static_cast<std::size_t>(id)];
    if (r.empty()) continue;
    const std::size_t k_count = r.size();
    const HistoryNode& node = tree.node(id);
    auto& out = sets[static_cast<std::size_t>(id)];
    if (node.depth > H) {
      out.emplace_back(2 * k_count, 0.0);
      continue;
    }
    for (int a = 0; a < A; ++a) {
      const NodeRange range = tree.children(id, a);
      used.clear();
      std::size_t combos = 1;
      for (int c = range.begin; c < range.end; ++c) {
        if (rel[static_cast<std::size_t>(c)].empty()) continue;
        used.push_back(c);
        const std::size_t f = sets[static_cast<std::size_t>(c)].size();
        combos = (combos > cap / f) ? cap + 1 : combos * f;
      }
      if (combos > cap) moment_cap(cap);
      std::vector<int> picks(used.size(), 0);
      while (true) {
        Moments mo(2 * k_count, 0.0);
        for (std::size_t k = 0; k < k_count; ++k) {
          const int m = r[k];
          const double rew = model.reward(m, node.state, a);
          double mean_next = 0.0, second_next = 0.0;
          for (std::size_t u = 0; u < used.size(); ++u) {
            const int c = used[u];
            if (tree.node(c).reward != rew) continue;
            const double p = model.transition(m, node.state, a, tree.node(c).state);
            if (p <= 0.0) continue;
            const auto& child = sets[static_cast<std::size_t>(c)][static_cast<std::size_t>(picks[u])];
            const std::size_t ck = rel[static_cast<std::size_t>(c)].size();
            const auto pos = static_cast<std::size_t>(rel_pos(c, m));
            mean_next += p * child[pos];
            second_next += p * child[ck + pos];
          }
          mo[k] = rew + mean_next;
          mo[k_count + k] = rew * rew + 2.0 * rew * mean_next + second_next;
        }
        out.push_back(std::move(mo));
        int pos = static_cast<int>(used.size()) - 1;
        while (pos >= 0) {
          auto& p = picks[static_cast<std::size_t>(pos)];
          if (++p < static_cast<int>(sets[static_cast<std::size_t>(used[static_cast<std::size_t>(pos)])].size())) break;
          p = 0;
          --pos;
        }
        if (pos < 0) break;
      }
      if (out.size() > cap) moment_cap(cap);
    }
    dedup(out);
  }

  // Fold roots into achievable (E[X], E[X^2]) pairs.
  std::vector<std::vector<double>> totals{{0.0, 0.0}};
  for (int root : tree.roots()) {
    const auto& r = rel[static_cast<std::size_t>(root)];
    const int s = tree.node(root).state;
    std::vector<std::vector<double>> merged;
    for (const auto& base : totals) {
      for (const auto& mo : sets[static_cast<std::size_t>(root)]) {
        double e1 = base[0], e2 = base[1];
        for (std::size_t k = 0; k < r.size(); ++k) {
          const double p = model.weight(r[k]) * model.init(r[k], s);
          e1 += p * mo[k];
          e2 += p * mo[r.size() + k];
        }
        merged.push_back({e1, e2});
        if (merged.size() > cap) moment_cap(cap);
      }
    }
    dedup(merged);
    totals = std::move(merged);
  }
  double best = 0.0;
  for (const auto& t : totals) best = std::max(best, t[1] - t[0] * t[0]);
  return best;
}

}  // namespace

AlphaTable alpha_eval(const LmdpModel& model, const HistoryTree& tree, const Policy& policy) {
  return evaluate_on_tree(model, tree, ExactBackup(model), policy);
}

double value_of_policy(const LmdpModel& model, const Policy& policy) {
  if (const auto* p = std::get_if<StationaryPolicy>(&policy)) {
    return root_value(model, evaluate_stationary(model, *p, ExactBackup(model)));
  }
  const auto& tp = std::get<TreePolicy>(policy);
  return root_value(model, *tp.tree, alpha_eval(model, *tp.tree, policy));
}

PolicyValue plan_optimal(const LmdpModel& model, std::shared_ptr<const HistoryTree> tree) {
  const int M = model.num_contexts(), A = model.num_actions();
  TreePolicy policy{tree, std::vector<int>(static_cast<std::size_t>(tree->size()), 0)};
  auto choose = [&](int node, const AlphaTable& table) {
    const auto beta = tree->beta(node);
    double mass = 0.0;
    for (double b : beta) mass += b;
    int best_a = 0;
    if (mass > 0.0) {
      std::vector<double> score(static_cast<std::size_t>(A), 0.0);
      for (int a = 0; a < A; ++a) {
        for (int m = 0; m < M; ++m) {
          score[static_cast<std::size_t>(a)] += beta[static_cast<std::size_t>(m)] / mass * table.q(node, a, m);
        }
      }
      const double top = *std::max_element(score.begin(), score.end());
      while (score[static_cast<std::size_t>(best_a)] < top - kTieTol) ++best_a;
    }
    policy.actions[static_cast<std::size_t>(node)] = best_a;
    return best_a;
  };
  const AlphaTable table = evaluate_on_tree(model, *tree, ExactBackup(model), choose);
  const double value = root_value(model, *tree, table);
  return {std::move(policy), value};
}

PolicyValue optimal_policy(const LmdpModel& model, PolicyClass policy_class, const Caps& caps) {
  if (policy_class == PolicyClass::Tree) {
    return plan_optimal(model, std::make_shared<const HistoryTree>(build_history_tree(model, caps.nodes)));
  }
  return maximize_stationary(model, ExactBackup(model), caps.policies);
}

double policy_variance(const LmdpModel& model, const Policy& policy) {
  if (const auto* p = std::get_if<StationaryPolicy>(&policy)) return stationary_variance(model, *p);
  return tree_variance(model, std::get<TreePolicy>(policy));
}

double var_star(const LmdpModel& model, PolicyClass policy_class, const Caps& caps) {
  if (policy_class == PolicyClass::Tree) {
    return tree_var_star(model, build_history_tree(model, caps.nodes), caps.policies);
  }
  if (count_stationary_policies(model, caps.policies) > caps.policies) {
    throw EnumerationCapExceeded("A^S stationary policies exceed the enumeration cap of " +
                                 std::to_string(caps.policies));
  }
  const int S = model.num_states(), A = model.num_actions();
  StationaryPolicy current{std::vector<int>(static_cast<std::size_t>(S), 0)};
  double best = 0.0;
  while (true) {
    best = std::max(best, stationary_variance(model, current));
    int pos = S - 1;
    while (pos >= 0 && current.actions[static_cast<std::size_t>(pos)] == A - 1) {
      current.actions[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++current.actions[static_cast<std::size_t>(pos)];
  }
  return best;
}

}  // namespace lmdp
