#include "lmdp/backup.hpp"

#include <algorithm>
#include <string>

#include "lmdp/errors.hpp"

namespace lmdp {

namespace {

constexpr double kTieTol = 1e-12;

std::size_t checked_product(std::size_t acc, std::size_t factor, std::size_t cap) {
  if (factor != 0 && acc > cap / factor) return cap + 1;
  return std::min(acc * factor, cap + 1);
}

}  // namespace

AlphaTable::AlphaTable(int num_contexts, int num_actions, int num_nodes)
    : num_contexts_(num_contexts),
      num_actions_(num_actions),
      num_nodes_(num_nodes),
      alpha_(static_cast<std::size_t>(num_nodes) * num_contexts, 0.0),
      q_(static_cast<std::size_t>(num_nodes) * num_actions * num_contexts, 0.0) {}

DepthAlpha::DepthAlpha(int horizon, int num_contexts, int num_states)
    : horizon_(horizon),
      num_contexts_(num_contexts),
      num_states_(num_states),
      values_(static_cast<std::size_t>(horizon + 1) * num_contexts * num_states, 0.0) {}

double ExactBackup::operator()(int m, int s, int a, std::span<const double> next,
                               std::span<const std::uint8_t>) const {
  const auto row = model_->transition(m, s, a);
  double v = model_->reward(m, s, a);
  for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * next[i];
  return v;
}

bool ExactBackup::depends_on(int m, int s, int a, int s_next) const {
  return model_->transition(m, s, a, s_next) > 0.0;
}

AlphaTable evaluate_on_tree(const LmdpModel& model, const HistoryTree& tree,
                            const RowBackup& backup, const ActionChooser& choose) {
  const int M = model.num_contexts(), S = model.num_states(), A = model.num_actions();
  const int H = model.horizon();
  AlphaTable table(M, A, tree.size());
  std::vector<double> next(static_cast<std::size_t>(S));
  std::vector<std::uint8_t> allowed(static_cast<std::size_t>(S));

  for (int id = tree.size() - 1; id >= 0; --id) {
    const HistoryNode& node = tree.node(id);
    if (node.depth > H) continue;
    for (int a = 0; a < A; ++a) {
      for (int m = 0; m < M; ++m) {
        std::fill(next.begin(), next.end(), 0.0);
        std::fill(allowed.begin(), allowed.end(), std::uint8_t{0});
        const NodeRange group = tree.children(id, a, model.reward(m, node.state, a));
        for (int c = group.begin; c < group.end; ++c) {
          const auto s2 = static_cast<std::size_t>(tree.node(c).state);
          next[s2] = table.alpha(c, m);
          allowed[s2] = 1;
        }
        table.q(id, a, m) = backup(m, node.state, a, next, allowed);
      }
    }
    const int chosen = choose(id, table);
    for (int m = 0; m < M; ++m) table.alpha(id, m) = table.q(id, chosen, m);
  }
  return table;
}

AlphaTable evaluate_on_tree(const LmdpModel& model, const HistoryTree& tree,
                            const RowBackup& backup, const Policy& policy) {
  return evaluate_on_tree(model, tree, backup,
                          [&](int node, const AlphaTable&) { return action_at(policy, tree, node); });
}

double root_value(const LmdpModel& model, const HistoryTree& tree, const AlphaTable& table) {
  double v = 0.0;
  for (int root : tree.roots()) {
    const int s = tree.node(root).state;
    for (int m = 0; m < model.num_contexts(); ++m) {
      v += model.weight(m) * model.init(m, s) * table.alpha(root, m);
    }
  }
  return v;
}

DepthAlpha evaluate_stationary(const LmdpModel& model, const StationaryPolicy& policy,
                               const RowBackup& backup) {
  const int M = model.num_contexts(), S = model.num_states(), H = model.horizon();
  DepthAlpha table(H, M, S);
  for (int t = H; t >= 1; --t) {
    for (int m = 0; m < M; ++m) {
      const auto next = table.row(t + 1, m);
      auto cur = table.row(t, m);
      for (int s = 0; s < S; ++s) {
        cur[static_cast<std::size_t>(s)] =
            backup(m, s, policy.actions[static_cast<std::size_t>(s)], next, {});
      }
    }
  }
  return table;
}

double root_value(const LmdpModel& model, const DepthAlpha& table) {
  double v = 0.0;
  for (int m = 0; m < model.num_contexts(); ++m) {
    const auto init = model.init(m);
    const auto alpha = table.row(1, m);
    for (std::size_t s = 0; s < init.size(); ++s) v += model.weight(m) * init[s] * alpha[s];
  }
  return v;
}

std::size_t count_stationary_policies(const LmdpModel& model, std::size_t cap) {
  std::size_t n = 1;
  for (int s = 0; s < model.num_states(); ++s) {
    n = checked_product(n, static_cast<std::size_t>(model.num_actions()), cap);
  }
  return n;
}

PolicyValue maximize_stationary(const LmdpModel& model, const RowBackup& backup,
                                std::size_t cap) {
  if (count_stationary_policies(model, cap) > cap) {
    throw EnumerationCapExceeded("A^S = " + std::to_string(model.num_actions()) + "^" +
                                 std::to_string(model.num_states()) +
                                 " stationary policies exceed the enumeration cap of " +
                                 std::to_string(cap));
  }
  const int S = model.num_states(), A = model.num_actions();
  StationaryPolicy current{std::vector<int>(static_cast<std::size_t>(S), 0)};
  StationaryPolicy best = current;
  double best_value = -1.0;
  while (true) {
    const double v = root_value(model, evaluate_stationary(model, current, backup));
    if (v > best_value + kTieTol) {
      best_value = v;
      best = current;
    }
    int pos = S - 1;
    while (pos >= 0 && current.actions[static_cast<std::size_t>(pos)] == A - 1) {
      current.actions[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++current.actions[static_cast<std::size_t>(pos)];
  }
  return {std::move(best), best_value};
}

namespace {

struct Candidate {
  std::vector<double> values;  // one per relevant context of the node
  int action = 0;
  std::vector<int> picks;  // front index chosen for each used child
};

bool dominates(const std::vector<double>& u, const std::vector<double>& v) {
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] < v[k] - kTieTol) return false;
  }
  return true;
}

// Earlier candidates win ties, which keeps smaller actions on equal values.
std::vector<Candidate> pareto_front(std::vector<Candidate> all) {
  std::vector<Candidate> front;
  if (all.empty()) return front;
  if (all.front().values.size() == 1) {
    double best = all.front().values[0];
    for (const auto& c : all) best = std::max(best, c.values[0]);
    for (auto& c : all) {
      if (c.values[0] >= best - kTieTol) {
        front.push_back(std::move(c));
        break;
      }
    }
    return front;
  }
  for (auto& c : all) {
    const bool covered = std::any_of(front.begin(), front.end(),
                                     [&](const Candidate& u) { return dominates(u.values, c.values); });
    if (covered) continue;
    std::erase_if(front, [&](const Candidate& u) { return dominates(c.values, u.values); });
    front.push_back(std::move(c));
  }
  return front;
}

}  // namespace

PolicyValue maximize_tree(const LmdpModel& model, std::shared_ptr<const HistoryTree> tree_ptr,
                          const RowBackup& backup, std::size_t cap) {
  const HistoryTree& tree = *tree_ptr;
  const int S = model.num_states(), A = model.num_actions(), H = model.horizon();
  const int n = tree.size();

  // Contexts whose alpha at a node can reach the root value.
  std::vector<std::vector<int>> rel(static_cast<std::size_t>(n));
  for (int root : tree.roots()) {
    const int s = tree.node(root).state;
    for (int m = 0; m < model.num_contexts(); ++m) {
      if (model.weight(m) * model.init(m, s) > 0.0) rel[static_cast<std::size_t>(root)].push_back(m);
    }
  }
  for (int id = 0; id < n; ++id) {
    const HistoryNode& node = tree.node(id);
    if (node.depth > H) continue;
    for (int m : rel[static_cast<std::size_t>(id)]) {
      for (int a = 0; a < A; ++a) {
        const NodeRange group = tree.children(id, a, model.reward(m, node.state, a));
        for (int c = group.begin; c < group.end; ++c) {
          if (backup.depends_on(m, node.state, a, tree.node(c).state)) {
            rel[static_cast<std::size_t>(c)].push_back(m);
          }
        }
      }
    }
  }
  auto rel_pos = [&](int node, int m) {
    const auto& r = rel[static_cast<std::size_t>(node)];
    const auto it = std::lower_bound(r.begin(), r.end(), m);
    return (it != r.end() && *it == m) ? static_cast<int>(it - r.begin()) : -1;
  };

  std::vector<std::vector<Candidate>> fronts(static_cast<std::size_t>(n));
  std::vector<double> next(static_cast<std::size_t>(S));
  std::vector<std::uint8_t> allowed(static_cast<std::size_t>(S));
  std::vector<int> used;
  std::vector<int> slot;

  for (int id = n - 1; id >= 0; --id) {
    const auto& r = rel[static_cast<std::size_t>(id)];
    if (r.empty()) continue;
    const HistoryNode& node = tree.node(id);
    if (node.depth > H) {
      fronts[static_cast<std::size_t>(id)].push_back(
          Candidate{std::vector<double>(r.size(), 0.0), 0, {}});
      continue;
    }
    std::vector<Candidate> all;
    for (int a = 0; a < A; ++a) {
      const NodeRange range = tree.children(id, a);
      used.clear();
      slot.assign(static_cast<std::size_t>(range.size()), -1);
      std::size_t combos = 1;
      for (int c = range.begin; c < range.end; ++c) {
        if (rel[static_cast<std::size_t>(c)].empty()) continue;
        slot[static_cast<std::size_t>(c - range.begin)] = static_cast<int>(used.size());
        used.push_back(c);
        combos = checked_product(combos, fronts[static_cast<std::size_t>(c)].size(), cap);
      }
      if (combos > cap) {
        throw EnumerationCapExceeded("tree policy search exceeds the enumeration cap of " +
                                     std::to_string(cap) + " at node " + std::to_string(id));
      }
      std::vector<int> picks(used.size(), 0);
      while (true) {
        Candidate cand{std::vector<double>(r.size()), a, picks};
        for (std::size_t k = 0; k < r.size(); ++k) {
          const int m = r[k];
          std::fill(next.begin(), next.end(), 0.0);
          std::fill(allowed.begin(), allowed.end(), std::uint8_t{0});
          const NodeRange group = tree.children(id, a, model.reward(m, node.state, a));
          for (int c = group.begin; c < group.end; ++c) {
            const auto s2 = static_cast<std::size_t>(tree.node(c).state);
            allowed[s2] = 1;
            const int u = slot[static_cast<std::size_t>(c - range.begin)];
            const int pos = u >= 0 ? rel_pos(c, m) : -1;
            if (pos >= 0) {
              next[s2] = fronts[static_cast<std::size_t>(c)][static_cast<std::size_t>(
                                                                 picks[static_cast<std::size_t>(u)])]
                             .values[static_cast<std::size_t>(pos)];
            }
          }
          cand.values[k] = backup(m, node.state, a, next, allowed);
        }
        all.push_back(std::move(cand));

        int pos = static_cast<int>(used.size()) - 1;
        while (pos >= 0) {
          auto& p = picks[static_cast<std::size_t>(pos)];
          if (++p < static_cast<int>(fronts[static_cast<std::size_t>(used[static_cast<std::size_t>(pos)])].size())) break;
          p = 0;
          --pos;
        }
        if (pos < 0) break;
      }
      if (all.size() > cap) {
        throw EnumerationCapExceeded("tree policy search exceeds the enumeration cap of " +
                                     std::to_string(cap) + " at node " + std::to_string(id));
      }
    }
    fronts[static_cast<std::size_t>(id)] = pareto_front(std::move(all));
  }

  // Roots are independent subtrees; pick each root's best front element.
  TreePolicy policy{tree_ptr, std::vector<int>(static_cast<std::size_t>(n), 0)};
  double value = 0.0;
  std::vector<std::pair<int, int>> stack;
  for (int root : tree.roots()) {
    const auto& front = fronts[static_cast<std::size_t>(root)];
    const auto& r = rel[static_cast<std::size_t>(root)];
    const int s = tree.node(root).state;
    auto score = [&](const Candidate& c) {
      double v = 0.0;
      for (std::size_t k = 0; k < r.size(); ++k) {
        v += model.weight(r[k]) * model.init(r[k], s) * c.values[k];
      }
      return v;
    };
    double best = score(front.front());
    for (const auto& c : front) best = std::max(best, score(c));
    int chosen = 0;
    while (score(front[static_cast<std::size_t>(chosen)]) < best - kTieTol) ++chosen;
    value += score(front[static_cast<std::size_t>(chosen)]);
    stack.emplace_back(root, chosen);
  }
  while (!stack.empty()) {
    const auto [id, idx] = stack.back();
    stack.pop_back();
    if (tree.node(id).depth > H) continue;
    const Candidate& c = fronts[static_cast<std::size_t>(id)][static_cast<std::size_t>(idx)];
    policy.actions[static_cast<std::size_t>(id)] = c.action;
    const NodeRange range = tree.children(id, c.action);
    std::size_t u = 0;
    for (int child = range.begin; child < range.end; ++child) {
      if (rel[static_cast<std::size_t>(child)].empty()) continue;
      stack.emplace_back(child, c.picks[u++]);
    }
  }
  return {std::move(policy), value};
}

}  // namespace lmdp
