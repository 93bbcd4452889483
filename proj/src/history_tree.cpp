#include "lmdp/history_tree.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "lmdp/errors.hpp"

namespace lmdp {

NodeRange HistoryTree::children(int id, int action) const {
  const auto base = static_cast<std::size_t>(id) * (num_actions_ + 1);
  const int first = node(id).first_child;
  return {first + action_offsets_[base + action], first + action_offsets_[base + action + 1]};
}

NodeRange HistoryTree::children(int id, int action, double reward) const {
  const NodeRange all = children(id, action);
  int b = all.begin;
  while (b < all.end && node(b).reward != reward) ++b;
  int e = b;
  while (e < all.end && node(e).reward == reward) ++e;
  return {b, e};
}

int HistoryTree::find_child(int id, int action, double reward, int next_state) const {
  const NodeRange r = children(id, action, reward);
  for (int c = r.begin; c < r.end; ++c) {
    if (node(c).state == next_state) return c;
  }
  return -1;
}

int HistoryTree::find_root(int state) const {
  for (int id : roots_) {
    if (node(id).state == state) return id;
  }
  return -1;
}

HistoryTree build_history_tree(const LmdpModel& model, std::size_t node_cap) {
  const int M = model.num_contexts(), S = model.num_states(), A = model.num_actions();
  const int H = model.horizon();

  HistoryTree tree;
  tree.num_contexts_ = M;
  tree.num_actions_ = A;
  tree.horizon_ = H;

  auto add_node = [&](HistoryNode n, std::span<const double> beta) {
    if (tree.nodes_.size() >= node_cap) {
      throw CapExceeded("history tree exceeds node cap of " + std::to_string(node_cap));
    }
    tree.nodes_.push_back(n);
    tree.beta_.insert(tree.beta_.end(), beta.begin(), beta.end());
  };

  std::vector<double> beta(static_cast<std::size_t>(M));
  for (int s = 0; s < S; ++s) {
    double mass = 0.0;
    for (int m = 0; m < M; ++m) {
      beta[static_cast<std::size_t>(m)] = model.weight(m) * model.init(m, s);
      mass += beta[static_cast<std::size_t>(m)];
    }
    if (mass <= 0.0) continue;
    tree.roots_.push_back(static_cast<int>(tree.nodes_.size()));
    add_node(HistoryNode{1, s, -1, -1, 0.0, 0, 0}, beta);
  }

  // Breadth-first expansion; children of node `id` are appended contiguously.
  struct Label {
    int action;
    double reward;
    int next;
  };
  std::vector<Label> labels;
  for (std::size_t id = 0; id < tree.nodes_.size(); ++id) {
    tree.action_offsets_.resize((id + 1) * static_cast<std::size_t>(A + 1), 0);
    const HistoryNode parent = tree.nodes_[id];
    if (parent.depth > H) continue;
    ++tree.num_decision_nodes_;

    tree.nodes_[id].first_child = static_cast<int>(tree.nodes_.size());
    int count = 0;
    for (int a = 0; a < A; ++a) {
      labels.clear();
      for (int m = 0; m < M; ++m) {
        const double r = model.reward(m, parent.state, a);
        const auto row = model.transition(m, parent.state, a);
        for (int s2 = 0; s2 < S; ++s2) {
          if (row[static_cast<std::size_t>(s2)] > 0.0) labels.push_back({a, r, s2});
        }
      }
      std::sort(labels.begin(), labels.end(), [](const Label& x, const Label& y) {
        return std::pair(x.reward, x.next) < std::pair(y.reward, y.next);
      });
      labels.erase(std::unique(labels.begin(), labels.end(),
                               [](const Label& x, const Label& y) {
                                 return x.reward == y.reward && x.next == y.next;
                               }),
                   labels.end());
      for (const Label& l : labels) {
        const auto pb = tree.beta(static_cast<int>(id));
        for (int m = 0; m < M; ++m) {
          const bool consistent = model.reward(m, parent.state, a) == l.reward;
          beta[static_cast<std::size_t>(m)] =
              consistent ? pb[static_cast<std::size_t>(m)] *
                               model.transition(m, parent.state, a, l.next)
                         : 0.0;
        }
        add_node(HistoryNode{parent.depth + 1, l.next, static_cast<int>(id), a, l.reward, 0, 0},
                 beta);
        ++count;
      }
      tree.action_offsets_[id * (A + 1) + a + 1] = count;
    }
    tree.nodes_[id].num_children = count;
  }
  tree.action_offsets_.resize(tree.nodes_.size() * static_cast<std::size_t>(A + 1), 0);
  return tree;
}

}  // namespace lmdp
