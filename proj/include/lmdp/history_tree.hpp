#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lmdp/model.hpp"

namespace lmdp {

struct HistoryNode {
  int depth = 1;        // t in [1, H + 1]
  int state = 0;        // s_t
  int parent = -1;      // -1 for roots
  int action = -1;      // incoming a_{t-1}
  double reward = 0.0;  // incoming r_{t-1}
  int first_child = 0;
  int num_children = 0;
};

/// Half-open range of node ids.
struct NodeRange {
  int begin = 0;
  int end = 0;
  bool empty() const { return begin == end; }
  int size() const { return end - begin; }
};

/// Every history h_t = (s, a, r)_{1:t-1} s_t that is reachable under some
/// context, for t = 1..H+1.
///
/// Nodes are numbered breadth-first, so a node's children occupy a contiguous
/// id range sorted by (action, reward, next state) and every child id is
/// larger than its parent's. Alongside each node the tree keeps the
/// unnormalized belief weights beta_m(h) = w_m nu_m(s_1) prod P_m(s'|s,a)
/// 1[r = R_m(s,a)].
class HistoryTree {
 public:
  int size() const { return static_cast<int>(nodes_.size()); }
  int num_contexts() const { return num_contexts_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

  const HistoryNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::span<const HistoryNode> nodes() const { return nodes_; }
  std::span<const int> roots() const { return roots_; }

  std::span<const double> beta(int id) const {
    return {beta_.data() + static_cast<std::size_t>(id) * num_contexts_,
            static_cast<std::size_t>(num_contexts_)};
  }

  NodeRange children(int id) const {
    const auto& n = node(id);
    return {n.first_child, n.first_child + n.num_children};
  }
  /// Children reached by `action`.
  NodeRange children(int id, int action) const;
  /// Children reached by `action` with observed `reward`, ordered by state.
  NodeRange children(int id, int action, double reward) const;

  /// -1 when the history has no such continuation.
  int find_child(int id, int action, double reward, int next_state) const;
  int find_root(int state) const;

  /// Nodes with depth <= H, i.e. the ones where an action is taken.
  int num_decision_nodes() const { return num_decision_nodes_; }

 private:
  friend HistoryTree build_history_tree(const LmdpModel&, std::size_t);

  int num_contexts_ = 0;
  int num_actions_ = 0;
  int horizon_ = 0;
  int num_decision_nodes_ = 0;
  std::vector<HistoryNode> nodes_;
  std::vector<int> roots_;
  std::vector<double> beta_;
  // Per node, A + 1 offsets into its child range, one block per action.
  std::vector<int> action_offsets_;
};

/// Enumerates the reachable histories. Throws CapExceeded past `node_cap`.
HistoryTree build_history_tree(const LmdpModel& model, std::size_t node_cap = Caps{}.nodes);

}  // namespace lmdp
