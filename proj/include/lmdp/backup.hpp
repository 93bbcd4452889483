#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "lmdp/history_tree.hpp"
#include "lmdp/model.hpp"
#include "lmdp/policy.hpp"

namespace lmdp {

/// alpha_m(h) and alpha_m(h, a) for every node of a history tree.
class AlphaTable {
 public:
  AlphaTable() = default;
  AlphaTable(int num_contexts, int num_actions, int num_nodes);

  int num_contexts() const { return num_contexts_; }
  int num_actions() const { return num_actions_; }
  int num_nodes() const { return num_nodes_; }

  double alpha(int node, int m) const { return alpha_[index(node, m)]; }
  double& alpha(int node, int m) { return alpha_[index(node, m)]; }
  double q(int node, int a, int m) const { return q_[qindex(node, a, m)]; }
  double& q(int node, int a, int m) { return q_[qindex(node, a, m)]; }

 private:
  std::size_t index(int node, int m) const {
    return static_cast<std::size_t>(node) * num_contexts_ + static_cast<std::size_t>(m);
  }
  std::size_t qindex(int node, int a, int m) const {
    return (static_cast<std::size_t>(node) * num_actions_ + static_cast<std::size_t>(a)) *
               num_contexts_ +
           static_cast<std::size_t>(m);
  }

  int num_contexts_ = 0;
  int num_actions_ = 0;
  int num_nodes_ = 0;
  std::vector<double> alpha_;
  std::vector<double> q_;
};

/// alpha_m(t, s) of a stationary policy. Under a stationary policy the alpha of
/// a history depends only on its depth and current state, so this table is the
/// tree table folded onto (t, s), t = 1..H+1.
class DepthAlpha {
 public:
  DepthAlpha(int horizon, int num_contexts, int num_states);

  int horizon() const { return horizon_; }
  std::span<const double> row(int t, int m) const {
    return {values_.data() + offset(t, m), static_cast<std::size_t>(num_states_)};
  }
  std::span<double> row(int t, int m) {
    return {values_.data() + offset(t, m), static_cast<std::size_t>(num_states_)};
  }
  double at(int t, int m, int s) const { return row(t, m)[static_cast<std::size_t>(s)]; }

 private:
  std::size_t offset(int t, int m) const {
    return (static_cast<std::size_t>(t - 1) * num_contexts_ + static_cast<std::size_t>(m)) *
           num_states_;
  }

  int horizon_;
  int num_contexts_;
  int num_states_;
  std::vector<double> values_;
};

/// One backward step of an alpha recursion for row (m, s, a).
///
/// `next` holds the next-depth alphas indexed by successor state. `allowed`,
/// when non-empty, marks the successors that exist in the caller's history
/// structure; a backup that chooses transition mass must keep it on them.
class RowBackup {
 public:
  virtual ~RowBackup() = default;
  virtual double operator()(int m, int s, int a, std::span<const double> next,
                            std::span<const std::uint8_t> allowed) const = 0;
  /// False when the backup of (m, s, a) cannot depend on the alpha of s_next.
  virtual bool depends_on(int m, int s, int a, int s_next) const = 0;
};

/// R_m(s, a) + P_m(. | s, a)^T next.
class ExactBackup final : public RowBackup {
 public:
  explicit ExactBackup(const LmdpModel& model) : model_(&model) {}
  double operator()(int m, int s, int a, std::span<const double> next,
                    std::span<const std::uint8_t> allowed) const override;
  bool depends_on(int m, int s, int a, int s_next) const override;

 private:
  const LmdpModel* model_;
};

/// Called after q(node, ., .) is filled; returns the action to take at node.
using ActionChooser = std::function<int(int node, const AlphaTable& table)>;

/// Backward pass over the tree. Leaves (depth H+1) get alpha = 0.
AlphaTable evaluate_on_tree(const LmdpModel& model, const HistoryTree& tree,
                            const RowBackup& backup, const ActionChooser& choose);
AlphaTable evaluate_on_tree(const LmdpModel& model, const HistoryTree& tree,
                            const RowBackup& backup, const Policy& policy);

/// sum over roots and contexts of w_m nu_m(s) alpha_m(root).
double root_value(const LmdpModel& model, const HistoryTree& tree, const AlphaTable& table);

DepthAlpha evaluate_stationary(const LmdpModel& model, const StationaryPolicy& policy,
                               const RowBackup& backup);
double root_value(const LmdpModel& model, const DepthAlpha& table);

struct PolicyValue {
  Policy policy;
  double value = 0.0;
};

/// Exhaustive search over the A^S stationary policies in lexicographic order;
/// the first policy within 1e-12 of the best value wins. Throws
/// EnumerationCapExceeded when A^S > cap.
PolicyValue maximize_stationary(const LmdpModel& model, const RowBackup& backup,
                                std::size_t cap);

/// Exact maximization over history-dependent deterministic policies for any
/// backup that is nondecreasing in `next`.
///
/// Each node keeps the Pareto front of achievable alpha vectors over the
/// contexts that can still influence the root value; a node's front is built
/// from the product of its children's fronts. Throws EnumerationCapExceeded
/// when a product or front exceeds `cap`.
PolicyValue maximize_tree(const LmdpModel& model, std::shared_ptr<const HistoryTree> tree,
                          const RowBackup& backup, std::size_t cap);

/// A^S, saturating at cap + 1.
std::size_t count_stationary_policies(const LmdpModel& model, std::size_t cap);

}  // namespace lmdp
