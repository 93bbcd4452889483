#pragma once

#include <memory>

#include "lmdp/backup.hpp"
#include "lmdp/history_tree.hpp"
#include "lmdp/model.hpp"
#include "lmdp/policy.hpp"

namespace lmdp {

/// True-model alpha vectors of `policy` on every node of `tree`. Stationary
/// policies are lifted node-wise through the node's state.
AlphaTable alpha_eval(const LmdpModel& model, const HistoryTree& tree, const Policy& policy);

/// V^pi = sum_m sum_s w_m nu_m(s) alpha_m(s).
double value_of_policy(const LmdpModel& model, const Policy& policy);

/// Optimal history-dependent policy by backward induction over the tree,
/// choosing at every node the action with the largest belief-weighted
/// Q-value. Ties go to the smallest action.
PolicyValue plan_optimal(const LmdpModel& model, std::shared_ptr<const HistoryTree> tree);

/// Best policy of the given class: plan_optimal for Tree, exhaustive search
/// for Stationary.
PolicyValue optimal_policy(const LmdpModel& model, PolicyClass policy_class, const Caps& caps = {});

/// Variance of the episode's total reward under `policy` (law of total
/// variance over contexts, initial states and transitions).
double policy_variance(const LmdpModel& model, const Policy& policy);

/// Var* = max over the class of policy_variance.
///
/// Stationary: enumeration, requires A^S <= caps.policies. Tree: exact
/// dynamic program over the sets of achievable per-context (mean, second
/// moment) pairs; throws EnumerationCapExceeded when a set outgrows
/// caps.policies.
double var_star(const LmdpModel& model, PolicyClass policy_class, const Caps& caps = {});

}  // namespace lmdp
