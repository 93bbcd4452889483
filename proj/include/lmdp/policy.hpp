#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lmdp/history_tree.hpp"

namespace lmdp {

/// state -> action
struct StationaryPolicy {
  std::vector<int> actions;
};

/// history node -> action, on a specific tree.
struct TreePolicy {
  std::shared_ptr<const HistoryTree> tree;
  std::vector<int> actions;
};

using Policy = std::variant<StationaryPolicy, TreePolicy>;

enum class PolicyClass { Stationary, Tree };

PolicyClass parse_policy_class(std::string_view tag);
std::string_view to_string(PolicyClass c);

/// Action taken at a history node; stationary policies look at the node's state.
inline int action_at(const Policy& policy, const HistoryTree& tree, int node) {
  if (const auto* p = std::get_if<StationaryPolicy>(&policy)) {
    return p->actions[static_cast<std::size_t>(tree.node(node).state)];
  }
  return std::get<TreePolicy>(policy).actions[static_cast<std::size_t>(node)];
}

/// Compact human-readable description (action vector, or size for tree policies).
std::string describe(const Policy& policy);

}  // namespace lmdp
