#include "lmdp/policy.hpp"

#include <sstream>

#include "lmdp/errors.hpp"

namespace lmdp {

PolicyClass parse_policy_class(std::string_view tag) {
  if (tag == "stationary") return PolicyClass::Stationary;
  if (tag == "tree") return PolicyClass::Tree;
  throw DomainError("unknown policy class '" + std::string(tag) + "'");
}

std::string_view to_string(PolicyClass c) {
  return c == PolicyClass::Stationary ? "stationary" : "tree";
}

std::string describe(const Policy& policy) {
  std::ostringstream os;
  if (const auto* p = std::get_if<StationaryPolicy>(&policy)) {
    os << "stationary [";
    for (std::size_t i = 0; i < p->actions.size(); ++i) os << (i ? " " : "") << p->actions[i];
    os << "]";
  } else {
    const auto& t = std::get<TreePolicy>(policy);
    os << "tree policy over " << t.tree->num_decision_nodes() << " decision nodes, root actions [";
    const auto roots = t.tree->roots();
    for (std::size_t i = 0; i < roots.size(); ++i) {
      os << (i ? " " : "") << "s" << t.tree->node(roots[i]).state << ":"
         << t.actions[static_cast<std::size_t>(roots[i])];
    }
    os << "]";
  }
  return os.str();
}

}  // namespace lmdp
