#include "lmdp/environment.hpp"

#include "lmdp/errors.hpp"

namespace lmdp {

int Rng::categorical(std::span<const double> p) {
  const double u = uniform();
  double acc = 0.0;
  int last = -1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    acc += p[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  if (last < 0) throw ZeroProbabilityEvent("categorical draw from an all-zero row");
  return last;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Trajectory::total_reward() const {
  double total = 0.0;
  for (const Step& st : steps) total += st.reward;
  return total;
}

Trajectory rollout(const LmdpModel& model, const Policy& policy, Rng& rng) {
  Trajectory traj;
  traj.context = rng.categorical(model.weights());
  const int m = traj.context;
  int s = rng.categorical(model.init(m));

  const auto* tree_policy = std::get_if<TreePolicy>(&policy);
  int node = -1;
  if (tree_policy) {
    node = tree_policy->tree->find_root(s);
    if (node < 0) throw PolicyDomainError("initial state missing from the policy tree");
  }

  traj.steps.reserve(static_cast<std::size_t>(model.horizon()));
  for (int t = 1; t <= model.horizon(); ++t) {
    int a;
    if (tree_policy) {
      a = tree_policy->actions[static_cast<std::size_t>(node)];
    } else {
      a = std::get<StationaryPolicy>(policy).actions[static_cast<std::size_t>(s)];
    }
    const double r = model.reward(m, s, a);
    const int s2 = rng.categorical(model.transition(m, s, a));
    traj.steps.push_back({s, a, r});
    if (tree_policy) {
      node = tree_policy->tree->find_child(node, a, r, s2);
      if (node < 0) throw PolicyDomainError("realized history missing from the policy tree");
    }
    s = s2;
  }
  traj.final_state = s;
  return traj;
}

}  // namespace lmdp
