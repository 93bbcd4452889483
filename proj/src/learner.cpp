#include "lmdp/learner.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "lmdp/errors.hpp"
#include "lmdp/evaluation.hpp"
#include "lmdp/io.hpp"

namespace lmdp {

double iota(int M, int S, int A, int H, std::int64_t K, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  if (M <= 0 || S <= 0 || A <= 0 || H <= 0 || K <= 0) {
    throw DomainError("iota needs positive M, S, A, H and K");
  }
  const double arg = 2.0 * M * S * A * static_cast<double>(H) * static_cast<double>(K) / delta;
  return 2.0 * std::log(arg);
}

double trigger_bound(const LmdpModel& model, std::int64_t K) {
  const double hk = static_cast<double>(model.horizon()) * static_cast<double>(K);
  return static_cast<double>(model.num_contexts()) * model.num_states() * model.num_actions() *
         (std::log2(hk) + 1.0);
}

void write_trace_csv(std::ostream& os, const RegretTrace& trace) {
  os << "episode,solver,value_true,value_optimistic,regret_inc,regret_cum,triggered\n";
  for (const auto& e : trace.episodes) {
    os << e.episode << ',' << to_string(e.solver) << ',';
    os << format_double(e.value_true);
    os << ',';
    os << format_double(e.value_optimistic);
    os << ',';
    os << format_double(e.regret_inc);
    os << ',';
    os << format_double(e.regret_cum);
    os << ',' << (e.triggered ? 1 : 0) << '\n';
  }
}

Learner::Learner(const LmdpModel& model, const LearnOptions& options)
    : model_(model),
      options_(options),
      rng_(options.seed),
      counts_(model.num_contexts(), model.num_states(), model.num_actions()),
      snapshot_(model.num_contexts(), model.num_states(), model.num_actions()),
      policy_(StationaryPolicy{std::vector<int>(static_cast<std::size_t>(model.num_states()), 0)}) {
  validate_model(model);
  if (options.episodes < 0) throw DomainError("episode count must be nonnegative");
  trace_.iota = iota(model.num_contexts(), model.num_states(), model.num_actions(),
                     model.horizon(), std::max<std::int64_t>(options.episodes, 1), options.delta);
  if (options.episodes == 0) return;

  if (options.policy_class == PolicyClass::Tree) {
    tree_ = std::make_shared<const HistoryTree>(build_history_tree(model, options.caps.nodes));
    trace_.v_star = plan_optimal(model, tree_).value;
  } else {
    trace_.v_star = optimal_policy(model, PolicyClass::Stationary, options.caps).value;
  }

  policy_value_ = value_of_policy(model, policy_);
  const auto& first = std::get<StationaryPolicy>(policy_);
  if (tree_) {
    if (options.solver == SolverKind::Bernstein) {
      const auto radii = ConfidenceRadii::from(snapshot_, trace_.iota);
      policy_optimistic_ = optimistic_alpha_bernstein(model, snapshot_, radii, *tree_, policy_).value;
    } else {
      policy_optimistic_ = optimistic_alpha_mvp(model, snapshot_, trace_.iota, *tree_, policy_).value;
    }
  } else {
    policy_optimistic_ = optimistic_value(options.solver, model, snapshot_, trace_.iota, first);
  }
}

bool Learner::step() {
  const auto k = static_cast<std::int64_t>(trace_.episodes.size()) + 1;
  if (k > options_.episodes) return false;

  const Trajectory traj = rollout(model_, policy_, rng_);
  const bool fired = record_episode(counts_, snapshot_, traj);

  EpisodeRecord rec;
  rec.episode = k;
  rec.solver = options_.solver;
  rec.value_true = policy_value_;
  rec.value_optimistic = policy_optimistic_;
  rec.regret_inc = trace_.v_star - policy_value_;
  rec.regret_cum = (trace_.episodes.empty() ? 0.0 : trace_.episodes.back().regret_cum) + rec.regret_inc;
  rec.triggered = fired;
  trace_.episodes.push_back(rec);

  if (fired && k < options_.episodes) {
    ++trace_.solver_invocations;
    PolicyValue next = solve(options_.solver, model_, snapshot_, trace_.iota,
                             options_.policy_class, tree_, options_.caps.policies);
    policy_ = std::move(next.policy);
    policy_optimistic_ = next.value;
    policy_value_ = value_of_policy(model_, policy_);
  }
  if (observer_) observer_(traj, *this);
  return true;
}

void Learner::run() {
  while (step()) {
  }
}

RegretTrace run_learning(const LmdpModel& model, const LearnOptions& options) {
  Learner learner(model, options);
  learner.run();
  return learner.trace();
}

}  // namespace lmdp
