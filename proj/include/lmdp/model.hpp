#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lmdp {

/// Absolute tolerance for probability sums and comparisons.
inline constexpr double kProbTol = 1e-12;
/// Slack allowed on the per-episode total reward bound of 1.
inline constexpr double kRewardBoundTol = 1e-9;

/// Size limits shared by tree construction and policy enumeration.
struct Caps {
  std::size_t nodes = 200'000;
  std::size_t policies = 1'000'000;
};

/// A tabular latent MDP: M contexts sharing states, actions and horizon.
///
/// Storage is flat and row-major: init is [m][s], transitions [m][s][a][s'],
/// rewards [m][s][a]. All indices are zero-based. Construction only checks
/// shapes; use validate_model() for the probabilistic invariants.
class LmdpModel {
 public:
  LmdpModel(int num_contexts, int num_states, int num_actions, int horizon,
            std::vector<double> weights, std::vector<double> init,
            std::vector<double> transitions, std::vector<double> rewards);

  int num_contexts() const { return num_contexts_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

  double weight(int m) const { return weights_[static_cast<std::size_t>(m)]; }
  std::span<const double> weights() const { return weights_; }

  std::span<const double> init(int m) const {
    return {init_.data() + static_cast<std::size_t>(m) * num_states_,
            static_cast<std::size_t>(num_states_)};
  }
  double init(int m, int s) const { return init(m)[static_cast<std::size_t>(s)]; }

  /// P_m(. | s, a) as a length-S row.
  std::span<const double> transition(int m, int s, int a) const {
    return {transitions_.data() + row_offset(m, s, a) * num_states_,
            static_cast<std::size_t>(num_states_)};
  }
  double transition(int m, int s, int a, int s_next) const {
    return transition(m, s, a)[static_cast<std::size_t>(s_next)];
  }

  double reward(int m, int s, int a) const { return rewards_[row_offset(m, s, a)]; }

  const std::vector<double>& weights_data() const { return weights_; }
  const std::vector<double>& init_data() const { return init_; }
  const std::vector<double>& transitions_data() const { return transitions_; }
  const std::vector<double>& rewards_data() const { return rewards_; }

  /// Same tables with a different horizon.
  LmdpModel with_horizon(int horizon) const;

  bool operator==(const LmdpModel&) const = default;

 private:
  std::size_t row_offset(int m, int s, int a) const {
    return (static_cast<std::size_t>(m) * num_states_ + static_cast<std::size_t>(s)) *
               num_actions_ +
           static_cast<std::size_t>(a);
  }

  int num_contexts_;
  int num_states_;
  int num_actions_;
  int horizon_;
  std::vector<double> weights_;
  std::vector<double> init_;
  std::vector<double> transitions_;
  std::vector<double> rewards_;
};

/// Throws WeightError, StochasticityError or RewardBoundError.
void validate_model(const LmdpModel& model);

/// Largest total reward over length-H paths that start in the support of some
/// initial distribution and only use transitions in the union of all contexts'
/// supports. Rewards along a path are those of a single context.
double max_total_reward(const LmdpModel& model);

/// Gamma: the largest support of any transition row.
int transition_degree(const LmdpModel& model);

int support_size(std::span<const double> p);

/// V(p, v) = p^T v^2 - (p^T v)^2, clamped at 0. Throws DimensionMismatch.
double empirical_variance(std::span<const double> p, std::span<const double> v);

}  // namespace lmdp
