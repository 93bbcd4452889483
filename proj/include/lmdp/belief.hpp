#pragma once

#include <span>
#include <vector>

#include "lmdp/model.hpp"

namespace lmdp {

/// Posterior over contexts given the observed history.
using Belief = std::vector<double>;

/// b_m(s) proportional to w_m nu_m(s). Throws ZeroProbabilityEvent if no
/// context can start in s.
Belief initial_belief(const LmdpModel& model, int state);

/// Bayes update after observing (s, a, r, s'). Throws ZeroProbabilityEvent
/// when no context with positive belief explains the observation.
Belief belief_update(const LmdpModel& model, std::span<const double> belief, int state,
                     int action, double reward, int next_state);

}  // namespace lmdp
