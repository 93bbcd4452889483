#include "lmdp/belief.hpp"

#include "lmdp/errors.hpp"

namespace lmdp {

namespace {

Belief normalized(Belief b, const char* what) {
  double total = 0.0;
  for (double x : b) total += x;
  if (total <= 0.0) throw ZeroProbabilityEvent(what);
  for (double& x : b) x /= total;
  return b;
}

}  // namespace

Belief initial_belief(const LmdpModel& model, int state) {
  Belief b(static_cast<std::size_t>(model.num_contexts()));
  for (int m = 0; m < model.num_contexts(); ++m) {
    b[static_cast<std::size_t>(m)] = model.weight(m) * model.init(m, state);
  }
  return normalized(std::move(b), "initial state has zero probability under every context");
}

Belief belief_update(const LmdpModel& model, std::span<const double> belief, int state,
                     int action, double reward, int next_state) {
  if (belief.size() != static_cast<std::size_t>(model.num_contexts())) {
    throw DimensionMismatch("belief must have length M");
  }
  Belief b(belief.size());
  for (int m = 0; m < model.num_contexts(); ++m) {
    const bool consistent = model.reward(m, state, action) == reward;
    b[static_cast<std::size_t>(m)] =
        consistent ? belief[static_cast<std::size_t>(m)] *
                         model.transition(m, state, action, next_state)
                   : 0.0;
  }
  return normalized(std::move(b), "observation has zero probability under the belief");
}

}  // namespace lmdp
