#include "lmdp/counts.hpp"

#include <algorithm>

#include "lmdp/errors.hpp"

namespace lmdp {

Counts::Counts(int num_contexts, int num_states, int num_actions)
    : M_(num_contexts),
      S_(num_states),
      A_(num_actions),
      n_sa_(static_cast<std::size_t>(M_) * S_ * A_, 0),
      n_sas_(static_cast<std::size_t>(M_) * S_ * A_ * S_, 0) {}

std::int64_t Counts::add(int m, int s, int a, int s_next) {
  const std::size_t r = row(m, s, a);
  ++n_sas_[r * S_ + static_cast<std::size_t>(s_next)];
  return ++n_sa_[r];
}

Snapshot::Snapshot(int num_contexts, int num_states, int num_actions)
    : M_(num_contexts),
      S_(num_states),
      A_(num_actions),
      N_(static_cast<std::size_t>(M_) * S_ * A_, 0),
      phat_(static_cast<std::size_t>(M_) * S_ * A_ * S_, 1.0 / num_states) {}

void Snapshot::freeze(const Counts& counts, int m, int s, int a) {
  const std::int64_t n = counts.n(m, s, a);
  const std::size_t r = row(m, s, a);
  N_[r] = n;
  for (int s2 = 0; s2 < S_; ++s2) {
    phat_[r * S_ + static_cast<std::size_t>(s2)] =
        static_cast<double>(counts.n(m, s, a, s2)) / static_cast<double>(n);
  }
}

void Snapshot::set_row(int m, int s, int a, std::int64_t n, std::span<const double> p) {
  if (static_cast<int>(p.size()) != S_) throw DimensionMismatch("snapshot row length differs from S");
  const std::size_t r = row(m, s, a);
  N_[r] = n;
  std::copy(p.begin(), p.end(), phat_.begin() + static_cast<std::ptrdiff_t>(r * S_));
}

bool record_episode(Counts& counts, Snapshot& snapshot, const Trajectory& traj) {
  bool fired = false;
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const Step& st = traj.steps[t];
    const int next = t + 1 < traj.steps.size() ? traj.steps[t + 1].state : traj.final_state;
    if (is_power_of_two(counts.add(traj.context, st.state, st.action, next))) {
      snapshot.freeze(counts, traj.context, st.state, st.action);
      fired = true;
    }
  }
  return fired;
}

}  // namespace lmdp
