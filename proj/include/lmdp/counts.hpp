#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lmdp/environment.hpp"

namespace lmdp {

/// Visit counts n_m(s, a) and n_m(s' | s, a).
class Counts {
 public:
  Counts(int num_contexts, int num_states, int num_actions);

  int num_contexts() const { return M_; }
  int num_states() const { return S_; }
  int num_actions() const { return A_; }

  std::int64_t n(int m, int s, int a) const { return n_sa_[row(m, s, a)]; }
  std::int64_t n(int m, int s, int a, int s_next) const {
    return n_sas_[row(m, s, a) * S_ + static_cast<std::size_t>(s_next)];
  }
  /// Records one transition and returns the new n_m(s, a).
  std::int64_t add(int m, int s, int a, int s_next);

 private:
  std::size_t row(int m, int s, int a) const {
    return (static_cast<std::size_t>(m) * S_ + static_cast<std::size_t>(s)) * A_ +
           static_cast<std::size_t>(a);
  }

  int M_, S_, A_;
  std::vector<std::int64_t> n_sa_;
  std::vector<std::int64_t> n_sas_;
};

/// Counts and empirical transitions frozen at the last doubling trigger of
/// each (m, s, a). Never-triggered rows hold N = 0 and a uniform P-hat.
class Snapshot {
 public:
  Snapshot(int num_contexts, int num_states, int num_actions);

  int num_contexts() const { return M_; }
  int num_states() const { return S_; }
  int num_actions() const { return A_; }

  std::int64_t N(int m, int s, int a) const { return N_[row(m, s, a)]; }
  /// max(N, 1).
  double n_eff(int m, int s, int a) const {
    const auto v = N(m, s, a);
    return static_cast<double>(v > 0 ? v : 1);
  }
  bool triggered(int m, int s, int a) const { return N(m, s, a) > 0; }

  std::span<const double> phat(int m, int s, int a) const {
    return {phat_.data() + row(m, s, a) * S_, static_cast<std::size_t>(S_)};
  }
  double phat(int m, int s, int a, int s_next) const {
    return phat(m, s, a)[static_cast<std::size_t>(s_next)];
  }

  /// N <- n and P-hat row <- n(. | s, a) / n.
  void freeze(const Counts& counts, int m, int s, int a);

  /// Overwrites a row directly (tests and fully-known models).
  void set_row(int m, int s, int a, std::int64_t n, std::span<const double> p);

 private:
  std::size_t row(int m, int s, int a) const {
    return (static_cast<std::size_t>(m) * S_ + static_cast<std::size_t>(s)) * A_ +
           static_cast<std::size_t>(a);
  }

  int M_, S_, A_;
  std::vector<std::int64_t> N_;
  std::vector<double> phat_;
};

inline bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

/// Hindsight update with the revealed context. Freezes every (m, s, a) whose
/// count lands on a power of two; returns whether any row was frozen.
bool record_episode(Counts& counts, Snapshot& snapshot, const Trajectory& traj);

}  // namespace lmdp
