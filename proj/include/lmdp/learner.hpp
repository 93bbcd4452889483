#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lmdp/counts.hpp"
#include "lmdp/environment.hpp"
#include "lmdp/model.hpp"
#include "lmdp/policy.hpp"
#include "lmdp/solvers.hpp"

namespace lmdp {

/// 2 ln(2 M S A H K / delta). Throws DomainError unless delta is in (0, 1]
/// and every count is positive.
double iota(int M, int S, int A, int H, std::int64_t K, double delta);

struct EpisodeRecord {
  std::int64_t episode = 0;  // 1-based
  SolverKind solver = SolverKind::Mvp;
  double value_true = 0.0;        // V^{pi_k}
  double value_optimistic = 0.0;  // solver value reported for pi_k
  double regret_inc = 0.0;
  double regret_cum = 0.0;
  bool triggered = false;
};

struct RegretTrace {
  std::vector<EpisodeRecord> episodes;
  double v_star = 0.0;
  double iota = 0.0;
  std::int64_t solver_invocations = 0;
};

/// M S A (log2(H K) + 1).
double trigger_bound(const LmdpModel& model, std::int64_t K);

void write_trace_csv(std::ostream& os, const RegretTrace& trace);

struct LearnOptions {
  SolverKind solver = SolverKind::Mvp;
  PolicyClass policy_class = PolicyClass::Stationary;
  std::int64_t episodes = 0;
  double delta = 0.1;
  std::uint64_t seed = 0;
  Caps caps{};
};

/// The episodic loop: roll out pi_k, update counts with the revealed context,
/// and re-solve on the frozen snapshot whenever a doubling trigger fires.
///
/// Stepping is exposed so callers keep the partial trace when a solve throws.
class Learner {
 public:
  Learner(const LmdpModel& model, const LearnOptions& options);

  /// Plays one episode; false once all K episodes are done.
  bool step();
  void run();

  const RegretTrace& trace() const { return trace_; }
  const Counts& counts() const { return counts_; }
  const Snapshot& snapshot() const { return snapshot_; }
  const Policy& policy() const { return policy_; }
  /// Called after every episode with the trajectory just played.
  void set_observer(std::function<void(const Trajectory&, const Learner&)> f) {
    observer_ = std::move(f);
  }

 private:
  const LmdpModel& model_;
  LearnOptions options_;
  std::shared_ptr<const HistoryTree> tree_;
  Rng rng_;
  Counts counts_;
  Snapshot snapshot_;
  Policy policy_;
  double policy_value_ = 0.0;
  double policy_optimistic_ = 0.0;
  RegretTrace trace_;
  std::function<void(const Trajectory&, const Learner&)> observer_;
};

RegretTrace run_learning(const LmdpModel& model, const LearnOptions& options);

}  // namespace lmdp
