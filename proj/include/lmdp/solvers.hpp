#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "lmdp/backup.hpp"
#include "lmdp/counts.hpp"
#include "lmdp/history_tree.hpp"
#include "lmdp/model.hpp"
#include "lmdp/policy.hpp"

namespace lmdp {

enum class SolverKind { Bernstein, Mvp };

SolverKind parse_solver(std::string_view tag);
std::string_view to_string(SolverKind kind);

/// argmax of p^T v over {p in simplex : |p_i - phat_i| <= eps_i}.
///
/// Starts from the lower bounds max(phat - eps, 0) and pours the remaining
/// mass in decreasing v order (smaller index first on ties) up to
/// min(phat + eps, 1). When `allowed` is non-empty, coordinates with
/// allowed[i] == 0 are pinned to 0. Throws Infeasible when the box misses
/// the simplex.
std::vector<double> box_simplex_argmax(std::span<const double> phat, std::span<const double> eps,
                                       std::span<const double> v,
                                       std::span<const std::uint8_t> allowed = {});

/// eps_m(s'|s,a) = 2 sqrt(phat iota / N_eff) + 5 iota / N_eff.
class ConfidenceRadii {
 public:
  static ConfidenceRadii from(const Snapshot& snapshot, double iota);

  std::span<const double> eps(int m, int s, int a) const {
    return {eps_.data() + row(m, s, a) * S_, static_cast<std::size_t>(S_)};
  }

 private:
  std::size_t row(int m, int s, int a) const {
    return (static_cast<std::size_t>(m) * S_ + static_cast<std::size_t>(s)) * A_ +
           static_cast<std::size_t>(a);
  }

  int S_ = 0;
  int A_ = 0;
  std::vector<double> eps_;
};

/// max{4 sqrt(supp(phat) V(phat, alpha_next) iota / N), 16 S iota / N}.
double mvp_bonus(std::span<const double> phat, std::span<const double> alpha_next, double n_eff,
                 int num_states, double iota);

/// min{R + max_{P~} P~^T next, 1} with P~ ranging over the confidence box.
class BernsteinBackup final : public RowBackup {
 public:
  BernsteinBackup(const LmdpModel& model, const Snapshot& snapshot, const ConfidenceRadii& radii)
      : model_(&model), snapshot_(&snapshot), radii_(&radii) {}
  double operator()(int m, int s, int a, std::span<const double> next,
                    std::span<const std::uint8_t> allowed) const override;
  bool depends_on(int, int, int, int) const override { return true; }

 private:
  const LmdpModel* model_;
  const Snapshot* snapshot_;
  const ConfidenceRadii* radii_;
};

/// min{R + B + phat^T next, 1}.
class MvpBackup final : public RowBackup {
 public:
  MvpBackup(const LmdpModel& model, const Snapshot& snapshot, double iota)
      : model_(&model), snapshot_(&snapshot), iota_(iota) {}
  double operator()(int m, int s, int a, std::span<const double> next,
                    std::span<const std::uint8_t> allowed) const override;
  bool depends_on(int m, int s, int a, int s_next) const override;

 private:
  const LmdpModel* model_;
  const Snapshot* snapshot_;
  double iota_;
};

struct OptimisticEval {
  AlphaTable alpha;
  double value = 0.0;
};

/// Optimistic alphas of a fixed policy on the history tree. Transition mass
/// is kept on histories that exist in the tree.
OptimisticEval optimistic_alpha_bernstein(const LmdpModel& model, const Snapshot& snapshot,
                                          const ConfidenceRadii& radii, const HistoryTree& tree,
                                          const Policy& policy);
OptimisticEval optimistic_alpha_mvp(const LmdpModel& model, const Snapshot& snapshot, double iota,
                                    const HistoryTree& tree, const Policy& policy);

/// Optimistic value of a stationary policy over the (depth, state) lattice.
double optimistic_value(SolverKind kind, const LmdpModel& model, const Snapshot& snapshot,
                        double iota, const StationaryPolicy& policy);

/// Optimistic argmax over the class. Stationary: enumeration of A^S
/// policies. Tree: exact Pareto-front search on `tree`, which must be set.
PolicyValue solve(SolverKind kind, const LmdpModel& model, const Snapshot& snapshot, double iota,
                  PolicyClass policy_class, std::shared_ptr<const HistoryTree> tree,
                  std::size_t cap = Caps{}.policies);

inline PolicyValue solve_bernstein(const LmdpModel& model, const Snapshot& snapshot, double iota,
                                   PolicyClass policy_class,
                                   std::shared_ptr<const HistoryTree> tree,
                                   std::size_t cap = Caps{}.policies) {
  return solve(SolverKind::Bernstein, model, snapshot, iota, policy_class, std::move(tree), cap);
}

inline PolicyValue solve_mvp(const LmdpModel& model, const Snapshot& snapshot, double iota,
                             PolicyClass policy_class, std::shared_ptr<const HistoryTree> tree,
                             std::size_t cap = Caps{}.policies) {
  return solve(SolverKind::Mvp, model, snapshot, iota, policy_class, std::move(tree), cap);
}

}  // namespace lmdp
