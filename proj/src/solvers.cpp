#include "lmdp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lmdp/errors.hpp"

namespace lmdp {

SolverKind parse_solver(std::string_view tag) {
  if (tag == "bernstein") return SolverKind::Bernstein;
  if (tag == "mvp") return SolverKind::Mvp;
  throw DomainError("unknown solver '" + std::string(tag) + "'");
}

std::string_view to_string(SolverKind kind) {
  return kind == SolverKind::Bernstein ? "bernstein" : "mvp";
}

std::vector<double> box_simplex_argmax(std::span<const double> phat, std::span<const double> eps,
                                       std::span<const double> v,
                                       std::span<const std::uint8_t> allowed) {
  const std::size_t n = phat.size();
  if (eps.size() != n || v.size() != n || (!allowed.empty() && allowed.size() != n)) {
    throw DimensionMismatch("box_simplex_argmax: phat, eps and v lengths differ");
  }
  std::vector<double> p(n), upper(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool open = allowed.empty() || allowed[i] != 0;
    p[i] = open ? std::max(phat[i] - eps[i], 0.0) : 0.0;
    upper[i] = open ? std::min(phat[i] + eps[i], 1.0) : 0.0;
    mass += p[i];
  }
  if (mass > 1.0 + kProbTol) throw Infeasible("box lower bounds exceed unit mass");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return v[x] > v[y]; });
  double left = 1.0 - mass;
  for (std::size_t i : order) {
    if (left <= 0.0) break;
    const double add = std::min(upper[i] - p[i], left);
    p[i] += add;
    left -= add;
  }
  if (left > kProbTol) throw Infeasible("box upper bounds cannot reach unit mass");
  return p;
}

ConfidenceRadii ConfidenceRadii::from(const Snapshot& snapshot, double iota) {
  ConfidenceRadii r;
  r.S_ = snapshot.num_states();
  r.A_ = snapshot.num_actions();
  r.eps_.resize(static_cast<std::size_t>(snapshot.num_contexts()) * r.S_ * r.A_ * r.S_);
  for (int m = 0; m < snapshot.num_contexts(); ++m) {
    for (int s = 0; s < r.S_; ++s) {
      for (int a = 0; a < r.A_; ++a) {
        const double n = snapshot.n_eff(m, s, a);
        const auto phat = snapshot.phat(m, s, a);
        double* out = r.eps_.data() + r.row(m, s, a) * r.S_;
        for (int s2 = 0; s2 < r.S_; ++s2) {
          out[s2] = 2.0 * std::sqrt(phat[static_cast<std::size_t>(s2)] * iota / n) + 5.0 * iota / n;
        }
      }
    }
  }
  return r;
}

double mvp_bonus(std::span<const double> phat, std::span<const double> alpha_next, double n_eff,
                 int num_states, double iota) {
  const double var = empirical_variance(phat, alpha_next);
  const double supp = support_size(phat);
  return std::max(4.0 * std::sqrt(supp * var * iota / n_eff), 16.0 * num_states * iota / n_eff);
}

double BernsteinBackup::operator()(int m, int s, int a, std::span<const double> next,
                                   std::span<const std::uint8_t> allowed) const {
  const auto phat = snapshot_->phat(m, s, a);
  const auto eps = radii_->eps(m, s, a);
  std::vector<double> p;
  try {
    p = box_simplex_argmax(phat, eps, next, allowed);
  } catch (const Infeasible&) {
    // The box cannot be confined to the allowed successors.
    p = box_simplex_argmax(phat, eps, next);
  }
  double v = model_->reward(m, s, a);
  for (std::size_t i = 0; i < p.size(); ++i) v += p[i] * next[i];
  return std::min(v, 1.0);
}

double MvpBackup::operator()(int m, int s, int a, std::span<const double> next,
                             std::span<const std::uint8_t>) const {
  const auto phat = snapshot_->phat(m, s, a);
  double v = model_->reward(m, s, a) +
             mvp_bonus(phat, next, snapshot_->n_eff(m, s, a), model_->num_states(), iota_);
  for (std::size_t i = 0; i < phat.size(); ++i) v += phat[i] * next[i];
  return std::min(v, 1.0);
}

bool MvpBackup::depends_on(int m, int s, int a, int s_next) const {
  // A bonus floor of at least 1 saturates the row for any next alphas.
  const double floor = 16.0 * model_->num_states() * iota_ / snapshot_->n_eff(m, s, a);
  return floor < 1.0 && snapshot_->phat(m, s, a, s_next) > 0.0;
}

namespace {

OptimisticEval evaluate(const LmdpModel& model, const HistoryTree& tree, const RowBackup& backup,
                        const Policy& policy) {
  OptimisticEval out;
  out.alpha = evaluate_on_tree(model, tree, backup, policy);
  out.value = root_value(model, tree, out.alpha);
  return out;
}

}  // namespace

OptimisticEval optimistic_alpha_bernstein(const LmdpModel& model, const Snapshot& snapshot,
                                          const ConfidenceRadii& radii, const HistoryTree& tree,
                                          const Policy& policy) {
  return evaluate(model, tree, BernsteinBackup(model, snapshot, radii), policy);
}

OptimisticEval optimistic_alpha_mvp(const LmdpModel& model, const Snapshot& snapshot, double iota,
                                    const HistoryTree& tree, const Policy& policy) {
  return evaluate(model, tree, MvpBackup(model, snapshot, iota), policy);
}

double optimistic_value(SolverKind kind, const LmdpModel& model, const Snapshot& snapshot,
                        double iota, const StationaryPolicy& policy) {
  if (kind == SolverKind::Bernstein) {
    const auto radii = ConfidenceRadii::from(snapshot, iota);
    return root_value(model, evaluate_stationary(model, policy, BernsteinBackup(model, snapshot, radii)));
  }
  return root_value(model, evaluate_stationary(model, policy, MvpBackup(model, snapshot, iota)));
}

PolicyValue solve(SolverKind kind, const LmdpModel& model, const Snapshot& snapshot, double iota,
                  PolicyClass policy_class, std::shared_ptr<const HistoryTree> tree,
                  std::size_t cap) {
  const auto radii = kind == SolverKind::Bernstein ? ConfidenceRadii::from(snapshot, iota)
                                                   : ConfidenceRadii{};
  const BernsteinBackup bernstein(model, snapshot, radii);
  const MvpBackup mvp(model, snapshot, iota);
  const RowBackup& backup =
      kind == SolverKind::Bernstein ? static_cast<const RowBackup&>(bernstein) : mvp;
  if (policy_class == PolicyClass::Stationary) return maximize_stationary(model, backup, cap);
  if (!tree) throw DomainError("tree-class solve needs a history tree");
  return maximize_tree(model, std::move(tree), backup, cap);
}

}  // namespace lmdp
