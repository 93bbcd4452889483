#include "lmdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "lmdp/errors.hpp"

namespace lmdp {

namespace {

std::string where(int m, int s, int a) {
  std::ostringstream os;
  os << "(m=" << m << ", s=" << s << ", a=" << a << ")";
  return os.str();
}

void check_row(std::span<const double> row, const std::string& what) {
  double sum = 0.0;
  for (double p : row) {
    if (!std::isfinite(p) || p < -kProbTol) {
      throw StochasticityError(what + " has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    std::ostringstream os;
    os.precision(17);
    os << what << " sums to " << sum;
    throw StochasticityError(os.str());
  }
}

}  // namespace

LmdpModel::LmdpModel(int num_contexts, int num_states, int num_actions, int horizon,
                     std::vector<double> weights, std::vector<double> init,
                     std::vector<double> transitions, std::vector<double> rewards)
    : num_contexts_(num_contexts),
      num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      weights_(std::move(weights)),
      init_(std::move(init)),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)) {
  if (num_contexts <= 0 || num_states <= 0 || num_actions <= 0 || horizon <= 0) {
    throw DomainError("model dimensions M, S, A, H must be positive");
  }
  const auto m = static_cast<std::size_t>(num_contexts);
  const auto s = static_cast<std::size_t>(num_states);
  const auto a = static_cast<std::size_t>(num_actions);
  if (weights_.size() != m) throw DimensionMismatch("weights must have length M");
  if (init_.size() != m * s) throw DimensionMismatch("init must be M x S");
  if (transitions_.size() != m * s * a * s) {
    throw DimensionMismatch("transitions must be M x S x A x S");
  }
  if (rewards_.size() != m * s * a) throw DimensionMismatch("rewards must be M x S x A");
}

LmdpModel LmdpModel::with_horizon(int horizon) const {
  return LmdpModel(num_contexts_, num_states_, num_actions_, horizon, weights_, init_,
                   transitions_, rewards_);
}

void validate_model(const LmdpModel& model) {
  double total = 0.0;
  for (double w : model.weights()) {
    if (!std::isfinite(w) || w <= 0.0) throw WeightError("context weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > kProbTol) throw WeightError("context weights must sum to 1");

  const int M = model.num_contexts(), S = model.num_states(), A = model.num_actions();
  for (int m = 0; m < M; ++m) {
    check_row(model.init(m), "init row m=" + std::to_string(m));
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        check_row(model.transition(m, s, a), "transition row " + where(m, s, a));
        const double r = model.reward(m, s, a);
        if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
          throw RewardBoundError("reward outside [0, 1] at " + where(m, s, a));
        }
      }
    }
  }

  const double bound = max_total_reward(model);
  if (bound > 1.0 + kRewardBoundTol) {
    std::ostringstream os;
    os.precision(17);
    os << "a path collects total reward " << bound << " > 1";
    throw RewardBoundError(os.str());
  }
}

double max_total_reward(const LmdpModel& model) {
  const int M = model.num_contexts(), S = model.num_states(), A = model.num_actions();
  const int H = model.horizon();

  // Union support per (s, a).
  std::vector<std::vector<int>> successors(static_cast<std::size_t>(S * A));
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      auto& out = successors[static_cast<std::size_t>(s * A + a)];
      for (int s2 = 0; s2 < S; ++s2) {
        for (int m = 0; m < M; ++m) {
          if (model.transition(m, s, a, s2) > 0.0) {
            out.push_back(s2);
            break;
          }
        }
      }
    }
  }

  double best = 0.0;
  std::vector<double> next(static_cast<std::size_t>(S)), cur(static_cast<std::size_t>(S));
  for (int m = 0; m < M; ++m) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int t = H; t >= 1; --t) {
      for (int s = 0; s < S; ++s) {
        double v = 0.0;
        for (int a = 0; a < A; ++a) {
          double tail = 0.0;
          for (int s2 : successors[static_cast<std::size_t>(s * A + a)]) {
            tail = std::max(tail, next[static_cast<std::size_t>(s2)]);
          }
          v = std::max(v, model.reward(m, s, a) + tail);
        }
        cur[static_cast<std::size_t>(s)] = v;
      }
      std::swap(cur, next);
    }
    for (int s = 0; s < S; ++s) {
      bool start = false;
      for (int m2 = 0; m2 < M; ++m2) start = start || model.init(m2, s) > 0.0;
      if (start) best = std::max(best, next[static_cast<std::size_t>(s)]);
    }
  }
  return best;
}

int support_size(std::span<const double> p) {
  return static_cast<int>(std::count_if(p.begin(), p.end(), [](double x) { return x > 0.0; }));
}

int transition_degree(const LmdpModel& model) {
  int gamma = 0;
  for (int m = 0; m < model.num_contexts(); ++m) {
    for (int s = 0; s < model.num_states(); ++s) {
      for (int a = 0; a < model.num_actions(); ++a) {
        gamma = std::max(gamma, support_size(model.transition(m, s, a)));
      }
    }
  }
  return gamma;
}

double empirical_variance(std::span<const double> p, std::span<const double> v) {
  if (p.size() != v.size()) throw DimensionMismatch("empirical_variance: |p| != |v|");
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) mean += p[i] * v[i];
  double var = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = v[i] - mean;
    var += p[i] * d * d;
  }
  return std::max(var, 0.0);
}

}  // namespace lmdp
