#pragma once

#include <vector>

#include "lmdp/model.hpp"

namespace fixture {

/// Deterministic chain 0 -> 1 -> ... -> S-1 (absorbing) with every action.
/// `reward_at` gives R(s, a) for all a.
inline lmdp::LmdpModel chain(int S, int A, int H, const std::vector<double>& reward_at) {
  std::vector<double> init(static_cast<std::size_t>(S), 0.0);
  init[0] = 1.0;
  std::vector<double> trans(static_cast<std::size_t>(S) * A * S, 0.0);
  std::vector<double> rewards(static_cast<std::size_t>(S) * A, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      const std::size_t r = static_cast<std::size_t>(s) * A + static_cast<std::size_t>(a);
      trans[r * S + static_cast<std::size_t>(s + 1 < S ? s + 1 : s)] = 1.0;
      rewards[r] = reward_at[static_cast<std::size_t>(s)];
    }
  }
  return lmdp::LmdpModel(1, S, A, H, {1.0}, init, trans, rewards);
}

/// Two-context, two-state, two-action model used across tests.
/// Context 0 pays 0.5 for action 1 in state 0; context 1 pays 0.5 for
/// action 0 in state 0. Transitions differ between contexts.
inline lmdp::LmdpModel two_context() {
  const int M = 2, S = 2, A = 2;
  std::vector<double> w{0.4, 0.6};
  std::vector<double> init{1.0, 0.0, 0.5, 0.5};
  std::vector<double> trans(static_cast<std::size_t>(M) * S * A * S);
  std::vector<double> rewards(static_cast<std::size_t>(M) * S * A, 0.0);
  auto set = [&](int m, int s, int a, double p0) {
    const std::size_t r = (static_cast<std::size_t>(m) * S + static_cast<std::size_t>(s)) * A + static_cast<std::size_t>(a);
    trans[r * S] = p0;
    trans[r * S + 1] = 1.0 - p0;
  };
  set(0, 0, 0, 0.8);
  set(0, 0, 1, 0.3);
  set(0, 1, 0, 0.5);
  set(0, 1, 1, 1.0);
  set(1, 0, 0, 0.2);
  set(1, 0, 1, 0.6);
  set(1, 1, 0, 0.0);
  set(1, 1, 1, 0.9);
  rewards[1] = 0.5;                 // m0, s0, a1
  rewards[4] = 0.5;                 // m1, s0, a0
  rewards[3] = 0.25;                // m0, s1, a1
  rewards[6] = 0.25;                // m1, s1, a0
  return lmdp::LmdpModel(M, S, A, 2, w, init, trans, rewards);
}

}  // namespace fixture
