#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmdp/model.hpp"

namespace lmdp {

/// The m-th permutation of {0..d1-1} in Lehmer-code order (m = 0 is the
/// identity). Throws DomainError when m >= d1!.
std::vector<int> permutation_from_index(std::int64_t m, int d1);

struct HardInstanceMeta {
  int d1 = 0;
  int d2 = 0;
  int L = 0;       // number of leaves, 2^(d2-1)
  int N_tree = 0;  // 2^d2 - 1
  int C = 0;       // L * A
  double epsilon = 0.0;
  double x = 0.0;
  int horizon = 0;
  std::vector<int> leaf;    // correct leaf per context, in [0, L)
  std::vector<int> action;  // correct action per context, in [0, A)
  std::vector<std::vector<int>> sigma;

  // State layout.
  int encoding_state(int i) const { return i; }          // e_{i+1}
  int tree_state(int i) const { return d1 + i - 1; }     // s_i, i in [1, N_tree]
  int leaf_state(int l) const { return tree_state(L + l); }
  int good_state() const { return d1 + N_tree; }         // g
  int terminal_state() const { return d1 + N_tree + 1; }  // t
};

struct HardInstanceParams {
  int contexts = 2;
  int states = 11;
  int actions = 2;
  double variance = 0.04;
  std::int64_t episodes_hint = 4096;
  std::optional<int> horizon;  // default d1 + d2 + 3
  /// Correct (leaf, action) per context; sampled from `seed` when empty.
  std::vector<std::pair<int, int>> answers;
  std::uint64_t seed = 0;
};

struct HardInstance {
  LmdpModel model;
  HardInstanceMeta meta;
};

/// Two-phase lower-bound LMDP: a context-encoding walk over e_1..e_d1 in
/// the order of the context's permutation, then a binary guessing tree whose
/// leaves lead to the rewarding state g with probability 1/2 + eps at the
/// correct (leaf, action) and 1/2 elsewhere.
HardInstance build_hard_instance(const HardInstanceParams& params);

/// Random supports of size <= max_degree, Dirichlet(1) rows, rewards scaled
/// so that max_total_reward <= 1.
LmdpModel random_lmdp(int M, int S, int A, int H, int max_degree, std::uint64_t seed);

/// Single-context wrapper; validates.
LmdpModel mdp_as_lmdp(int S, int A, int H, std::vector<double> init, std::vector<double> transitions,
                      std::vector<double> rewards);

/// Lays the first `base.horizon()` steps out as time-indexed states (t, s)
/// followed by a zero-reward absorbing state, then runs the copy for
/// `horizon` steps. Values are unchanged for every horizon >= base.horizon().
LmdpModel unroll_with_absorbing(const LmdpModel& base, int horizon);

}  // namespace lmdp
