#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lmdp/history_tree.hpp"
#include "lmdp/model.hpp"
#include "lmdp/policy.hpp"

namespace lmdp {

/// Seeded generator. One instance per learning run, advanced sequentially.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) from the top 53 bits of one draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Inverse-CDF draw over the stored order of `p`. Falls back to the last
  /// index with positive mass when rounding leaves the draw past the total.
  int categorical(std::span<const double> p);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 of base + golden-ratio multiple of index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct Step {
  int state = 0;
  int action = 0;
  double reward = 0.0;
};

struct Trajectory {
  std::vector<Step> steps;  // t = 1..H
  int final_state = 0;      // s_{H+1}
  int context = 0;          // revealed after the episode
  double total_reward() const;
};

/// Plays one episode. Tree policies follow their own tree; throws
/// PolicyDomainError when the realized history is missing from it.
Trajectory rollout(const LmdpModel& model, const Policy& policy, Rng& rng);

}  // namespace lmdp
