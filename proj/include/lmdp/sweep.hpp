#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lmdp/learner.hpp"
#include "lmdp/model.hpp"

namespace lmdp {

struct SweepConfig {
  /// Builds the instance for a horizon.
  std::function<LmdpModel(int horizon)> make_model;
  /// Canonical description of the instance, folded into the config hash.
  std::string instance_tag;
  SolverKind solver = SolverKind::Mvp;
  PolicyClass policy_class = PolicyClass::Stationary;
  std::vector<std::int64_t> episodes;
  std::vector<int> horizons;
  std::vector<std::uint64_t> seeds;
  double delta = 0.1;
  Caps caps{};
  std::filesystem::path out_dir;
  /// 0 reads LMDP_WORKERS, falling back to the hardware thread count.
  int workers = 0;
};

struct CellResult {
  std::int64_t episodes = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double final_regret = 0.0;
  double slope = 0.0;
  double v_star = 0.0;
  std::int64_t solver_invocations = 0;
  std::int64_t episodes_done = 0;
  std::string config_hash;
  std::filesystem::path trace_file;
};

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// Least-squares slope of log(regret_cum) against log(k) over k = 2^j,
/// j >= 6 (j >= 0 when K < 128), skipping nonpositive regrets. 0 when fewer
/// than two points remain.
double loglog_slope(const RegretTrace& trace);

std::string trace_file_name(std::int64_t K, int H, std::uint64_t seed);

/// Runs every (K, H, seed) cell, writes one trace CSV per cell and
/// summary.csv. Failed cells keep their partial trace and are marked in the
/// summary. Results are sorted by (K, H, seed).
std::vector<CellResult> run_sweep(const SweepConfig& config);

}  // namespace lmdp
