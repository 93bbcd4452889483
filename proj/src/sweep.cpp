#include "lmdp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "lmdp/errors.hpp"
#include "lmdp/io.hpp"

namespace lmdp {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xF];
  return out;
}

double loglog_slope(const RegretTrace& trace) {
  const auto K = static_cast<std::int64_t>(trace.episodes.size());
  const int j_min = K >= 128 ? 6 : 0;
  std::vector<double> xs, ys;
  for (std::int64_t k = std::int64_t{1} << j_min; k <= K; k *= 2) {
    const double r = trace.episodes[static_cast<std::size_t>(k - 1)].regret_cum;
    if (r <= 0.0) continue;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(r));
  }
  if (xs.size() < 2) return 0.0;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::string trace_file_name(std::int64_t K, int H, std::uint64_t seed) {
  return "trace_K" + std::to_string(K) + "_H" + std::to_string(H) + "_seed" + std::to_string(seed) + ".csv";
}

namespace {

int worker_count(int requested, std::size_t cells) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("LMDP_WORKERS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min<int>(n, static_cast<int>(cells)));
}

CellResult run_cell(const SweepConfig& config, std::int64_t K, int H, std::uint64_t seed) {
  CellResult cell;
  cell.episodes = K;
  cell.horizon = H;
  cell.seed = seed;
  std::ostringstream key;
  key << config.instance_tag << "|solver=" << to_string(config.solver)
      << "|class=" << to_string(config.policy_class) << "|delta=" << format_double(config.delta)
      << "|K=" << K << "|H=" << H << "|seed=" << seed;
  cell.config_hash = fnv1a_hex(key.str());
  cell.trace_file = config.out_dir / trace_file_name(K, H, seed);

  RegretTrace partial;
  try {
    const LmdpModel model = config.make_model(H);
    LearnOptions opts;
    opts.solver = config.solver;
    opts.policy_class = config.policy_class;
    opts.episodes = K;
    opts.delta = config.delta;
    opts.seed = seed;
    opts.caps = config.caps;
    Learner learner(model, opts);
    try {
      learner.run();
    } catch (...) {
      partial = learner.trace();
      throw;
    }
    partial = learner.trace();
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  cell.episodes_done = static_cast<std::int64_t>(partial.episodes.size());
  cell.final_regret = partial.episodes.empty() ? 0.0 : partial.episodes.back().regret_cum;
  cell.slope = loglog_slope(partial);
  cell.v_star = partial.v_star;
  cell.solver_invocations = partial.solver_invocations;
  try {
    std::ostringstream csv;
    write_trace_csv(csv, partial);
    write_text_file(cell.trace_file, csv.str());
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = cell.error.empty() ? e.what() : cell.error + "; " + e.what();
  }
  return cell;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<CellResult> run_sweep(const SweepConfig& config) {
  if (config.episodes.empty() || config.horizons.empty() || config.seeds.empty()) {
    throw DomainError("sweep lists must be nonempty");
  }
  if (!(config.delta > 0.0 && config.delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");

  struct Job {
    std::int64_t K;
    int H;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto K : config.episodes) {
    for (int H : config.horizons) {
      for (auto seed : config.seeds) jobs.push_back({K, H, seed});
    }
  }
  std::vector<CellResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      results[i] = run_cell(config, jobs[i].K, jobs[i].H, jobs[i].seed);
    }
  };
  const int n = worker_count(config.workers, jobs.size());
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::sort(results.begin(), results.end(), [](const CellResult& a, const CellResult& b) {
    return std::tie(a.episodes, a.horizon, a.seed) < std::tie(b.episodes, b.horizon, b.seed);
  });

  std::ostringstream summary;
  summary << "config_hash,episodes,horizon,seed,solver,class,status,episodes_done,final_regret,"
             "slope,v_star,solver_invocations,trace_file,error\n";
  for (const auto& c : results) {
    summary << c.config_hash << ',' << c.episodes << ',' << c.horizon << ',' << c.seed << ','
            << to_string(config.solver) << ',' << to_string(config.policy_class) << ','
            << (c.ok ? "ok" : "failed") << ',' << c.episodes_done << ','
            << format_double(c.final_regret) << ',' << format_double(c.slope) << ','
            << format_double(c.v_star) << ',' << c.solver_invocations << ','
            << c.trace_file.filename().string() << ',' << csv_quote(c.error) << '\n';
  }
  write_text_file(config.out_dir / "summary.csv", summary.str());
  return results;
}

}  // namespace lmdp
