// lmdp: planning, learning runs, sweeps and instance generation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmdp/errors.hpp"
#include "lmdp/evaluation.hpp"
#include "lmdp/instances.hpp"
#include "lmdp/io.hpp"
#include "lmdp/learner.hpp"
#include "lmdp/sweep.hpp"

namespace {

using namespace lmdp;

struct Common {
  std::string model;
  std::string solver = "mvp";
  std::string policy_class = "stationary";
  std::int64_t episodes = 0;
  std::optional<int> horizon;
  std::uint64_t seed = 0;
  double delta = 0.1;
  std::string out;
  std::size_t cap_nodes = Caps{}.nodes;
  std::size_t cap_policies = Caps{}.policies;
  int workers = 0;

  Caps caps() const { return {cap_nodes, cap_policies}; }
};

struct HardArgs {
  int contexts = 2;
  int states = 11;
  int actions = 2;
  double variance = 0.04;
  std::int64_t episodes_hint = 4096;
  std::uint64_t seed = 0;
  std::optional<int> horizon;
  std::string out;
};

LmdpModel load_with_horizon(const Common& c) {
  LmdpModel model = load_model(c.model);
  if (c.horizon) {
    model = model.with_horizon(*c.horizon);
    validate_model(model);
  }
  return model;
}

int cmd_plan(const Common& c, bool with_variance) {
  const LmdpModel model = load_with_horizon(c);
  const PolicyClass cls = parse_policy_class(c.policy_class);
  const PolicyValue best = optimal_policy(model, cls, c.caps());
  std::cout << "class: " << to_string(cls) << "\n"
            << "value: " << format_double(best.value) << "\n"
            << "policy: " << describe(best.policy) << "\n";
  if (with_variance) {
    std::cout << "policy_variance: " << format_double(policy_variance(model, best.policy)) << "\n"
              << "var_star: " << format_double(var_star(model, cls, c.caps())) << "\n";
  }
  return 0;
}

int cmd_learn(const Common& c) {
  const LmdpModel model = load_with_horizon(c);
  LearnOptions opts;
  opts.solver = parse_solver(c.solver);
  opts.policy_class = parse_policy_class(c.policy_class);
  opts.episodes = c.episodes;
  opts.delta = c.delta;
  opts.seed = c.seed;
  opts.caps = c.caps();

  auto emit = [&](const RegretTrace& trace) {
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    if (c.out.empty() || c.out == "-") {
      std::cout << csv.str();
    } else {
      write_text_file(c.out, csv.str());
    }
  };
  Learner learner(model, opts);
  try {
    learner.run();
  } catch (...) {
    emit(learner.trace());
    throw;
  }
  emit(learner.trace());
  const auto& t = learner.trace();
  std::cerr << "episodes: " << t.episodes.size() << "  v_star: " << format_double(t.v_star)
            << "  final_regret: "
            << format_double(t.episodes.empty() ? 0.0 : t.episodes.back().regret_cum)
            << "  solver_invocations: " << t.solver_invocations << "\n";
  return 0;
}

HardInstance make_hard(const HardArgs& h, std::optional<int> horizon) {
  HardInstanceParams p;
  p.contexts = h.contexts;
  p.states = h.states;
  p.actions = h.actions;
  p.variance = h.variance;
  p.episodes_hint = h.episodes_hint;
  p.seed = h.seed;
  p.horizon = horizon ? horizon : h.horizon;
  return build_hard_instance(p);
}

int cmd_gen_hard(const HardArgs& h, const Common& c) {
  HardInstance inst = make_hard(h, std::nullopt);
  const auto tree = std::make_shared<const HistoryTree>(build_history_tree(inst.model, c.cap_nodes));
  const double v_opt = plan_optimal(inst.model, tree).value;
  const double vs = var_star(inst.model, PolicyClass::Tree, c.caps());
  const std::string meta = hard_meta_to_json_text(inst.meta, vs, v_opt);
  if (h.out.empty() || h.out == "-") {
    std::cout << model_to_json_text(inst.model);
    std::cerr << meta;
  } else {
    save_model(inst.model, h.out);
    write_text_file(h.out + ".meta.json", meta);
    std::cerr << "wrote " << h.out << " and " << h.out << ".meta.json\n";
  }
  return 0;
}

int cmd_gen_random(int M, int S, int A, int H, int degree, std::uint64_t seed, const std::string& out) {
  const LmdpModel model = random_lmdp(M, S, A, H, degree, seed);
  if (out.empty() || out == "-") {
    std::cout << model_to_json_text(model);
  } else {
    save_model(model, out);
  }
  return 0;
}

int cmd_sweep(const Common& c, const std::vector<std::int64_t>& ks, const std::vector<int>& hs,
              const std::vector<std::uint64_t>& seeds, bool pad, bool hard, const HardArgs& h) {
  SweepConfig cfg;
  cfg.solver = parse_solver(c.solver);
  cfg.policy_class = parse_policy_class(c.policy_class);
  cfg.episodes = ks;
  cfg.seeds = seeds;
  cfg.delta = c.delta;
  cfg.caps = c.caps();
  cfg.workers = c.workers;
  cfg.out_dir = c.out.empty() ? "sweep_out" : c.out;

  if (hard) {
    cfg.instance_tag = "hard|M=" + std::to_string(h.contexts) + "|S=" + std::to_string(h.states) +
                       "|A=" + std::to_string(h.actions) + "|V=" + format_double(h.variance) +
                       "|Khint=" + std::to_string(h.episodes_hint) + "|seed=" + std::to_string(h.seed);
    cfg.make_model = [h](int H) { return make_hard(h, H).model; };
    cfg.horizons = hs.empty() ? std::vector<int>{make_hard(h, std::nullopt).meta.horizon} : hs;
  } else {
    if (c.model.empty()) throw DomainError("sweep needs --model or --hard");
    const LmdpModel base = load_model(c.model);
    cfg.instance_tag = model_to_json_text(base) + (pad ? "|pad" : "");
    cfg.make_model = [base, pad](int H) {
      if (pad) return unroll_with_absorbing(base, H);
      LmdpModel m = base.with_horizon(H);
      validate_model(m);
      return m;
    };
    cfg.horizons = hs.empty() ? std::vector<int>{base.horizon()} : hs;
  }
  const auto results = run_sweep(cfg);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << r.trace_file.filename().string() << "  " << (r.ok ? "ok" : "FAILED")
              << "  final_regret=" << format_double(r.final_regret)
              << "  slope=" << format_double(r.slope) << (r.ok ? "" : "  " + r.error) << "\n";
    failed += r.ok ? 0 : 1;
  }
  std::cout << "summary: " << (cfg.out_dir / "summary.csv").string() << "\n";
  return failed == 0 ? 0 : 1;
}

void add_caps(CLI::App* cmd, Common& c) {
  cmd->add_option("--cap-nodes", c.cap_nodes, "History tree node cap")->capture_default_str();
  cmd->add_option("--cap-policies", c.cap_policies, "Policy enumeration cap")->capture_default_str();
}

void add_hard(CLI::App* cmd, HardArgs& h) {
  cmd->add_option("--contexts", h.contexts, "M")->capture_default_str();
  cmd->add_option("--states", h.states, "S")->capture_default_str();
  cmd->add_option("--actions", h.actions, "A")->capture_default_str();
  cmd->add_option("--variance", h.variance, "Target Var*")->capture_default_str();
  cmd->add_option("--episodes-hint", h.episodes_hint, "K used to set epsilon")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent MDP planning, learning and hard-instance toolkit"};
  app.require_subcommand(1);

  Common c;
  HardArgs h;
  bool with_variance = false;

  auto* plan = app.add_subcommand("plan", "Optimal value and policy for a model file");
  plan->add_option("--model", c.model, "Model JSON")->required();
  plan->add_option("--class", c.policy_class, "stationary | tree")->capture_default_str();
  plan->add_option("--horizon", c.horizon, "Override the model horizon");
  plan->add_flag("--variance", with_variance, "Also print policy variance and Var*");
  add_caps(plan, c);

  auto* learn = app.add_subcommand("learn", "One learning run; writes the regret trace CSV");
  learn->add_option("--model", c.model, "Model JSON")->required();
  learn->add_option("--solver", c.solver, "bernstein | mvp")->capture_default_str();
  learn->add_option("--class", c.policy_class, "stationary | tree")->capture_default_str();
  learn->add_option("--episodes", c.episodes, "K")->required();
  learn->add_option("--horizon", c.horizon, "Override the model horizon");
  learn->add_option("--seed", c.seed, "Run seed")->capture_default_str();
  learn->add_option("--delta", c.delta, "Failure probability")->capture_default_str();
  learn->add_option("--out", c.out, "CSV path (stdout when omitted)");
  add_caps(learn, c);

  std::vector<std::int64_t> ks;
  std::vector<int> hs;
  std::vector<std::uint64_t> seeds{0};
  bool pad = false;
  bool hard = false;
  auto* sweep = app.add_subcommand("sweep", "Grid of learning runs over K x H x seed");
  sweep->add_option("--model", c.model, "Model JSON");
  sweep->add_flag("--hard", hard, "Use the generated hard instance instead of --model");
  add_hard(sweep, h);
  sweep->add_option("--instance-seed", h.seed, "Seed for the hard instance answers");
  sweep->add_flag("--pad-absorbing", pad, "Reach each horizon by unrolling into an absorbing state");
  sweep->add_option("--solver", c.solver, "bernstein | mvp")->capture_default_str();
  sweep->add_option("--class", c.policy_class, "stationary | tree")->capture_default_str();
  sweep->add_option("--episodes", ks, "K values")->required()->delimiter(',');
  sweep->add_option("--horizon", hs, "H values")->delimiter(',');
  sweep->add_option("--seed", seeds, "Run seeds")->delimiter(',');
  sweep->add_option("--delta", c.delta, "Failure probability")->capture_default_str();
  sweep->add_option("--out", c.out, "Output directory")->capture_default_str();
  sweep->add_option("--workers", c.workers, "Worker threads (0: LMDP_WORKERS or hardware)")->capture_default_str();
  add_caps(sweep, c);

  auto* gen_hard = app.add_subcommand("gen-hard", "Write the two-phase lower-bound instance");
  add_hard(gen_hard, h);
  gen_hard->add_option("--seed", h.seed, "Seed for the correct answers")->capture_default_str();
  gen_hard->add_option("--horizon", h.horizon, "Horizon (default d1 + d2 + 3)");
  gen_hard->add_option("--out", h.out, "Model path; metadata goes to <out>.meta.json");
  add_caps(gen_hard, c);

  int rm = 2, rs = 4, ra = 2, rh = 4, rdeg = 2;
  std::uint64_t rseed = 0;
  std::string rout;
  auto* gen_random = app.add_subcommand("gen-random", "Write a random LMDP");
  gen_random->add_option("--contexts", rm, "M")->capture_default_str();
  gen_random->add_option("--states", rs, "S")->capture_default_str();
  gen_random->add_option("--actions", ra, "A")->capture_default_str();
  gen_random->add_option("--horizon", rh, "H")->capture_default_str();
  gen_random->add_option("--degree", rdeg, "Largest transition support")->capture_default_str();
  gen_random->add_option("--seed", rseed, "Seed")->capture_default_str();
  gen_random->add_option("--out", rout, "Model path (stdout when omitted)");

  auto* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("--model", c.model, "Model JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*plan) return cmd_plan(c, with_variance);
    if (*learn) return cmd_learn(c);
    if (*sweep) return cmd_sweep(c, ks, hs, seeds, pad, hard, h);
    if (*gen_hard) return cmd_gen_hard(h, c);
    if (*gen_random) return cmd_gen_random(rm, rs, ra, rh, rdeg, rseed, rout);
    if (*validate) {
      const LmdpModel model = load_model(c.model);
      std::cout << "ok: M=" << model.num_contexts() << " S=" << model.num_states()
                << " A=" << model.num_actions() << " H=" << model.horizon()
                << " Gamma=" << transition_degree(model)
                << " max_total_reward=" << format_double(max_total_reward(model)) << "\n";
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
