#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lmdp/errors.hpp"
#include "lmdp/evaluation.hpp"
#include "lmdp/instances.hpp"
#include "lmdp/io.hpp"
#include "lmdp/learner.hpp"
#include "lmdp/solvers.hpp"

namespace py = pybind11;
using namespace lmdp;

namespace {

py::dict meta_dict(const HardInstanceMeta& meta) {
  py::dict d;
  d["d1"] = meta.d1;
  d["d2"] = meta.d2;
  d["L"] = meta.L;
  d["N_tree"] = meta.N_tree;
  d["C"] = meta.C;
  d["epsilon"] = meta.epsilon;
  d["x"] = meta.x;
  d["horizon"] = meta.horizon;
  d["leaf"] = meta.leaf;
  d["action"] = meta.action;
  d["sigma"] = meta.sigma;
  return d;
}

py::dict trace_dict(const RegretTrace& trace) {
  std::vector<double> value_true, value_optimistic, regret_inc, regret_cum;
  std::vector<bool> triggered;
  for (const auto& e : trace.episodes) {
    value_true.push_back(e.value_true);
    value_optimistic.push_back(e.value_optimistic);
    regret_inc.push_back(e.regret_inc);
    regret_cum.push_back(e.regret_cum);
    triggered.push_back(e.triggered);
  }
  py::dict d;
  d["v_star"] = trace.v_star;
  d["iota"] = trace.iota;
  d["solver_invocations"] = trace.solver_invocations;
  d["value_true"] = value_true;
  d["value_optimistic"] = value_optimistic;
  d["regret_inc"] = regret_inc;
  d["regret_cum"] = regret_cum;
  d["triggered"] = triggered;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Latent MDP toolkit core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());

  py::class_<LmdpModel>(m, "LmdpModel")
      .def(py::init<int, int, int, int, std::vector<double>, std::vector<double>, std::vector<double>,
                    std::vector<double>>(),
           py::arg("num_contexts"), py::arg("num_states"), py::arg("num_actions"), py::arg("horizon"),
           py::arg("weights"), py::arg("init"), py::arg("transitions"), py::arg("rewards"))
      .def_property_readonly("num_contexts", &LmdpModel::num_contexts)
      .def_property_readonly("num_states", &LmdpModel::num_states)
      .def_property_readonly("num_actions", &LmdpModel::num_actions)
      .def_property_readonly("horizon", &LmdpModel::horizon)
      .def_property_readonly("weights", &LmdpModel::weights_data)
      .def("validate", [](const LmdpModel& model) { validate_model(model); })
      .def("max_total_reward", [](const LmdpModel& model) { return max_total_reward(model); })
      .def("transition_degree", [](const LmdpModel& model) { return transition_degree(model); })
      .def("to_json", &model_to_json_text)
      .def("save", [](const LmdpModel& model, const std::filesystem::path& p) { save_model(model, p); });

  m.def("load_model", &load_model, py::arg("path"));
  m.def("model_from_json", &model_from_json_text, py::arg("text"));

  m.def("random_lmdp", &random_lmdp, py::arg("contexts"), py::arg("states"), py::arg("actions"),
        py::arg("horizon"), py::arg("max_degree"), py::arg("seed"));
  m.def("unroll_with_absorbing", &unroll_with_absorbing, py::arg("base"), py::arg("horizon"));
  m.def(
      "hard_instance",
      [](int contexts, int states, int actions, double variance, std::int64_t episodes_hint, std::uint64_t seed,
         std::optional<int> horizon) {
        HardInstanceParams p;
        p.contexts = contexts;
        p.states = states;
        p.actions = actions;
        p.variance = variance;
        p.episodes_hint = episodes_hint;
        p.seed = seed;
        p.horizon = horizon;
        auto inst = build_hard_instance(p);
        return py::make_tuple(inst.model, meta_dict(inst.meta));
      },
      py::arg("contexts") = 2, py::arg("states") = 11, py::arg("actions") = 2, py::arg("variance") = 0.04,
      py::arg("episodes_hint") = 4096, py::arg("seed") = 0, py::arg("horizon") = py::none());

  m.def(
      "optimal_value",
      [](const LmdpModel& model, const std::string& policy_class) {
        return optimal_policy(model, parse_policy_class(policy_class)).value;
      },
      py::arg("model"), py::arg("policy_class") = "tree");
  m.def(
      "policy_variance_of_optimal",
      [](const LmdpModel& model, const std::string& policy_class) {
        return policy_variance(model, optimal_policy(model, parse_policy_class(policy_class)).policy);
      },
      py::arg("model"), py::arg("policy_class") = "tree");
  m.def(
      "var_star",
      [](const LmdpModel& model, const std::string& policy_class) {
        return var_star(model, parse_policy_class(policy_class));
      },
      py::arg("model"), py::arg("policy_class") = "tree");

  m.def(
      "run_learning",
      [](const LmdpModel& model, const std::string& solver, const std::string& policy_class,
         std::int64_t episodes, double delta, std::uint64_t seed) {
        LearnOptions opt;
        opt.solver = parse_solver(solver);
        opt.policy_class = parse_policy_class(policy_class);
        opt.episodes = episodes;
        opt.delta = delta;
        opt.seed = seed;
        RegretTrace trace;
        {
          py::gil_scoped_release release;
          trace = run_learning(model, opt);
        }
        return trace_dict(trace);
      },
      py::arg("model"), py::arg("solver") = "mvp", py::arg("policy_class") = "stationary",
      py::arg("episodes") = 100, py::arg("delta") = 0.1, py::arg("seed") = 0);

  m.def(
      "box_simplex_argmax",
      [](const std::vector<double>& phat, const std::vector<double>& eps, const std::vector<double>& v) {
        return box_simplex_argmax(phat, eps, v);
      },
      py::arg("phat"), py::arg("eps"), py::arg("v"));
  m.def(
      "mvp_bonus",
      [](const std::vector<double>& phat, const std::vector<double>& alpha_next, double n_eff, int num_states,
         double iota_value) { return mvp_bonus(phat, alpha_next, n_eff, num_states, iota_value); },
      py::arg("phat"), py::arg("alpha_next"), py::arg("n_eff"), py::arg("num_states"), py::arg("iota"));
  m.def("iota", &iota, py::arg("M"), py::arg("S"), py::arg("A"), py::arg("H"), py::arg("K"), py::arg("delta"));
  m.def("trigger_bound", &trigger_bound, py::arg("model"), py::arg("K"));
}
