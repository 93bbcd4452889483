#include "lmdp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lmdp/errors.hpp"

namespace lmdp {

using nlohmann::json;

namespace {

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key)) throw IoError(std::string("model file is missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string("field '") + key + "': " + e.what());
  }
}

void flatten(const json& j, int depth, std::vector<std::size_t> shape, std::vector<double>& out,
             const char* key) {
  if (depth == static_cast<int>(shape.size())) {
    if (!j.is_number()) throw IoError(std::string("field '") + key + "' holds a non-number");
    out.push_back(j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != shape[static_cast<std::size_t>(depth)]) {
    throw DimensionMismatch(std::string("field '") + key + "' has the wrong shape");
  }
  for (const auto& e : j) flatten(e, depth + 1, shape, out, key);
}

json nest(const std::vector<double>& flat, const std::vector<std::size_t>& shape, std::size_t depth,
          std::size_t& pos) {
  json arr = json::array();
  for (std::size_t i = 0; i < shape[depth]; ++i) {
    if (depth + 1 == shape.size()) {
      arr.push_back(flat[pos++]);
    } else {
      arr.push_back(nest(flat, shape, depth + 1, pos));
    }
  }
  return arr;
}

json nest(const std::vector<double>& flat, const std::vector<std::size_t>& shape) {
  std::size_t pos = 0;
  return nest(flat, shape, 0, pos);
}

}  // namespace

LmdpModel model_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("model file is not valid JSON: ") + e.what());
  }
  const int M = get_field<int>(j, "num_contexts");
  const int S = get_field<int>(j, "num_states");
  const int A = get_field<int>(j, "num_actions");
  const int H = get_field<int>(j, "horizon");
  if (M <= 0 || S <= 0 || A <= 0 || H <= 0) throw DomainError("model dimensions must be positive");
  const auto m = static_cast<std::size_t>(M), s = static_cast<std::size_t>(S),
             a = static_cast<std::size_t>(A);
  std::vector<double> weights, init, trans, rewards;
  for (const char* key : {"weights", "init", "transitions", "rewards"}) {
    if (!j.contains(key)) throw IoError(std::string("model file is missing field '") + key + "'");
  }
  flatten(j["weights"], 0, {m}, weights, "weights");
  flatten(j["init"], 0, {m, s}, init, "init");
  flatten(j["transitions"], 0, {m, s, a, s}, trans, "transitions");
  flatten(j["rewards"], 0, {m, s, a}, rewards, "rewards");
  LmdpModel model(M, S, A, H, std::move(weights), std::move(init), std::move(trans), std::move(rewards));
  validate_model(model);
  return model;
}

LmdpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json_text(ss.str());
}

std::string model_to_json_text(const LmdpModel& model) {
  const auto m = static_cast<std::size_t>(model.num_contexts());
  const auto s = static_cast<std::size_t>(model.num_states());
  const auto a = static_cast<std::size_t>(model.num_actions());
  json j;
  j["num_contexts"] = model.num_contexts();
  j["num_states"] = model.num_states();
  j["num_actions"] = model.num_actions();
  j["horizon"] = model.horizon();
  j["weights"] = model.weights_data();
  j["init"] = nest(model.init_data(), {m, s});
  j["transitions"] = nest(model.transitions_data(), {m, s, a, s});
  j["rewards"] = nest(model.rewards_data(), {m, s, a});
  return j.dump(1) + "\n";
}

void save_model(const LmdpModel& model, const std::filesystem::path& path) {
  write_text_file(path, model_to_json_text(model));
}

std::string hard_meta_to_json_text(const HardInstanceMeta& meta, double var_star, double v_optimal) {
  json j;
  j["d1"] = meta.d1;
  j["d2"] = meta.d2;
  j["L"] = meta.L;
  j["N_tree"] = meta.N_tree;
  j["C"] = meta.C;
  j["epsilon"] = meta.epsilon;
  j["x"] = meta.x;
  j["horizon"] = meta.horizon;
  j["sigma"] = meta.sigma;
  j["leaf"] = meta.leaf;
  j["action"] = meta.action;
  j["var_star"] = var_star;
  j["v_optimal"] = v_optimal;
  j["indexing"] = "zero-based states, actions, leaves and contexts";
  return j.dump(1) + "\n";
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace lmdp
