#pragma once

#include <filesystem>
#include <string>

#include "lmdp/instances.hpp"
#include "lmdp/model.hpp"

namespace lmdp {

/// JSON model schema:
///   { "num_contexts": M, "num_states": S, "num_actions": A, "horizon": H,
///     "weights": [M], "init": [M][S], "transitions": [M][S][A][S],
///     "rewards": [M][S][A] }
/// Loading validates the model. Throws IoError on unreadable or malformed
/// files and ValidationError subclasses on bad contents.
LmdpModel load_model(const std::filesystem::path& path);
LmdpModel model_from_json_text(const std::string& text);
std::string model_to_json_text(const LmdpModel& model);
void save_model(const LmdpModel& model, const std::filesystem::path& path);

/// Sidecar for generated hard instances.
std::string hard_meta_to_json_text(const HardInstanceMeta& meta, double var_star, double v_optimal);

/// Shortest round-trip decimal, independent of the global locale.
std::string format_double(double v);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lmdp
