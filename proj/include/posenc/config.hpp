#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "posenc/embedding.hpp"
#include "posenc/ingest.hpp"
#include "posenc/model.hpp"

namespace posenc {

/// Overrides applied to a fixture's simulation run.
struct SimulateConfig {
  std::optional<double> duration;
  std::optional<double> detection_interval;
  std::optional<double> p_fail;
  std::optional<double> speed;
};

/// Everything one run of the command-line tool needs. Relative paths are
/// resolved against the directory holding the config file.
struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "run";
  std::filesystem::path layout;
  std::string fixture;  // built-in layout and simulation, used when layout is empty
  std::vector<std::filesystem::path> logs;
  int year = 2009;
  std::vector<std::string> residents;  // empty = taken from the log annotations
  std::vector<std::string> encoders{"node2vec"};
  std::map<std::string, int> rooms;
  std::filesystem::path embeddings;  // precomputed; empty = train them
  double self_weight = 0.5;
  WalkConfig walk;
  SkipGramConfig skipgram;
  SamplingConfig sampling;
  TrainConfig train;
  SimulateConfig simulate;
  std::size_t chunk_len = 1000;
  std::size_t folds = 10;
  int jobs = 1;
};

/// Parses a config object. Unknown keys and a missing seed raise ConfigError.
/// Sub-seeds not given explicitly are derived from the master seed.
RunConfig config_from_json(const nlohmann::json& j,
                           const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved config, defaults filled in.
nlohmann::json config_to_json(const RunConfig& cfg);

/// Applies `dotted.key=value` to a config object; value is parsed as JSON
/// and falls back to a plain string.
void apply_override(nlohmann::json& j, const std::string& assignment);

inline const std::vector<std::string>& encoder_names() {
  static const std::vector<std::string> names{"none", "coordinates", "room_number",
                                              "node2vec"};
  return names;
}

}  // namespace posenc
