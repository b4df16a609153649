#include "posenc/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "posenc/error.hpp"
#include "posenc/rng.hpp"

namespace posenc {

using nlohmann::json;

namespace {

// Seed stream tags for the sub-components.
constexpr std::uint64_t kWalkTag = 1;
constexpr std::uint64_t kSkipGramTag = 2;
constexpr std::uint64_t kTrainTag = 3;

void check_keys(const json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + where + k + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  try {
    check_keys(j, "",
               {"seed", "output_dir", "layout", "fixture", "logs", "year", "residents",
                "encoder", "encoders", "rooms", "embeddings", "self_weight", "walk",
                "skipgram", "sampling", "train", "simulate", "chunk_len", "folds", "jobs"});
    if (!j.contains("seed") || j.at("seed").is_null())
      throw ConfigError("'seed' is mandatory");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.output_dir = resolve(base_dir, j.contains("output_dir")
                                         ? j.at("output_dir").get<std::string>()
                                         : c.output_dir.string());
    if (j.contains("layout")) c.layout = resolve(base_dir, j.at("layout").get<std::string>());
    read(j, "fixture", c.fixture);
    if (j.contains("logs"))
      for (const auto& p : j.at("logs")) c.logs.push_back(resolve(base_dir, p.get<std::string>()));
    read(j, "year", c.year);
    read(j, "residents", c.residents);
    if (j.contains("encoder") && j.contains("encoders"))
      throw ConfigError("give either 'encoder' or 'encoders', not both");
    if (j.contains("encoder")) c.encoders = {j.at("encoder").get<std::string>()};
    read(j, "encoders", c.encoders);
    read(j, "rooms", c.rooms);
    if (j.contains("embeddings"))
      c.embeddings = resolve(base_dir, j.at("embeddings").get<std::string>());
    read(j, "self_weight", c.self_weight);
    read(j, "chunk_len", c.chunk_len);
    read(j, "folds", c.folds);
    read(j, "jobs", c.jobs);

    std::optional<std::uint64_t> walk_seed, sg_seed, train_seed;
    if (j.contains("walk")) {
      const auto& w = j.at("walk");
      check_keys(w, "walk.", {"num_walks_per_node", "walk_length", "rng_seed"});
      read(w, "num_walks_per_node", c.walk.num_walks_per_node);
      read(w, "walk_length", c.walk.walk_length);
      read_opt(w, "rng_seed", walk_seed);
    }
    if (j.contains("skipgram")) {
      const auto& s = j.at("skipgram");
      check_keys(s, "skipgram.",
                 {"dimension", "window_size", "negative_samples", "learning_rate", "epochs",
                  "grad_clip", "rng_seed"});
      read(s, "dimension", c.skipgram.dimension);
      read(s, "window_size", c.skipgram.window_size);
      read(s, "negative_samples", c.skipgram.negative_samples);
      read(s, "learning_rate", c.skipgram.learning_rate);
      read(s, "epochs", c.skipgram.epochs);
      read(s, "grad_clip", c.skipgram.grad_clip);
      read_opt(s, "rng_seed", sg_seed);
    }
    if (j.contains("sampling")) {
      const auto& s = j.at("sampling");
      check_keys(s, "sampling.", {"downsample_interval", "home_sensors", "upsample_factor"});
      read(s, "downsample_interval", c.sampling.downsample_interval);
      read(s, "home_sensors", c.sampling.home_sensors);
      read(s, "upsample_factor", c.sampling.upsample_factor);
    }
    if (j.contains("train")) {
      const auto& t = j.at("train");
      check_keys(t, "train.",
                 {"hidden", "dropout", "learning_rate", "max_epochs", "patience", "grad_clip",
                  "class_weighting", "rng_seed"});
      read(t, "hidden", c.train.hidden);
      read(t, "dropout", c.train.dropout);
      read(t, "learning_rate", c.train.learning_rate);
      read(t, "max_epochs", c.train.max_epochs);
      read(t, "patience", c.train.patience);
      read(t, "grad_clip", c.train.grad_clip);
      read(t, "class_weighting", c.train.class_weighting);
      read_opt(t, "rng_seed", train_seed);
    }
    if (j.contains("simulate")) {
      const auto& s = j.at("simulate");
      check_keys(s, "simulate.", {"duration", "detection_interval", "p_fail", "speed"});
      read_opt(s, "duration", c.simulate.duration);
      read_opt(s, "detection_interval", c.simulate.detection_interval);
      read_opt(s, "p_fail", c.simulate.p_fail);
      read_opt(s, "speed", c.simulate.speed);
    }
    c.walk.rng_seed = walk_seed.value_or(derive_seed(c.seed, kWalkTag));
    c.skipgram.rng_seed = sg_seed.value_or(derive_seed(c.seed, kSkipGramTag));
    c.train.rng_seed = train_seed.value_or(derive_seed(c.seed, kTrainTag));
    c.train.upsample_factor = c.sampling.upsample_factor;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }

  for (const auto& e : c.encoders)
    if (std::find(encoder_names().begin(), encoder_names().end(), e) == encoder_names().end())
      throw ConfigError("unknown encoder '" + e + "'");
  if (c.encoders.empty()) throw ConfigError("at least one encoder is required");
  if (c.chunk_len < 1) throw ConfigError("chunk_len must be at least 1");
  if (c.folds < 2) throw ConfigError("folds must be at least 2");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (c.sampling.upsample_factor < 1) throw ConfigError("upsample_factor must be at least 1");
  if (c.sampling.downsample_interval < 0) throw ConfigError("downsample_interval must be >= 0");
  if (!(c.train.dropout >= 0.0 && c.train.dropout < 1.0))
    throw ConfigError("dropout must be in [0, 1)");
  if (c.train.hidden < 1) throw ConfigError("hidden must be at least 1");
  if (c.skipgram.dimension < 1) throw ConfigError("dimension must be at least 1");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

json config_to_json(const RunConfig& c) {
  json logs = json::array();
  for (const auto& l : c.logs) logs.push_back(l.string());
  return {
      {"seed", c.seed},
      {"output_dir", c.output_dir.string()},
      {"layout", c.layout.string()},
      {"fixture", c.fixture},
      {"logs", logs},
      {"year", c.year},
      {"residents", c.residents},
      {"encoders", c.encoders},
      {"rooms", c.rooms},
      {"embeddings", c.embeddings.string()},
      {"self_weight", c.self_weight},
      {"walk",
       {{"num_walks_per_node", c.walk.num_walks_per_node},
        {"walk_length", c.walk.walk_length},
        {"rng_seed", c.walk.rng_seed}}},
      {"skipgram",
       {{"dimension", c.skipgram.dimension},
        {"window_size", c.skipgram.window_size},
        {"negative_samples", c.skipgram.negative_samples},
        {"learning_rate", c.skipgram.learning_rate},
        {"epochs", c.skipgram.epochs},
        {"grad_clip", c.skipgram.grad_clip},
        {"rng_seed", c.skipgram.rng_seed}}},
      {"sampling",
       {{"downsample_interval", c.sampling.downsample_interval},
        {"home_sensors", c.sampling.home_sensors},
        {"upsample_factor", c.sampling.upsample_factor}}},
      {"train",
       {{"hidden", c.train.hidden},
        {"dropout", c.train.dropout},
        {"learning_rate", c.train.learning_rate},
        {"max_epochs", c.train.max_epochs},
        {"patience", c.train.patience},
        {"grad_clip", c.train.grad_clip},
        {"class_weighting", c.train.class_weighting},
        {"rng_seed", c.train.rng_seed}}},
      {"simulate",
       {{"duration", opt(c.simulate.duration)},
        {"detection_interval", opt(c.simulate.detection_interval)},
        {"p_fail", opt(c.simulate.p_fail)},
        {"speed", opt(c.simulate.speed)}}},
      {"chunk_len", c.chunk_len},
      {"folds", c.folds},
      {"jobs", c.jobs},
  };
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty part");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (!node->is_object()) *node = json::object();
    start = dot + 1;
  }
}

}  // namespace posenc
