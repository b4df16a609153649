#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "posenc/error.hpp"
#include "posenc/io.hpp"

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "run config (JSON)")->required();
  sub->add_option("--set", c.overrides, "override a config key, e.g. --set train.hidden=32");
  sub->add_option("-o,--out", c.out, "run directory (overrides output_dir)");
  sub->add_option("--seed", c.seed, "master seed (overrides seed)");
  sub->add_option("-j,--jobs", c.jobs, "parallel cross-validation folds");
}

posenc::RunConfig resolve(const Common& c) {
  const std::filesystem::path path(c.config);
  nlohmann::json j = posenc::io::load_json(path);
  for (const auto& o : c.overrides) posenc::apply_override(j, o);
  if (c.seed) j["seed"] = *c.seed;
  if (c.jobs) j["jobs"] = *c.jobs;
  posenc::RunConfig cfg = posenc::config_from_json(j, path.parent_path());
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resident identification from sensor logs with graph positional encodings"};
  app.require_subcommand(1);
  Common common;
  std::string run_dir;

  auto* build = app.add_subcommand("build-graph", "layout -> accessibility graph and APG");
  auto* embed = app.add_subcommand("embed", "random walks and skip-gram node embeddings");
  auto* sim = app.add_subcommand("simulate", "synthetic sensor log from a fixture");
  auto* train = app.add_subcommand("train", "train one tagger per encoder");
  auto* cv = app.add_subcommand("crossval", "k-fold cross-validation per encoder");
  auto* report = app.add_subcommand("report", "consolidated CSV and SVG plots of a run");
  for (auto* s : {build, embed, sim, train, cv}) add_common(s, common);
  report->add_option("run_dir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*report) return posenc::cli::cmd_report(run_dir, std::cout);
    const posenc::RunConfig cfg = resolve(common);
    if (*build) return posenc::cli::cmd_build_graph(cfg, std::cout);
    if (*embed) return posenc::cli::cmd_embed(cfg, std::cout);
    if (*sim) return posenc::cli::cmd_simulate(cfg, std::cout);
    if (*train) return posenc::cli::cmd_train(cfg, std::cout);
    if (*cv) return posenc::cli::cmd_crossval(cfg, std::cout);
  } catch (const posenc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const posenc::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const posenc::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
