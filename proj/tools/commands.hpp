#pragma once

#include <filesystem>
#include <iosfwd>

#include "posenc/config.hpp"

namespace posenc::cli {

// Each command writes its artifacts under cfg.output_dir, echoes the resolved
// config beside them, refreshes the run manifest and returns an exit code.
// Failures surface as ConfigError / DataError / NumericError.
int cmd_build_graph(const RunConfig& cfg, std::ostream& out);
int cmd_embed(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_train(const RunConfig& cfg, std::ostream& out);
int cmd_crossval(const RunConfig& cfg, std::ostream& out);
int cmd_report(const std::filesystem::path& run_dir, std::ostream& out);

/// Rewrites manifest.json in `run_dir` with every other file's size and digest.
void write_manifest(const std::filesystem::path& run_dir);

}  // namespace posenc::cli
