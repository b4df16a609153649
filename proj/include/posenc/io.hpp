#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "posenc/embedding.hpp"
#include "posenc/geometry.hpp"
#include "posenc/graph.hpp"
#include "posenc/ingest.hpp"
#include "posenc/metrics.hpp"
#include "posenc/model.hpp"

namespace posenc::io {

using nlohmann::json;

// Layout: {"pois": [{"id", "x", "y"} or {"id", "coords": [...]}],
//          "obstacles": [{"x1", "y1", "x2", "y2"}],
//          "manual_edges": [["a", "b"], ...]}
LayoutMap layout_from_json(const json& j);
json layout_to_json(const LayoutMap& map);

// Graph: {"node_ids", "dist" (row-major n*n), "edges": [{"a", "b", "dist"}]}
json graph_to_json(const AccessibilityGraph& g);
AccessibilityGraph graph_from_json(const json& j);

// APG: graph fields plus "trans" (row-major) and "self_weight".
json apg_to_json(const AccessibilityGraph& g, const AccessProbabilityGraph& apg);
AccessProbabilityGraph apg_from_json(const json& j);

// Embeddings: {"node_ids", "dimension", "vectors": [[...], ...]}
json embeddings_to_json(const NodeEmbeddings& e);
NodeEmbeddings embeddings_from_json(const json& j);
void write_embeddings_csv(std::ostream& out, const NodeEmbeddings& e);

// One JSON object per line: {"features", "labels", "mask"}.
void write_chunks_jsonl(std::ostream& out, const std::vector<FeatureSequence>& chunks);
std::vector<FeatureSequence> read_chunks_jsonl(std::istream& in);

inline constexpr int kCheckpointVersion = 1;

// {"format": "posenc-lstm", "version", "config", "dims", "params": {...}}
json checkpoint_to_json(const LstmParams& p, const json& config);
LstmParams checkpoint_from_json(const json& j);

json report_to_json(const EvalReport& r, const std::vector<std::string>& classes);
EvalReport report_from_json(const json& j);

json load_json(const std::filesystem::path& path);
/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string dump(const json& j);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace posenc::io
