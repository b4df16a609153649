#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "posenc/embedding.hpp"
#include "posenc/geometry.hpp"
#include "posenc/graph.hpp"
#include "posenc/ingest.hpp"
#include "posenc/model.hpp"

namespace posenc {

struct GraphBuild {
  AccessibilityGraph ag;
  AccessProbabilityGraph apg;
  std::vector<std::vector<std::size_t>> components;
};

/// Prune, manual edges, transition matrix, components.
GraphBuild build_graph(const LayoutMap& map, double self_weight);

struct EmbedResult {
  NodeEmbeddings embeddings;
  double max_tv = 0.0;  // walk rows vs transition rows
  std::size_t num_walks = 0;
  std::vector<std::string> unseen;
};

EmbedResult embed_graph(const AccessProbabilityGraph& apg, const WalkConfig& walk,
                        const SkipGramConfig& sg);

/// Encoder by name: none, coordinates, room_number, node2vec. Throws
/// ConfigError when the chosen encoder lacks its inputs.
PositionalEncoder make_encoder(const std::string& name, const LayoutMap& map,
                               const NodeEmbeddings* embeddings,
                               const std::map<std::string, int>& rooms);

/// Sorted resident tags found in the log's annotations.
std::vector<std::string> residents_in(const std::vector<EventRecord>& records);

/// Labelling followed by down-sampling. Label warnings are appended to
/// `warnings` when given.
std::vector<LabeledEvent> prepare_events(const std::vector<EventRecord>& records,
                                         const std::vector<std::string>& residents,
                                         const SamplingConfig& sampling,
                                         const std::set<std::string>& known_sensors,
                                         std::vector<std::string>* warnings = nullptr);

/// Features and chunks. Rows at any sensor in `unscored` are kept as model
/// input but left out of the metrics.
std::vector<FeatureSequence> make_chunks(const std::vector<LabeledEvent>& events,
                                         const PositionalEncoder& encoder,
                                         const SensorVocab& vocab, std::size_t chunk_len,
                                         const std::set<std::string>& unscored = {});

/// One CSV row per fold: encoder,fold,accuracy,precision,recall,f1,best_epoch,test_events
std::string folds_csv(const std::map<std::string, CvResult>& runs);
/// encoder,metric,mean,stddev,min,max
std::string comparison_csv(const std::map<std::string, CvResult>& runs);

}  // namespace posenc
