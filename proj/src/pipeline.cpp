#include "posenc/pipeline.hpp"

#include <sstream>

#include "posenc/error.hpp"

namespace posenc {

GraphBuild build_graph(const LayoutMap& map, double self_weight) {
  GraphBuild out;
  out.ag = apply_manual_edges(complete_graph_prune(map), map);
  out.apg = apg_from_ag(out.ag, self_weight);
  out.components = connected_components(out.ag);
  return out;
}

EmbedResult embed_graph(const AccessProbabilityGraph& apg, const WalkConfig& walk,
                        const SkipGramConfig& sg) {
  EmbedResult out;
  const WalkCorpus corpus = random_walks(apg, walk);
  out.num_walks = corpus.num_walks();
  out.max_tv = max_total_variation(transition_stats(corpus), apg.trans, 1);
  out.embeddings = train_skipgram(corpus, sg, &out.unseen);
  return out;
}

PositionalEncoder make_encoder(const std::string& name, const LayoutMap& map,
                               const NodeEmbeddings* embeddings,
                               const std::map<std::string, int>& rooms) {
  if (name == "none") return NoEncoding{};
  if (name == "coordinates") return coordinate_encoder(map);
  if (name == "room_number") {
    if (rooms.empty()) throw ConfigError("room_number encoder needs a 'rooms' table");
    return RoomEncoding{rooms};
  }
  if (name == "node2vec") {
    if (!embeddings) throw ConfigError("node2vec encoder needs embeddings");
    return Node2VecEncoding{*embeddings};
  }
  throw ConfigError("unknown encoder '" + name + "'");
}

std::vector<std::string> residents_in(const std::vector<EventRecord>& records) {
  std::set<std::string> tags;
  for (const auto& r : records)
    if (r.annotation) {
      const auto tag = resident_tag(r.annotation->activity);
      if (!tag.empty()) tags.insert(tag);
    }
  return {tags.begin(), tags.end()};
}

std::vector<LabeledEvent> prepare_events(const std::vector<EventRecord>& records,
                                         const std::vector<std::string>& residents,
                                         const SamplingConfig& sampling,
                                         const std::set<std::string>& known_sensors,
                                         std::vector<std::string>* warnings) {
  LabelResult labelled = label_events(records, residents);
  if (warnings)
    warnings->insert(warnings->end(), labelled.warnings.begin(), labelled.warnings.end());
  return downsample(labelled.events, sampling, residents, known_sensors);
}

std::vector<FeatureSequence> make_chunks(const std::vector<LabeledEvent>& events,
                                         const PositionalEncoder& encoder,
                                         const SensorVocab& vocab, std::size_t chunk_len,
                                         const std::set<std::string>& unscored) {
  FeatureTable table = build_features(events, encoder, vocab);
  if (!unscored.empty())
    for (std::size_t i = 0; i < table.sensors.size(); ++i)
      if (unscored.count(table.sensors[i])) table.scored[i] = 0;
  return chunk(table, chunk_len);
}

std::string folds_csv(const std::map<std::string, CvResult>& runs) {
  std::ostringstream out;
  out.precision(17);
  out << "encoder,fold,accuracy,precision,recall,f1,best_epoch,test_events\n";
  for (const auto& [name, cv] : runs)
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
      const auto& r = cv.folds[f].report;
      out << name << ',' << f << ',' << r.accuracy << ',' << r.precision << ',' << r.recall
          << ',' << r.f1 << ',' << cv.folds[f].best_epoch << ',' << r.total << '\n';
    }
  return out.str();
}

std::string comparison_csv(const std::map<std::string, CvResult>& runs) {
  std::ostringstream out;
  out.precision(17);
  out << "encoder,metric,mean,stddev,min,max\n";
  for (const auto& [name, cv] : runs)
    for (const auto& m : metric_names()) {
      const auto& s = cv.aggregate.at(m);
      out << name << ',' << m << ',' << s.mean << ',' << s.stddev << ',' << s.min << ','
          << s.max << '\n';
    }
  return out.str();
}

}  // namespace posenc
