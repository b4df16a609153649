#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "posenc/geometry.hpp"
#include "posenc/graph.hpp"
#include "posenc/matrix.hpp"

namespace posenc {

struct WalkConfig {
  std::size_t num_walks_per_node = 700;
  std::size_t walk_length = 1000;
  std::uint64_t rng_seed = 0;
};

struct SkipGramConfig {
  std::size_t dimension = 256;
  std::size_t window_size = 1;
  std::size_t negative_samples = 5;
  double learning_rate = 0.025;
  std::size_t epochs = 1;
  double grad_clip = 10.0;
  std::uint64_t rng_seed = 0;
};

/// Node-index walks; all walks have the same length.
struct WalkCorpus {
  std::vector<std::string> node_ids;
  std::size_t walk_length = 0;
  std::vector<std::uint32_t> tokens;

  std::size_t num_walks() const { return walk_length ? tokens.size() / walk_length : 0; }
  std::span<const std::uint32_t> walk(std::size_t w) const {
    return {tokens.data() + w * walk_length, walk_length};
  }
};

struct NodeEmbeddings {
  std::vector<std::string> node_ids;
  Matrix vectors;  // n x d

  std::size_t dimension() const { return vectors.cols(); }
  std::span<const double> of(const std::string& id) const;
};

/// First-order walks driven by the transition rows. Walks from node i are
/// seeded from (rng_seed, i), so the result does not depend on threading.
/// Throws ConfigError on num_walks_per_node < 1 or walk_length < 2.
WalkCorpus random_walks(const AccessProbabilityGraph& apg, const WalkConfig& cfg);
WalkCorpus random_walks_serial(const AccessProbabilityGraph& apg, const WalkConfig& cfg);

/// Empirical next-node distribution per node (rows of counts normalised),
/// plus the number of transitions observed from each node.
struct TransitionStats {
  Matrix freq;
  std::vector<std::size_t> samples;
};
TransitionStats transition_stats(const WalkCorpus& corpus);

/// Largest total-variation distance between empirical and expected rows over
/// nodes with at least `min_samples` observed transitions.
double max_total_variation(const TransitionStats& stats, const Matrix& trans,
                           std::size_t min_samples);

/// Skip-gram with negative sampling over the walk corpus. Single-threaded and
/// deterministic in the seed. Returns the input-side vectors. Self-loop steps
/// count as context, except for nodes whose walks never reach another node:
/// those, like nodes that never occur, keep their initial vectors. Unseen
/// nodes are reported through `unseen`.
/// Throws DataError on an empty corpus.
NodeEmbeddings train_skipgram(const WalkCorpus& walks, const SkipGramConfig& cfg,
                              std::vector<std::string>* unseen = nullptr);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Positional encoders ------------------------------------------------------

struct NoEncoding {};
struct CoordinateEncoding {
  std::map<std::string, std::vector<double>> coords;
};
struct RoomEncoding {
  std::map<std::string, int> rooms;
};
struct Node2VecEncoding {
  NodeEmbeddings embeddings;
};

using PositionalEncoder =
    std::variant<NoEncoding, CoordinateEncoding, RoomEncoding, Node2VecEncoding>;

CoordinateEncoding coordinate_encoder(const LayoutMap& map);

/// Width of the vector `encode` returns for any known sensor.
std::size_t encoding_width(const PositionalEncoder& encoder);

/// Throws DataError naming the id when the encoder has no entry for it.
std::vector<double> encode(const PositionalEncoder& encoder, const std::string& sensor_id);

std::string encoder_name(const PositionalEncoder& encoder);

}  // namespace posenc
