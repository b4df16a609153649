#include "posenc/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "posenc/error.hpp"
#include "posenc/kernels.hpp"
#include "posenc/rng.hpp"

namespace posenc {

namespace {

void check(const WalkConfig& cfg) {
  if (cfg.num_walks_per_node < 1) throw ConfigError("num_walks_per_node must be >= 1");
  if (cfg.walk_length < 2) throw ConfigError("walk_length must be >= 2");
}

WalkCorpus walks_with(const AccessProbabilityGraph& apg, const WalkConfig& cfg,
                      kernels::WalkFn kernel) {
  check(cfg);
  if (apg.size() == 0) throw DataError("random_walks: empty graph");
  WalkCorpus corpus;
  corpus.node_ids = apg.node_ids;
  corpus.walk_length = cfg.walk_length;
  corpus.tokens = kernel(apg.trans, cfg.num_walks_per_node, cfg.walk_length, cfg.rng_seed);
  return corpus;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

WalkCorpus random_walks(const AccessProbabilityGraph& apg, const WalkConfig& cfg) {
  return walks_with(apg, cfg, &kernels::omp::random_walks);
}

WalkCorpus random_walks_serial(const AccessProbabilityGraph& apg, const WalkConfig& cfg) {
  return walks_with(apg, cfg, &kernels::serial::random_walks);
}

TransitionStats transition_stats(const WalkCorpus& corpus) {
  const std::size_t n = corpus.node_ids.size();
  TransitionStats st{Matrix(n, n), std::vector<std::size_t>(n, 0)};
  for (std::size_t w = 0; w < corpus.num_walks(); ++w) {
    const auto walk = corpus.walk(w);
    for (std::size_t s = 1; s < walk.size(); ++s) {
      st.freq(walk[s - 1], walk[s]) += 1.0;
      ++st.samples[walk[s - 1]];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (st.samples[i] > 0)
      for (double& v : st.freq.row(i)) v /= static_cast<double>(st.samples[i]);
  return st;
}

double max_total_variation(const TransitionStats& stats, const Matrix& trans,
                           std::size_t min_samples) {
  double worst = 0.0;
  for (std::size_t i = 0; i < trans.rows(); ++i) {
    if (stats.samples[i] < min_samples) continue;
    double tv = 0.0;
    for (std::size_t j = 0; j < trans.cols(); ++j) tv += std::abs(stats.freq(i, j) - trans(i, j));
    worst = std::max(worst, 0.5 * tv);
  }
  return worst;
}

NodeEmbeddings train_skipgram(const WalkCorpus& walks, const SkipGramConfig& cfg,
                              std::vector<std::string>* unseen) {
  if (walks.num_walks() == 0) throw DataError("train_skipgram: empty walk list");
  if (cfg.dimension < 1) throw ConfigError("embedding dimension must be >= 1");
  if (cfg.window_size < 1) throw ConfigError("window size must be >= 1");
  if (cfg.epochs < 1) throw ConfigError("skip-gram epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("skip-gram learning rate must be > 0");

  const std::size_t n = walks.node_ids.size();
  const std::size_t d = cfg.dimension;
  std::mt19937_64 gen(derive_seed(cfg.rng_seed, 0x5347));

  NodeEmbeddings emb{walks.node_ids, Matrix(n, d)};
  for (double& v : emb.vectors.flat()) v = (unit_uniform(gen) - 0.5) / static_cast<double>(d);
  Matrix context(n, d);

  std::vector<double> counts(n, 0.0);
  for (auto t : walks.tokens) counts[t] += 1.0;
  if (unseen) {
    unseen->clear();
    for (std::size_t i = 0; i < n; ++i)
      if (counts[i] == 0.0) unseen->push_back(walks.node_ids[i]);
  }

  // unigram^0.75 noise distribution as a cumulative table
  std::vector<double> noise_cdf(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::pow(counts[i], 0.75);
    noise_cdf[i] = acc;
  }
  for (double& v : noise_cdf) v /= acc;
  auto draw_noise = [&] {
    const double u = unit_uniform(gen);
    auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - noise_cdf.begin(),
                                                             static_cast<std::ptrdiff_t>(n) - 1));
  };

  const std::size_t len = walks.walk_length;
  const std::size_t win = cfg.window_size;
  // Nodes whose walks never leave them (isolated, self-loop only) have no context.
  std::vector<std::uint8_t> moves(n, 0);
  for (std::size_t w = 0; w < walks.num_walks(); ++w) {
    const auto walk = walks.walk(w);
    for (std::size_t i = 0; i + 1 < len; ++i)
      if (walk[i] != walk[i + 1]) moves[walk[i]] = moves[walk[i + 1]] = 1;
  }
  const double total = static_cast<double>(cfg.epochs * walks.tokens.size());
  double processed = 0.0;
  std::vector<double> grad_center(d);
  std::vector<std::size_t> order(walks.num_walks());

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order.begin(), order.end(), gen);
    for (std::size_t w : order) {
      const auto walk = walks.walk(w);
      for (std::size_t i = 0; i < len; ++i, processed += 1.0) {
        const double alpha = cfg.learning_rate * std::max(1.0 - processed / (total + 1.0), 1e-4);
        const std::size_t center = walk[i];
        if (!moves[center]) continue;
        double* vc = emb.vectors.data() + center * d;
        const std::size_t lo = i >= win ? i - win : 0;
        const std::size_t hi = std::min(len - 1, i + win);
        for (std::size_t j = lo; j <= hi; ++j) {
          const std::size_t ctx = walk[j];
          if (j == i) continue;
          std::fill(grad_center.begin(), grad_center.end(), 0.0);
          for (std::size_t k = 0; k <= cfg.negative_samples; ++k) {
            std::size_t target = ctx;
            double label = 1.0;
            if (k > 0) {
              target = draw_noise();
              if (target == ctx) continue;
              label = 0.0;
            }
            double* u = context.data() + target * d;
            double dot = 0.0;
            for (std::size_t c = 0; c < d; ++c) dot += vc[c] * u[c];
            const double g = (label - sigmoid(dot)) * alpha;
            for (std::size_t c = 0; c < d; ++c) {
              grad_center[c] += g * u[c];
              u[c] += g * vc[c];
            }
          }
          double norm = 0.0;
          for (double v : grad_center) norm += v * v;
          norm = std::sqrt(norm);
          const double scale = norm > cfg.grad_clip ? cfg.grad_clip / norm : 1.0;
          for (std::size_t c = 0; c < d; ++c) vc[c] += scale * grad_center[c];
        }
      }
    }
  }
  for (double v : emb.vectors.flat())
    if (!std::isfinite(v)) throw NumericError("skip-gram produced a non-finite embedding");
  return emb;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

std::span<const double> NodeEmbeddings::of(const std::string& id) const {
  auto it = std::find(node_ids.begin(), node_ids.end(), id);
  if (it == node_ids.end()) throw DataError("no embedding for sensor '" + id + "'");
  return vectors.row(static_cast<std::size_t>(it - node_ids.begin()));
}

CoordinateEncoding coordinate_encoder(const LayoutMap& map) {
  CoordinateEncoding enc;
  for (const auto& poi : map.pois) enc.coords[poi.id] = poi.point.coords;
  return enc;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::size_t encoding_width(const PositionalEncoder& encoder) {
  return std::visit(
      overloaded{[](const NoEncoding&) -> std::size_t { return 0; },
                 [](const CoordinateEncoding& e) -> std::size_t {
                   return e.coords.empty() ? 0 : e.coords.begin()->second.size();
                 },
                 [](const RoomEncoding&) -> std::size_t { return 1; },
                 [](const Node2VecEncoding& e) { return e.embeddings.dimension(); }},
      encoder);
}

std::vector<double> encode(const PositionalEncoder& encoder, const std::string& sensor_id) {
  auto unknown = [&](const char* kind) {
    return DataError(std::string(kind) + " encoder has no entry for sensor '" + sensor_id + "'");
  };
  return std::visit(
      overloaded{[](const NoEncoding&) { return std::vector<double>{}; },
                 [&](const CoordinateEncoding& e) {
                   auto it = e.coords.find(sensor_id);
                   if (it == e.coords.end()) throw unknown("coordinates");
                   return it->second;
                 },
                 [&](const RoomEncoding& e) {
                   auto it = e.rooms.find(sensor_id);
                   if (it == e.rooms.end()) throw unknown("room_number");
                   return std::vector<double>{static_cast<double>(it->second)};
                 },
                 [&](const Node2VecEncoding& e) {
                   auto it = std::find(e.embeddings.node_ids.begin(), e.embeddings.node_ids.end(),
                                       sensor_id);
                   if (it == e.embeddings.node_ids.end()) throw unknown("node2vec");
                   const auto row = e.embeddings.vectors.row(
                       static_cast<std::size_t>(it - e.embeddings.node_ids.begin()));
                   return std::vector<double>(row.begin(), row.end());
                 }},
      encoder);
}

std::string encoder_name(const PositionalEncoder& encoder) {
  return std::visit(overloaded{[](const NoEncoding&) { return std::string("none"); },
                               [](const CoordinateEncoding&) { return std::string("coordinates"); },
                               [](const RoomEncoding&) { return std::string("room_number"); },
                               [](const Node2VecEncoding&) { return std::string("node2vec"); }},
                    encoder);
}

}  // namespace posenc
