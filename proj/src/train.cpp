#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

#include "posenc/error.hpp"
#include "posenc/model.hpp"
#include "posenc/rng.hpp"

namespace posenc {

namespace {

struct Adam {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t step = 0;
  std::vector<std::vector<double>> m, v;

  explicit Adam(const LstmParams& p) {
    for (auto t : p.tensors()) {
      m.emplace_back(t.size(), 0.0);
      v.emplace_back(t.size(), 0.0);
    }
  }

  void update(LstmParams& p, const LstmParams& g, double lr) {
    ++step;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    auto pt = p.tensors();
    const auto gt = g.tensors();
    for (std::size_t ti = 0; ti < pt.size(); ++ti)
      for (std::size_t i = 0; i < pt[ti].size(); ++i) {
        const double gi = gt[ti][i];
        m[ti][i] = beta1 * m[ti][i] + (1.0 - beta1) * gi;
        v[ti][i] = beta2 * v[ti][i] + (1.0 - beta2) * gi * gi;
        pt[ti][i] -= lr * (m[ti][i] / c1) / (std::sqrt(v[ti][i] / c2) + eps);
      }
  }
};

void clip_global_norm(LstmParams& g, double max_norm) {
  if (max_norm <= 0.0) return;
  double ss = 0.0;
  for (auto t : std::as_const(g).tensors())
    for (double v : t) ss += v * v;
  const double norm = std::sqrt(ss);
  if (norm <= max_norm) return;
  const double scale = max_norm / norm;
  for (auto t : g.tensors())
    for (double& v : t) v *= scale;
}

}  // namespace

std::vector<double> class_weights(std::span<const FeatureSequence> chunks, std::size_t classes) {
  std::vector<double> counts(classes, 0.0);
  double total = 0.0;
  for (const auto& s : chunks)
    for (std::size_t t = 0; t < s.chunk_len(); ++t)
      if (s.mask[t] && s.labels[t] >= 0) {
        counts[static_cast<std::size_t>(s.labels[t])] += 1.0;
        total += 1.0;
      }
  std::vector<double> w(classes, 0.0);
  for (std::size_t c = 0; c < classes; ++c)
    if (counts[c] > 0.0) w[c] = total / (static_cast<double>(classes) * counts[c]);
  return w;
}

double dataset_loss(std::span<const FeatureSequence> chunks, const LstmParams& params,
                    const std::vector<double>& weights) {
  LossOptions opt;
  opt.class_weights = weights;
  LossSum acc;
  for (const auto& s : chunks) {
    const LossSum l = sequence_loss(s, params, opt);
    acc.sum += l.sum;
    acc.weight += l.weight;
  }
  return acc.mean();
}

TrainResult train(std::span<const FeatureSequence> train_chunks,
                  std::span<const FeatureSequence> valid_chunks, std::size_t classes,
                  const TrainConfig& cfg) {
  if (train_chunks.empty()) throw DataError("train: empty training set");
  if (valid_chunks.empty()) throw DataError("train: empty validation set");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (cfg.learning_rate < 0.0) throw ConfigError("learning rate must be >= 0");
  if (cfg.upsample_factor < 1) throw ConfigError("upsample factor must be >= 1");
  if (cfg.max_epochs < 1) throw ConfigError("max epochs must be >= 1");

  const std::size_t input = train_chunks.front().features.cols();
  TrainResult res;
  LstmParams params = LstmParams::init(cfg.hidden, input, classes, cfg.rng_seed);
  const std::vector<double> weights =
      cfg.class_weighting ? class_weights(train_chunks, classes) : std::vector<double>{};
  Adam adam(params);
  LstmParams grad;
  std::mt19937_64 gen(derive_seed(cfg.rng_seed, 0x5452));

  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < cfg.upsample_factor; ++r)
    for (std::size_t i = 0; i < train_chunks.size(); ++i) order.push_back(i);

  res.params = params;
  res.best_valid_loss = dataset_loss(valid_chunks, params, weights);
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle(order.begin(), order.end(), gen);
    for (std::size_t idx : order) {
      LossOptions opt;
      opt.class_weights = weights;
      opt.dropout = cfg.dropout;
      opt.dropout_seed = gen();
      const double loss = loss_and_gradient(train_chunks[idx], params, opt, grad);
      if (!std::isfinite(loss))
        throw NumericError("training loss became non-finite in epoch " + std::to_string(epoch));
      clip_global_norm(grad, cfg.grad_clip);
      adam.update(params, grad, cfg.learning_rate);
    }
    EpochRecord rec{epoch, dataset_loss(train_chunks, params, weights),
                    dataset_loss(valid_chunks, params, weights)};
    if (!std::isfinite(rec.train_loss) || !std::isfinite(rec.valid_loss))
      throw NumericError("loss became non-finite after epoch " + std::to_string(epoch));
    res.curve.push_back(rec);
    if (rec.valid_loss < res.best_valid_loss) {
      res.best_valid_loss = rec.valid_loss;
      res.best_epoch = epoch;
      res.params = params;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return res;
}

EvalReport evaluate(std::span<const FeatureSequence> chunks, const LstmParams& params) {
  if (chunks.empty()) throw DataError("evaluate: empty test set");
  std::vector<std::vector<std::size_t>> cm(params.classes,
                                           std::vector<std::size_t>(params.classes, 0));
  for (const auto& s : chunks) {
    const auto pred = predict(s, params);
    for (std::size_t t = 0; t < s.chunk_len(); ++t) {
      if (!s.mask[t] || s.labels[t] < 0) continue;
      if (!s.scored.empty() && !s.scored[t]) continue;
      ++cm[static_cast<std::size_t>(s.labels[t])][static_cast<std::size_t>(pred[t])];
    }
  }
  return make_report(cm);
}

CvResult cross_validate(const std::vector<FeatureSequence>& chunks, std::size_t k,
                        std::size_t classes, const TrainConfig& cfg, std::uint64_t seed,
                        int jobs) {
  if (k < 2) throw ConfigError("cross-validation needs k >= 2");
  if (chunks.size() < k)
    throw DataError("cross-validation: " + std::to_string(chunks.size()) +
                    " chunks is fewer than " + std::to_string(k) + " folds");

  std::vector<std::size_t> perm(chunks.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 gen(derive_seed(seed, 0x4356));
  shuffle(perm.begin(), perm.end(), gen);

  CvResult out;
  out.folds.resize(k);
  for (std::size_t f = 0; f < k; ++f) {
    auto& fold = out.folds[f];
    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < perm.size(); ++p)
      (p % k == f ? fold.test_chunks : rest).push_back(perm[p]);
    std::mt19937_64 fgen(derive_seed(seed, 0x4600 + f));
    shuffle(rest.begin(), rest.end(), fgen);
    if (rest.size() == 1) {
      fold.train_chunks = rest;
      fold.valid_chunks = rest;
    } else {
      const auto n_valid = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(0.25 * static_cast<double>(rest.size()))));
      fold.valid_chunks.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_valid));
      fold.train_chunks.assign(rest.begin() + static_cast<std::ptrdiff_t>(n_valid), rest.end());
    }
  }

  auto gather = [&](const std::vector<std::size_t>& idx) {
    std::vector<FeatureSequence> v;
    v.reserve(idx.size());
    for (std::size_t i : idx) v.push_back(chunks[i]);
    return v;
  };

  const auto nk = static_cast<std::ptrdiff_t>(k);
  std::vector<std::exception_ptr> errors(k);
#pragma omp parallel for schedule(dynamic) num_threads(jobs > 0 ? jobs : 1) if (jobs > 1)
  for (std::ptrdiff_t fi = 0; fi < nk; ++fi) {
    auto& fold = out.folds[static_cast<std::size_t>(fi)];
    try {
      TrainConfig fcfg = cfg;
      fcfg.rng_seed = derive_seed(seed, 0x5400 + static_cast<std::uint64_t>(fi));
      const auto tr = gather(fold.train_chunks);
      const auto va = gather(fold.valid_chunks);
      const auto te = gather(fold.test_chunks);
      const TrainResult res = train(tr, va, classes, fcfg);
      fold.best_epoch = res.best_epoch;
      fold.report = evaluate(te, res.params);
    } catch (...) {
      errors[static_cast<std::size_t>(fi)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& name : metric_names()) {
    std::vector<double> vals;
    for (const auto& fold : out.folds) vals.push_back(metric_value(fold.report, name));
    out.aggregate[name] = summarize(vals);
  }
  return out;
}

}  // namespace posenc
