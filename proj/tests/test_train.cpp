#include <doctest.h>

#include <random>

#include "posenc/error.hpp"
#include "posenc/model.hpp"
#include "toy.hpp"

using namespace posenc;

namespace {

// Label = XOR of the current bit and the previous one; needs one step of memory.
std::vector<FeatureSequence> parity_chunks(std::size_t n, std::size_t len, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<FeatureSequence> out;
  for (std::size_t c = 0; c < n; ++c) {
    FeatureSequence s{Matrix(len, 2), std::vector<int>(len), std::vector<std::uint8_t>(len, 1),
                      std::vector<std::uint8_t>(len, 1)};
    int prev = 0;
    for (std::size_t t = 0; t < len; ++t) {
      const int bit = static_cast<int>(uniform_index(gen, 2));
      s.features(t, static_cast<std::size_t>(bit)) = 1.0;
      s.labels[t] = bit ^ prev;
      prev = bit;
    }
    out.push_back(std::move(s));
  }
  return out;
}

// One-hot sensor slot out of six; label = slot parity.
std::vector<FeatureSequence> sensor_parity_chunks(std::size_t n, std::size_t len, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<FeatureSequence> out;
  for (std::size_t c = 0; c < n; ++c) {
    FeatureSequence s{Matrix(len, 6), std::vector<int>(len), std::vector<std::uint8_t>(len, 1),
                      std::vector<std::uint8_t>(len, 1)};
    for (std::size_t t = 0; t < len; ++t) {
      const auto slot = uniform_index(gen, 6);
      s.features(t, slot) = 1.0;
      s.labels[t] = static_cast<int>(slot % 2);
    }
    out.push_back(std::move(s));
  }
  return out;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.hidden = 8;
  cfg.dropout = 0.0;
  cfg.learning_rate = 1e-2;
  cfg.max_epochs = 50;
  cfg.patience = 50;
  cfg.rng_seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("learns sensor parity from the one-hot slot") {
  const auto tr = sensor_parity_chunks(10, 20, 1);
  auto cfg = small_config();
  cfg.learning_rate = 1e-3;
  cfg.patience = 50;
  const auto res = train(tr, sensor_parity_chunks(3, 20, 2), 2, cfg);
  CHECK(res.curve.size() <= 50);
  CHECK(evaluate(tr, res.params).accuracy >= 0.99);
}

TEST_CASE("learns a one-step memory task") {
  const auto tr = parity_chunks(24, 30, 1);
  const auto va = parity_chunks(6, 30, 2);
  const auto te = parity_chunks(10, 30, 3);
  const auto res = train(tr, va, 2, small_config());
  CHECK(res.curve.size() <= 50);
  CHECK(evaluate(te, res.params).accuracy >= 0.99);
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
  const auto tr = parity_chunks(4, 10, 1);
  auto cfg = small_config();
  cfg.learning_rate = 0.0;
  cfg.max_epochs = 4;
  cfg.dropout = 0.3;
  const auto res = train(tr, tr, 2, cfg);
  CHECK(res.params == LstmParams::init(8, 2, 2, cfg.rng_seed));
  REQUIRE(res.curve.size() == 4);
  for (const auto& r : res.curve) {
    CHECK(r.train_loss == res.curve.front().train_loss);
    CHECK(r.valid_loss == res.curve.front().valid_loss);
  }
  CHECK(res.best_epoch == 0);
}

TEST_CASE("train and validation on the same chunk give equal losses") {
  const auto one = parity_chunks(1, 16, 9);
  auto cfg = small_config();
  cfg.max_epochs = 5;
  const auto res = train(one, one, 2, cfg);
  for (const auto& r : res.curve) CHECK(std::abs(r.train_loss - r.valid_loss) < 1e-6);
}

TEST_CASE("returned snapshot has the lowest validation loss") {
  const auto tr = parity_chunks(8, 20, 4);
  const auto va = parity_chunks(3, 20, 5);
  auto cfg = small_config();
  cfg.max_epochs = 15;
  cfg.dropout = 0.2;
  const auto res = train(tr, va, 2, cfg);
  double best = dataset_loss(va, LstmParams::init(8, 2, 2, cfg.rng_seed));
  for (const auto& r : res.curve) best = std::min(best, r.valid_loss);
  CHECK(res.best_valid_loss == best);
  CHECK(dataset_loss(va, res.params) == doctest::Approx(best).epsilon(1e-12));
  if (res.best_epoch > 0) CHECK(res.curve[res.best_epoch - 1].valid_loss == best);
}

TEST_CASE("early stopping honours patience") {
  const auto tr = parity_chunks(4, 10, 1);
  auto cfg = small_config();
  cfg.learning_rate = 0.0;
  cfg.max_epochs = 40;
  cfg.patience = 3;
  CHECK(train(tr, tr, 2, cfg).curve.size() == 3);
}

TEST_CASE("training is deterministic in the seed") {
  const auto tr = parity_chunks(6, 12, 1);
  auto cfg = small_config();
  cfg.max_epochs = 3;
  cfg.dropout = 0.25;
  cfg.upsample_factor = 2;
  const auto a = train(tr, tr, 2, cfg);
  const auto b = train(tr, tr, 2, cfg);
  CHECK(a.params == b.params);
  cfg.rng_seed = 6;
  CHECK_FALSE(train(tr, tr, 2, cfg).params == a.params);
}

TEST_CASE("training config errors") {
  const auto tr = parity_chunks(2, 5, 1);
  auto cfg = small_config();
  CHECK_THROWS_AS(train({}, tr, 2, cfg), DataError);
  CHECK_THROWS_AS(train(tr, {}, 2, cfg), DataError);
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(train(tr, tr, 2, cfg), ConfigError);
  cfg = small_config();
  cfg.learning_rate = -1.0;
  CHECK_THROWS_AS(train(tr, tr, 2, cfg), ConfigError);
  cfg = small_config();
  cfg.upsample_factor = 0;
  CHECK_THROWS_AS(train(tr, tr, 2, cfg), ConfigError);
}

TEST_CASE("exploding learning rate is reported as a numeric error") {
  const auto tr = parity_chunks(2, 5, 1);
  auto cfg = small_config();
  cfg.learning_rate = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(train(tr, tr, 2, cfg), NumericError);
}

TEST_CASE("inverse-frequency class weights") {
  auto c = parity_chunks(1, 4, 1);
  c[0].labels = {0, 0, 0, 1};
  const auto w = class_weights(c, 3);
  CHECK(w[0] == doctest::Approx(4.0 / 9.0));
  CHECK(w[1] == doctest::Approx(4.0 / 3.0));
  CHECK(w[2] == 0.0);
}

TEST_CASE("k-fold with two folds over four chunks") {
  const auto chunks = parity_chunks(4, 10, 3);
  auto cfg = small_config();
  cfg.max_epochs = 2;
  const auto cv = cross_validate(chunks, 2, 2, cfg, 11);
  REQUIRE(cv.folds.size() == 2);
  std::vector<int> tested(4, 0);
  for (const auto& f : cv.folds) {
    CHECK(f.test_chunks.size() == 2);
    CHECK(f.train_chunks.size() == 1);
    CHECK(f.valid_chunks.size() == 1);
    for (auto i : f.test_chunks) ++tested[i];
    for (auto i : f.train_chunks)
      CHECK(std::find(f.test_chunks.begin(), f.test_chunks.end(), i) == f.test_chunks.end());
  }
  for (int t : tested) CHECK(t == 1);
}

TEST_CASE("cross-validation properties") {
  const auto chunks = parity_chunks(10, 12, 8);
  auto cfg = small_config();
  cfg.max_epochs = 3;
  const auto a = cross_validate(chunks, 5, 2, cfg, 21, 1);
  for (const auto& name : metric_names()) {
    const auto& s = a.aggregate.at(name);
    CHECK(s.min <= s.mean);
    CHECK(s.mean <= s.max);
    CHECK(s.stddev >= 0.0);
  }
  const auto b = cross_validate(chunks, 5, 2, cfg, 21, 1);
  const auto c = cross_validate(chunks, 5, 2, cfg, 21, 3);
  for (std::size_t f = 0; f < 5; ++f) {
    CHECK(a.folds[f].test_chunks == b.folds[f].test_chunks);
    CHECK(a.folds[f].report.confusion == b.folds[f].report.confusion);
    CHECK(a.folds[f].report.confusion == c.folds[f].report.confusion);
    CHECK(a.folds[f].best_epoch == c.folds[f].best_epoch);
  }
  CHECK_THROWS_AS(cross_validate(chunks, 1, 2, cfg, 1), ConfigError);
  CHECK_THROWS_AS(cross_validate(parity_chunks(3, 5, 1), 4, 2, cfg, 1), DataError);
}
