#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "posenc/ingest.hpp"
#include "posenc/matrix.hpp"
#include "posenc/metrics.hpp"

namespace posenc {

// Gate row-blocks inside LstmDirection::w and ::b, each `hidden` rows tall.
enum Gate : std::size_t { kInputGate = 0, kForgetGate = 1, kOutputGate = 2, kCellGate = 3 };

/// Weights of one LSTM direction. Row block g of `w` is the gate matrix
/// applied to the concatenation [h_prev, x_t], so w is 4H x (H + F).
struct LstmDirection {
  Matrix w;
  std::vector<double> b;

  friend bool operator==(const LstmDirection&, const LstmDirection&) = default;
};

/// Bidirectional single-layer LSTM followed by a linear tag projection.
struct LstmParams {
  std::size_t hidden = 0;
  std::size_t input = 0;
  std::size_t classes = 0;
  LstmDirection fwd;
  LstmDirection bwd;
  Matrix w_tag;  // classes x 2H, columns [h_fwd, h_bwd]
  std::vector<double> b_tag;

  /// Zero-filled parameters of the given shape.
  static LstmParams zeros(std::size_t hidden, std::size_t input, std::size_t classes);
  /// Uniform(-1/sqrt(H), 1/sqrt(H)) recurrent weights and
  /// uniform(-1/sqrt(2H), 1/sqrt(2H)) projection, like common frameworks.
  static LstmParams init(std::size_t hidden, std::size_t input, std::size_t classes,
                         std::uint64_t seed);

  /// All parameter tensors in a fixed order: fwd.w, fwd.b, bwd.w, bwd.b,
  /// w_tag, b_tag.
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  std::size_t parameter_count() const;

  friend bool operator==(const LstmParams&, const LstmParams&) = default;
};

struct CellOutput {
  std::vector<double> h;
  std::vector<double> c;
};

/// One LSTM step. Throws DataError on mismatched dimensions.
CellOutput lstm_cell(std::span<const double> x, std::span<const double> h_prev,
                     std::span<const double> c_prev, const LstmDirection& dir,
                     std::size_t hidden);

/// Tag scores (chunk_len x classes) with dropout disabled. Only the real rows
/// of the sequence are run through the LSTM; padded rows stay zero.
Matrix forward(const FeatureSequence& seq, const LstmParams& params);

/// Argmax tag per row, kUnknownResident for padding.
std::vector<int> predict(const FeatureSequence& seq, const LstmParams& params);

/// Row-wise softmax.
Matrix softmax_rows(const Matrix& scores);

struct LossOptions {
  std::vector<double> class_weights;  // empty = all ones
  double dropout = 0.0;
  std::uint64_t dropout_seed = 0;
};

/// Weighted sum of per-event cross-entropy over real, labelled rows, and the
/// weight total it was accumulated over.
struct LossSum {
  double sum = 0.0;
  double weight = 0.0;
  double mean() const { return weight > 0.0 ? sum / weight : 0.0; }
};

LossSum sequence_loss(const FeatureSequence& seq, const LstmParams& params,
                      const LossOptions& opt = {});

/// Mean loss of one sequence and its gradient through time; `grad` is resized
/// to the parameter shape and overwritten.
double loss_and_gradient(const FeatureSequence& seq, const LstmParams& params,
                         const LossOptions& opt, LstmParams& grad);

/// Largest relative error between analytic gradients and central finite
/// differences over every parameter. Relative error is
/// |a - n| / max(|a|, |n|, 1e-6). Dropout is off.
double gradient_check(const LstmParams& params, const FeatureSequence& seq, double epsilon,
                      const std::vector<double>& class_weights = {});

struct TrainConfig {
  std::size_t hidden = 64;
  double dropout = 0.2;
  double learning_rate = 1e-3;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  double grad_clip = 5.0;
  std::size_t upsample_factor = 1;
  bool class_weighting = false;
  std::uint64_t rng_seed = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // eval-mode loss on the training chunks after the epoch
  double valid_loss = 0.0;
};

struct TrainResult {
  LstmParams params;  // snapshot with the lowest validation loss
  std::vector<EpochRecord> curve;
  std::size_t best_epoch = 0;
  double best_valid_loss = 0.0;
};

/// Adam over one chunk per update, global gradient-norm clipping, early stop
/// after `patience` epochs without a lower validation loss. Deterministic in
/// the seed. Throws DataError on empty training data and NumericError when the
/// loss stops being finite.
TrainResult train(std::span<const FeatureSequence> train_chunks,
                  std::span<const FeatureSequence> valid_chunks, std::size_t classes,
                  const TrainConfig& cfg);

/// Inverse-frequency weights n / (classes * count_c); unseen classes get 0.
std::vector<double> class_weights(std::span<const FeatureSequence> chunks, std::size_t classes);

/// Weighted mean loss over a set of chunks (dropout off).
double dataset_loss(std::span<const FeatureSequence> chunks, const LstmParams& params,
                    const std::vector<double>& class_weights = {});

/// Metrics over real, labelled, scored rows. Throws DataError on an empty set.
EvalReport evaluate(std::span<const FeatureSequence> chunks, const LstmParams& params);

struct FoldResult {
  std::vector<std::size_t> test_chunks;
  std::vector<std::size_t> train_chunks;
  std::vector<std::size_t> valid_chunks;
  EvalReport report;
  std::size_t best_epoch = 0;
};

struct CvResult {
  std::vector<FoldResult> folds;
  std::map<std::string, MetricSummary> aggregate;
};

/// Randomised k-fold cross-validation over chunks. Each fold is tested once;
/// the remaining chunks are split 75/25 into training and validation, and
/// only the training part is up-sampled. Folds may run on `jobs` threads; the
/// result does not depend on it. Throws ConfigError on k < 2 and DataError
/// when there are fewer chunks than folds.
CvResult cross_validate(const std::vector<FeatureSequence>& chunks, std::size_t k,
                        std::size_t classes, const TrainConfig& cfg, std::uint64_t seed,
                        int jobs = 1);

}  // namespace posenc
