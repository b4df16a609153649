#include "posenc/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "posenc/error.hpp"
#include "posenc/kernels.hpp"
#include "posenc/rng.hpp"

namespace posenc {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LstmDirection direction_zeros(std::size_t hidden, std::size_t input) {
  return {Matrix(4 * hidden, hidden + input), std::vector<double>(4 * hidden, 0.0)};
}

// Activations of one direction over the real rows of a chunk.
struct DirectionTrace {
  Matrix gates;   // T x 4H, after sigmoid / tanh
  Matrix cell;    // T x H
  Matrix tcell;   // T x H, tanh(cell)
  Matrix hidden;  // T x H
};

// Input part of every step in one pass (data parallel over t), then the
// recurrence. Reverse runs from the last real row to the first.
void run_direction(const Matrix& x, std::size_t steps, const LstmDirection& dir, std::size_t H,
                   bool reverse, DirectionTrace& tr) {
  tr.gates = Matrix(steps, 4 * H);
  tr.cell = Matrix(steps, H);
  tr.tcell = Matrix(steps, H);
  tr.hidden = Matrix(steps, H);
  kernels::omp::project(x, steps, dir.w, H, dir.b, tr.gates);

  const std::size_t cols = dir.w.cols();
  std::vector<double> zero(H, 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse ? steps - 1 - s : s;
    const double* h_prev = s == 0 ? zero.data() : tr.hidden.data() + (reverse ? t + 1 : t - 1) * H;
    const double* c_prev = s == 0 ? zero.data() : tr.cell.data() + (reverse ? t + 1 : t - 1) * H;
    double* z = tr.gates.data() + t * 4 * H;
    for (std::size_t r = 0; r < 4 * H; ++r) {
      const double* w = dir.w.data() + r * cols;
      double acc = 0.0;
      for (std::size_t k = 0; k < H; ++k) acc += w[k] * h_prev[k];
      z[r] += acc;
    }
    for (std::size_t r = 0; r < 3 * H; ++r) z[r] = sigmoid(z[r]);
    for (std::size_t r = 3 * H; r < 4 * H; ++r) z[r] = std::tanh(z[r]);
    double* c = tr.cell.data() + t * H;
    double* tc = tr.tcell.data() + t * H;
    double* h = tr.hidden.data() + t * H;
    for (std::size_t k = 0; k < H; ++k) {
      c[k] = z[kForgetGate * H + k] * c_prev[k] + z[kInputGate * H + k] * z[kCellGate * H + k];
      tc[k] = std::tanh(c[k]);
      h[k] = z[kOutputGate * H + k] * tc[k];
    }
  }
}

// Backpropagation through time for one direction. dh_out holds the loss
// gradient w.r.t. this direction's hidden outputs (T x H).
void backprop_direction(const Matrix& x, std::size_t steps, const LstmDirection& dir,
                        std::size_t H, bool reverse, const DirectionTrace& tr,
                        const Matrix& dh_out, LstmDirection& grad) {
  const std::size_t cols = dir.w.cols();
  Matrix dz(steps, 4 * H);
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0), dh(H), dc(H);
  std::vector<double> zero(H, 0.0);
  for (std::size_t s = steps; s-- > 0;) {
    const std::size_t t = reverse ? steps - 1 - s : s;
    const double* h_prev = s == 0 ? zero.data() : tr.hidden.data() + (reverse ? t + 1 : t - 1) * H;
    const double* c_prev = s == 0 ? zero.data() : tr.cell.data() + (reverse ? t + 1 : t - 1) * H;
    const double* g = tr.gates.data() + t * 4 * H;
    const double* tc = tr.tcell.data() + t * H;
    double* d = dz.data() + t * 4 * H;
    for (std::size_t k = 0; k < H; ++k) {
      const double i = g[kInputGate * H + k];
      const double f = g[kForgetGate * H + k];
      const double o = g[kOutputGate * H + k];
      const double cc = g[kCellGate * H + k];
      dh[k] = dh_out(t, k) + dh_next[k];
      dc[k] = dh[k] * o * (1.0 - tc[k] * tc[k]) + dc_next[k];
      d[kInputGate * H + k] = dc[k] * cc * i * (1.0 - i);
      d[kForgetGate * H + k] = dc[k] * c_prev[k] * f * (1.0 - f);
      d[kOutputGate * H + k] = dh[k] * tc[k] * o * (1.0 - o);
      d[kCellGate * H + k] = dc[k] * i * (1.0 - cc * cc);
      dc_next[k] = dc[k] * f;
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (std::size_t r = 0; r < 4 * H; ++r) {
      const double dr = d[r];
      grad.b[r] += dr;
      if (dr == 0.0) continue;
      const double* w = dir.w.data() + r * cols;
      double* gw = grad.w.data() + r * cols;
      for (std::size_t k = 0; k < H; ++k) {
        gw[k] += dr * h_prev[k];
        dh_next[k] += w[k] * dr;
      }
    }
  }
  kernels::omp::outer_accum(dz, x, steps, H, grad.w);
}

void check_shape(const FeatureSequence& seq, const LstmParams& p) {
  if (seq.features.cols() != p.input)
    throw DataError("sequence has " + std::to_string(seq.features.cols()) +
                    " features, model expects " + std::to_string(p.input));
  if (seq.labels.size() != seq.features.rows() || seq.mask.size() != seq.features.rows())
    throw DataError("sequence features, labels and mask disagree in length");
}

// Real rows form a prefix of the chunk.
std::size_t real_steps(const FeatureSequence& seq) {
  std::size_t n = 0;
  while (n < seq.mask.size() && seq.mask[n]) ++n;
  return n;
}

struct ForwardTrace {
  std::size_t steps = 0;
  DirectionTrace fwd, bwd;
  Matrix concat;  // T x 2H after dropout
  Matrix keep;    // T x 2H dropout scale (0 or 1/(1-p)); empty when off
  Matrix scores;  // T x classes
};

void forward_trace(const FeatureSequence& seq, const LstmParams& p, double dropout,
                   std::uint64_t dropout_seed, ForwardTrace& tr) {
  check_shape(seq, p);
  const std::size_t H = p.hidden;
  const std::size_t T = real_steps(seq);
  tr.steps = T;
  run_direction(seq.features, T, p.fwd, H, false, tr.fwd);
  run_direction(seq.features, T, p.bwd, H, true, tr.bwd);
  tr.concat = Matrix(T, 2 * H);
  for (std::size_t t = 0; t < T; ++t) {
    auto row = tr.concat.row(t);
    const auto hf = tr.fwd.hidden.row(t);
    const auto hb = tr.bwd.hidden.row(t);
    std::copy(hf.begin(), hf.end(), row.begin());
    std::copy(hb.begin(), hb.end(), row.begin() + static_cast<std::ptrdiff_t>(H));
  }
  if (dropout > 0.0) {
    std::mt19937_64 gen(dropout_seed);
    tr.keep = Matrix(T, 2 * H);
    const double scale = 1.0 / (1.0 - dropout);
    for (std::size_t i = 0; i < tr.keep.size(); ++i) {
      const double k = unit_uniform(gen) >= dropout ? scale : 0.0;
      tr.keep.data()[i] = k;
      tr.concat.data()[i] *= k;
    }
  } else {
    tr.keep = Matrix();
  }
  tr.scores = Matrix(T, p.classes);
  kernels::omp::project(tr.concat, T, p.w_tag, 0, p.b_tag, tr.scores);
}

double class_weight(const LossOptions& opt, int label) {
  return opt.class_weights.empty() ? 1.0 : opt.class_weights[static_cast<std::size_t>(label)];
}

// log-softmax cross-entropy of one row; fills prob with the softmax.
double row_xent(std::span<const double> s, int label, std::span<double> prob) {
  const double mx = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (std::size_t c = 0; c < s.size(); ++c) {
    prob[c] = std::exp(s[c] - mx);
    z += prob[c];
  }
  for (double& v : prob) v /= z;
  return -(s[static_cast<std::size_t>(label)] - mx - std::log(z));
}

}  // namespace

LstmParams LstmParams::zeros(std::size_t hidden, std::size_t input, std::size_t classes) {
  LstmParams p;
  p.hidden = hidden;
  p.input = input;
  p.classes = classes;
  p.fwd = direction_zeros(hidden, input);
  p.bwd = direction_zeros(hidden, input);
  p.w_tag = Matrix(classes, 2 * hidden);
  p.b_tag.assign(classes, 0.0);
  return p;
}

LstmParams LstmParams::init(std::size_t hidden, std::size_t input, std::size_t classes,
                            std::uint64_t seed) {
  if (hidden < 1 || input < 1 || classes < 1) throw ConfigError("LSTM dimensions must be >= 1");
  LstmParams p = zeros(hidden, input, classes);
  std::mt19937_64 gen(derive_seed(seed, 0x4c53));
  auto fill = [&](std::span<double> v, double bound) {
    for (double& x : v) x = (2.0 * unit_uniform(gen) - 1.0) * bound;
  };
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden));
  fill(p.fwd.w.flat(), k);
  fill(p.fwd.b, k);
  fill(p.bwd.w.flat(), k);
  fill(p.bwd.b, k);
  const double kt = 1.0 / std::sqrt(static_cast<double>(2 * hidden));
  fill(p.w_tag.flat(), kt);
  fill(p.b_tag, kt);
  return p;
}

std::vector<std::span<double>> LstmParams::tensors() {
  return {fwd.w.flat(), fwd.b, bwd.w.flat(), bwd.b, w_tag.flat(), b_tag};
}

std::vector<std::span<const double>> LstmParams::tensors() const {
  return {fwd.w.flat(), fwd.b, bwd.w.flat(), bwd.b, w_tag.flat(), b_tag};
}

std::size_t LstmParams::parameter_count() const {
  std::size_t n = 0;
  for (auto t : tensors()) n += t.size();
  return n;
}

CellOutput lstm_cell(std::span<const double> x, std::span<const double> h_prev,
                     std::span<const double> c_prev, const LstmDirection& dir,
                     std::size_t hidden) {
  const std::size_t H = hidden;
  if (h_prev.size() != H || c_prev.size() != H || dir.w.rows() != 4 * H ||
      dir.w.cols() != H + x.size() || dir.b.size() != 4 * H)
    throw DataError("lstm_cell: dimension mismatch");
  std::vector<double> z(4 * H);
  for (std::size_t r = 0; r < 4 * H; ++r) {
    const auto w = dir.w.row(r);
    double acc = dir.b[r];
    for (std::size_t k = 0; k < H; ++k) acc += w[k] * h_prev[k];
    for (std::size_t k = 0; k < x.size(); ++k) acc += w[H + k] * x[k];
    z[r] = r < 3 * H ? sigmoid(acc) : std::tanh(acc);
  }
  CellOutput out{std::vector<double>(H), std::vector<double>(H)};
  for (std::size_t k = 0; k < H; ++k) {
    out.c[k] = z[kForgetGate * H + k] * c_prev[k] + z[kInputGate * H + k] * z[kCellGate * H + k];
    out.h[k] = z[kOutputGate * H + k] * std::tanh(out.c[k]);
  }
  return out;
}

Matrix forward(const FeatureSequence& seq, const LstmParams& params) {
  ForwardTrace tr;
  forward_trace(seq, params, 0.0, 0, tr);
  Matrix out(seq.chunk_len(), params.classes);
  for (std::size_t t = 0; t < tr.steps; ++t) {
    const auto s = tr.scores.row(t);
    std::copy(s.begin(), s.end(), out.row(t).begin());
  }
  return out;
}

std::vector<int> predict(const FeatureSequence& seq, const LstmParams& params) {
  const Matrix scores = forward(seq, params);
  std::vector<int> out(seq.chunk_len(), kUnknownResident);
  for (std::size_t t = 0; t < seq.chunk_len(); ++t) {
    if (!seq.mask[t]) continue;
    const auto row = scores.row(t);
    out[t] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

Matrix softmax_rows(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (std::size_t t = 0; t < scores.rows(); ++t) {
    const auto s = scores.row(t);
    auto o = out.row(t);
    const double mx = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (std::size_t c = 0; c < s.size(); ++c) z += (o[c] = std::exp(s[c] - mx));
    for (double& v : o) v /= z;
  }
  return out;
}

LossSum sequence_loss(const FeatureSequence& seq, const LstmParams& params,
                      const LossOptions& opt) {
  ForwardTrace tr;
  forward_trace(seq, params, opt.dropout, opt.dropout_seed, tr);
  LossSum out;
  std::vector<double> prob(params.classes);
  for (std::size_t t = 0; t < tr.steps; ++t) {
    const int y = seq.labels[t];
    if (y < 0) continue;
    const double w = class_weight(opt, y);
    out.sum += w * row_xent(tr.scores.row(t), y, prob);
    out.weight += w;
  }
  return out;
}

double loss_and_gradient(const FeatureSequence& seq, const LstmParams& params,
                         const LossOptions& opt, LstmParams& grad) {
  ForwardTrace tr;
  forward_trace(seq, params, opt.dropout, opt.dropout_seed, tr);
  const std::size_t H = params.hidden;
  const std::size_t C = params.classes;
  const std::size_t T = tr.steps;
  if (grad.hidden != H || grad.input != params.input || grad.classes != C)
    grad = LstmParams::zeros(H, params.input, C);
  else
    for (auto t : grad.tensors()) std::fill(t.begin(), t.end(), 0.0);

  double total_w = 0.0;
  for (std::size_t t = 0; t < T; ++t)
    if (seq.labels[t] >= 0) total_w += class_weight(opt, seq.labels[t]);
  if (total_w == 0.0) return 0.0;

  Matrix dscores(T, C);
  double loss = 0.0;
  std::vector<double> prob(C);
  for (std::size_t t = 0; t < T; ++t) {
    const int y = seq.labels[t];
    if (y < 0) continue;
    const double w = class_weight(opt, y) / total_w;
    loss += w * row_xent(tr.scores.row(t), y, prob);
    auto d = dscores.row(t);
    for (std::size_t c = 0; c < C; ++c) d[c] = w * prob[c];
    d[static_cast<std::size_t>(y)] -= w;
  }

  // projection
  kernels::omp::outer_accum(dscores, tr.concat, T, 0, grad.w_tag);
  Matrix dh_f(T, H), dh_b(T, H);
  for (std::size_t t = 0; t < T; ++t) {
    const auto d = dscores.row(t);
    for (std::size_t c = 0; c < C; ++c) grad.b_tag[c] += d[c];
    for (std::size_t k = 0; k < 2 * H; ++k) {
      double acc = 0.0;
      for (std::size_t c = 0; c < C; ++c) acc += params.w_tag(c, k) * d[c];
      if (!tr.keep.empty()) acc *= tr.keep(t, k);
      if (k < H)
        dh_f(t, k) = acc;
      else
        dh_b(t, k - H) = acc;
    }
  }
  backprop_direction(seq.features, T, params.fwd, H, false, tr.fwd, dh_f, grad.fwd);
  backprop_direction(seq.features, T, params.bwd, H, true, tr.bwd, dh_b, grad.bwd);
  return loss;
}

double gradient_check(const LstmParams& params, const FeatureSequence& seq, double epsilon,
                      const std::vector<double>& class_weights) {
  LossOptions opt;
  opt.class_weights = class_weights;
  LstmParams grad;
  loss_and_gradient(seq, params, opt, grad);

  LstmParams probe = params;
  auto probe_t = probe.tensors();
  const auto grad_t = std::as_const(grad).tensors();
  double worst = 0.0;
  for (std::size_t ti = 0; ti < probe_t.size(); ++ti) {
    for (std::size_t i = 0; i < probe_t[ti].size(); ++i) {
      const double orig = probe_t[ti][i];
      probe_t[ti][i] = orig + epsilon;
      const double up = sequence_loss(seq, probe, opt).mean();
      probe_t[ti][i] = orig - epsilon;
      const double down = sequence_loss(seq, probe, opt).mean();
      probe_t[ti][i] = orig;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double analytic = grad_t[ti][i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      worst = std::max(worst, std::abs(analytic - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace posenc
