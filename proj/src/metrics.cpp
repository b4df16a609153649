#include "posenc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "posenc/error.hpp"

namespace posenc {

EvalReport make_report(const std::vector<std::vector<std::size_t>>& confusion) {
  const std::size_t n = confusion.size();
  EvalReport r;
  r.confusion = confusion;
  std::vector<std::size_t> support(n, 0), predicted(n, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      support[i] += confusion[i][j];
      predicted[j] += confusion[i][j];
      r.total += confusion[i][j];
      if (i == j) correct += confusion[i][j];
    }
  if (r.total == 0) throw DataError("evaluation set has no labelled events");
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.total);

  std::size_t present = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (support[c] == 0 && predicted[c] == 0) continue;
    ++present;
    const double tp = static_cast<double>(confusion[c][c]);
    const double p = predicted[c] ? tp / static_cast<double>(predicted[c]) : 0.0;
    const double rc = support[c] ? tp / static_cast<double>(support[c]) : 0.0;
    r.precision += p;
    r.recall += rc;
    r.f1 += (p + rc) > 0.0 ? 2.0 * p * rc / (p + rc) : 0.0;
  }
  r.precision /= static_cast<double>(present);
  r.recall /= static_cast<double>(present);
  r.f1 /= static_cast<double>(present);
  return r;
}

EvalReport report_from_pairs(const std::vector<int>& truth, const std::vector<int>& predicted,
                             std::size_t classes) {
  if (truth.size() != predicted.size())
    throw DataError("truth and prediction lengths differ");
  std::vector<std::vector<std::size_t>> cm(classes, std::vector<std::size_t>(classes, 0));
  const auto n = static_cast<int>(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0) continue;
    if (truth[i] >= n || predicted[i] < 0 || predicted[i] >= n)
      throw DataError("label outside the class range");
    ++cm[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
  return make_report(cm);
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

double metric_value(const EvalReport& r, const std::string& name) {
  if (name == "accuracy") return r.accuracy;
  if (name == "precision") return r.precision;
  if (name == "recall") return r.recall;
  if (name == "f1") return r.f1;
  throw ConfigError("unknown metric '" + name + "'");
}

}  // namespace posenc
