#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace posenc {

struct EvalReport {
  double accuracy = 0.0;
  double precision = 0.0;  // macro
  double recall = 0.0;     // macro
  double f1 = 0.0;         // macro, mean of per-class F1
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::size_t total = 0;
};

/// Builds a report from (truth, prediction) pairs over `classes` labels.
/// Macro averages run over classes that occur as truth or as prediction;
/// undefined ratios (0/0) count as zero.
EvalReport make_report(const std::vector<std::vector<std::size_t>>& confusion);

EvalReport report_from_pairs(const std::vector<int>& truth, const std::vector<int>& predicted,
                             std::size_t classes);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value
  double min = 0.0;
  double max = 0.0;
};

MetricSummary summarize(const std::vector<double>& values);

inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"accuracy", "precision", "recall", "f1"};
  return names;
}

double metric_value(const EvalReport& r, const std::string& name);

}  // namespace posenc
