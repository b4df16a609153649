#include "posenc/graph.hpp"

#include <algorithm>
#include <cmath>

#include "posenc/error.hpp"

namespace posenc {

namespace {

void normalise_rows(Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    double sum = 0.0;
    for (double v : row) sum += v;
    if (sum <= 0.0) continue;
    for (double& v : row) v /= sum;
  }
}

}  // namespace

Matrix transition_matrix(const Matrix& dist, double self_weight,
                         std::vector<std::size_t>* isolated) {
  if (!(self_weight >= 0.0 && self_weight < 1.0))
    throw ConfigError("self weight must lie in [0, 1), got " + std::to_string(self_weight));
  const std::size_t n = dist.rows();
  if (n == 0 || dist.cols() != n) throw DataError("adjacency matrix must be square and nonempty");

  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dist(i, j);
      if (!std::isfinite(d) || d < 0.0) throw DataError("adjacency entries must be finite and >= 0");
      if (i != j && d > 0.0) m(i, j) = 1.0 / (d + 1.0);
    }
  normalise_rows(m);

  const double diag = self_weight / (1.0 - self_weight);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    const bool has_edge = std::any_of(row.begin(), row.end(), [](double v) { return v > 0.0; });
    if (!has_edge) {
      m(i, i) = 1.0;
      if (isolated) isolated->push_back(i);
    } else {
      m(i, i) += diag;
    }
  }
  normalise_rows(m);
  return m;
}

AccessProbabilityGraph apg_from_ag(const AccessibilityGraph& ag, double self_weight) {
  const std::size_t n = ag.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (ag.dist(i, j) != ag.dist(j, i)) throw DataError("accessibility graph is not symmetric");

  AccessProbabilityGraph apg;
  apg.node_ids = ag.node_ids;
  apg.self_weight = self_weight;
  std::vector<std::size_t> isolated;
  apg.trans = transition_matrix(ag.dist, self_weight, &isolated);
  for (std::size_t i : isolated) apg.isolated.push_back(ag.node_ids[i]);
  return apg;
}

std::span<const double> transition_row(const AccessProbabilityGraph& apg,
                                       const std::string& node_id) {
  auto it = std::find(apg.node_ids.begin(), apg.node_ids.end(), node_id);
  if (it == apg.node_ids.end()) throw DataError("unknown node id '" + node_id + "'");
  return apg.trans.row(static_cast<std::size_t>(it - apg.node_ids.begin()));
}

}  // namespace posenc
