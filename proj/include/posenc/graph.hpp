#pragma once

#include <span>
#include <string>
#include <vector>

#include "posenc/geometry.hpp"
#include "posenc/matrix.hpp"

namespace posenc {

inline constexpr double kDefaultSelfWeight = 0.5;

/// Row-stochastic transition matrix over the accessibility graph's nodes.
struct AccessProbabilityGraph {
  std::vector<std::string> node_ids;
  Matrix trans;
  double self_weight = kDefaultSelfWeight;
  // Nodes without any edge; they were given a self-loop of probability one.
  std::vector<std::string> isolated;

  std::size_t size() const { return node_ids.size(); }
};

/// Distance-to-probability transform. Positive distances d become 1/(d+1),
/// rows are normalised, a self-loop of weight w/(1-w) is added and rows are
/// normalised again, which leaves trans(i, i) == w for every connected node.
///
/// Isolated nodes get trans(i, i) = 1 regardless of w and are listed in
/// `isolated`. Throws ConfigError when w is outside [0, 1) and DataError on an
/// empty or asymmetric/negative distance matrix.
AccessProbabilityGraph apg_from_ag(const AccessibilityGraph& ag,
                                   double self_weight = kDefaultSelfWeight);

/// Matrix-level form of the same transform, for callers holding a bare
/// adjacency matrix.
Matrix transition_matrix(const Matrix& dist, double self_weight,
                         std::vector<std::size_t>* isolated = nullptr);

std::span<const double> transition_row(const AccessProbabilityGraph& apg,
                                       const std::string& node_id);

}  // namespace posenc
