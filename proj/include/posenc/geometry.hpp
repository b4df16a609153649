#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "posenc/matrix.hpp"

namespace posenc {

/// A location in the layout's planar coordinate system. Extra coordinates
/// beyond the first two are carried but only the bounding-box test uses them.
struct Point {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  friend bool operator==(const Point&, const Point&) = default;
};

struct Segment {
  Point a;
  Point b;
};

struct Poi {
  std::string id;
  Point point;
};

/// Points of interest plus obstacle walls, all in one coordinate system.
struct LayoutMap {
  std::vector<Poi> pois;
  std::vector<Segment> obstacles;
  std::vector<std::pair<std::string, std::string>> manual_edges;

  /// Index of a POI by id; throws DataError when absent.
  std::size_t index_of(const std::string& id) const;
};

/// Throws DataError on: no POIs, duplicate ids, mixed dimensions, dimension
/// below two, non-finite coordinates, zero-length obstacles, co-located POIs.
void validate(const LayoutMap& map);

/// Weighted undirected graph over POIs. dist(i, j) == 0 means no edge.
struct AccessibilityGraph {
  std::vector<std::string> node_ids;
  std::vector<Point> points;
  Matrix dist;

  std::size_t size() const { return node_ids.size(); }
  std::size_t index_of(const std::string& id) const;
  std::size_t edge_count() const;
  bool has_edge(std::size_t i, std::size_t j) const { return dist(i, j) > 0.0; }
};

double euclidean(const Point& p, const Point& q);

/// Bounding-box membership test used once collinearity is already known.
bool on_segment(const Segment& l, const Point& p);

/// Collision test between two segments using cross-product signs on the
/// first two coordinates. Touching and collinear overlap count as collisions.
/// Throws DataError on a dimension mismatch.
bool segments_intersect(const Segment& l1, const Segment& l2);

/// Complete graph on the POIs with every edge crossing an obstacle removed.
/// Manual edges listed in the map are not applied here; see apply_manual_edges.
AccessibilityGraph complete_graph_prune(const LayoutMap& map);

/// Same result as complete_graph_prune, but single-threaded. Kept as the
/// reference the parallel version is tested against.
AccessibilityGraph complete_graph_prune_serial(const LayoutMap& map);

/// Inserts edge a-b with its Euclidean length, ignoring obstacles.
/// Idempotent. Throws DataError on unknown ids or a self-edge.
AccessibilityGraph manual_edge(AccessibilityGraph graph, const std::string& id_a,
                               const std::string& id_b);

AccessibilityGraph apply_manual_edges(AccessibilityGraph graph, const LayoutMap& map);

/// Connected components as lists of node indices, ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const AccessibilityGraph& graph);

}  // namespace posenc
