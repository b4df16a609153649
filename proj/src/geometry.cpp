#include "posenc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "posenc/error.hpp"
#include "posenc/kernels.hpp"

namespace posenc {

namespace {

// z-component of (p - o) x (q - o) on the first two coordinates.
double cross(const Point& p, const Point& o, const Point& q) {
  return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]);
}

std::size_t find_id(const std::vector<std::string>& ids, const std::string& id) {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw DataError("unknown node id '" + id + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace

std::size_t LayoutMap::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < pois.size(); ++i)
    if (pois[i].id == id) return i;
  throw DataError("unknown POI id '" + id + "'");
}

void validate(const LayoutMap& map) {
  if (map.pois.empty()) throw DataError("layout has no POIs");
  const std::size_t dim = map.pois.front().point.dim();
  if (dim < 2) throw DataError("POI coordinates need at least two dimensions");
  std::set<std::string> ids;
  auto check_point = [dim](const Point& p, const std::string& what) {
    if (p.dim() != dim) throw DataError(what + ": coordinate dimension mismatch");
    for (double c : p.coords)
      if (!std::isfinite(c)) throw DataError(what + ": non-finite coordinate");
  };
  for (const auto& poi : map.pois) {
    if (poi.id.empty()) throw DataError("POI with empty id");
    if (!ids.insert(poi.id).second) throw DataError("duplicate POI id '" + poi.id + "'");
    check_point(poi.point, "POI " + poi.id);
  }
  for (std::size_t i = 0; i < map.pois.size(); ++i)
    for (std::size_t j = i + 1; j < map.pois.size(); ++j)
      if (map.pois[i].point == map.pois[j].point)
        throw DataError("POIs '" + map.pois[i].id + "' and '" + map.pois[j].id +
                        "' share coordinates");
  for (std::size_t k = 0; k < map.obstacles.size(); ++k) {
    const auto& s = map.obstacles[k];
    const std::string what = "obstacle " + std::to_string(k);
    check_point(s.a, what);
    check_point(s.b, what);
    if (s.a == s.b) throw DataError(what + " has zero length");
  }
  for (const auto& [a, b] : map.manual_edges) {
    if (!ids.count(a)) throw DataError("manual edge references unknown POI '" + a + "'");
    if (!ids.count(b)) throw DataError("manual edge references unknown POI '" + b + "'");
    if (a == b) throw DataError("manual edge '" + a + "' is a self-edge");
  }
}

std::size_t AccessibilityGraph::index_of(const std::string& id) const {
  return find_id(node_ids, id);
}

std::size_t AccessibilityGraph::edge_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (has_edge(i, j)) ++n;
  return n;
}

double euclidean(const Point& p, const Point& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double d = p[i] - q[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool on_segment(const Segment& l, const Point& p) {
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double lo = std::min(l.a[i], l.b[i]);
    const double hi = std::max(l.a[i], l.b[i]);
    if (p[i] < lo || p[i] > hi) return false;
  }
  return true;
}

bool segments_intersect(const Segment& l1, const Segment& l2) {
  const std::size_t dim = l1.a.dim();
  if (l1.b.dim() != dim || l2.a.dim() != dim || l2.b.dim() != dim)
    throw DataError("segments_intersect: dimension mismatch");
  if (dim < 2) throw DataError("segments_intersect: need at least two coordinates");

  const Point& c1 = l1.a;
  const Point& c2 = l1.b;
  const Point& c3 = l2.a;
  const Point& c4 = l2.b;
  const double v1 = cross(c1, c3, c4);
  const double v2 = cross(c2, c3, c4);
  const double v3 = cross(c3, c1, c2);
  const double v4 = cross(c4, c1, c2);

  if (v1 * v2 < 0 && v3 * v4 < 0) return true;
  if (v1 == 0 && on_segment(l2, c1)) return true;
  if (v2 == 0 && on_segment(l2, c2)) return true;
  if (v3 == 0 && on_segment(l1, c3)) return true;
  if (v4 == 0 && on_segment(l1, c4)) return true;
  return false;
}

namespace {

AccessibilityGraph prune_with(const LayoutMap& map, kernels::PruneFn kernel) {
  validate(map);
  AccessibilityGraph g;
  std::vector<Point> points;
  for (const auto& poi : map.pois) {
    g.node_ids.push_back(poi.id);
    points.push_back(poi.point);
  }
  g.dist = kernel(points, map.obstacles);
  g.points = std::move(points);
  return g;
}

}  // namespace

AccessibilityGraph complete_graph_prune(const LayoutMap& map) {
  return prune_with(map, &kernels::omp::prune);
}

AccessibilityGraph complete_graph_prune_serial(const LayoutMap& map) {
  return prune_with(map, &kernels::serial::prune);
}

AccessibilityGraph manual_edge(AccessibilityGraph graph, const std::string& id_a,
                               const std::string& id_b) {
  const std::size_t i = graph.index_of(id_a);
  const std::size_t j = graph.index_of(id_b);
  if (i == j) throw DataError("manual edge '" + id_a + "' is a self-edge");
  const double d = euclidean(graph.points[i], graph.points[j]);
  graph.dist(i, j) = d;
  graph.dist(j, i) = d;
  return graph;
}

AccessibilityGraph apply_manual_edges(AccessibilityGraph graph, const LayoutMap& map) {
  for (const auto& [a, b] : map.manual_edges) graph = manual_edge(std::move(graph), a, b);
  return graph;
}

std::vector<std::vector<std::size_t>> connected_components(const AccessibilityGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      comp.push_back(u);
      for (std::size_t v = 0; v < n; ++v)
        if (!seen[v] && graph.has_edge(u, v)) {
          seen[v] = true;
          q.push(v);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace posenc
