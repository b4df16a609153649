#include "posenc/kernels.hpp"

#include <cstddef>
#include <random>

#include "posenc/rng.hpp"

namespace posenc::kernels {

std::uint64_t walk_stream_seed(std::uint64_t master, std::size_t node) {
  return splitmix64(master ^ splitmix64(0x5741'4c4bULL + static_cast<std::uint64_t>(node)));
}

std::size_t sample_row(std::span<const double> row, double u) {
  double cum = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] <= 0.0) continue;
    cum += row[j];
    last_nonzero = j;
    if (u < cum) return j;
  }
  // u landed in the rounding slack above the accumulated sum
  return last_nonzero;
}

namespace {

void prune_pair(std::span<const Point> pois, std::span<const Segment> obstacles, std::size_t i,
                std::size_t j, Matrix& dist) {
  const Segment edge{pois[i], pois[j]};
  for (const auto& wall : obstacles)
    if (segments_intersect(edge, wall)) return;
  const double d = euclidean(pois[i], pois[j]);
  dist(i, j) = d;
  dist(j, i) = d;
}

void walks_from(const Matrix& trans, std::size_t node, std::size_t walks_per_node,
                std::size_t length, std::uint64_t seed, std::uint32_t* out) {
  std::mt19937_64 gen(walk_stream_seed(seed, node));
  for (std::size_t r = 0; r < walks_per_node; ++r) {
    std::uint32_t* walk = out + r * length;
    std::size_t cur = node;
    walk[0] = static_cast<std::uint32_t>(cur);
    for (std::size_t s = 1; s < length; ++s) {
      cur = sample_row(trans.row(cur), unit_uniform(gen));
      walk[s] = static_cast<std::uint32_t>(cur);
    }
  }
}

void project_row(const Matrix& x, std::size_t t, const Matrix& weights, std::size_t col_offset,
                 std::span<const double> bias, Matrix& out) {
  const std::size_t f = x.cols();
  const double* xr = x.data() + t * f;
  double* o = out.data() + t * out.cols();
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    const double* w = weights.data() + r * weights.cols() + col_offset;
    double acc = bias[r];
    for (std::size_t k = 0; k < f; ++k) acc += w[k] * xr[k];
    o[r] = acc;
  }
}

void accum_row(const Matrix& delta, const Matrix& x, std::size_t rows, std::size_t col_offset,
               std::size_t r, Matrix& grad) {
  const std::size_t f = x.cols();
  double* g = grad.data() + r * grad.cols() + col_offset;
  for (std::size_t t = 0; t < rows; ++t) {
    const double d = delta(t, r);
    if (d == 0.0) continue;
    const double* xr = x.data() + t * f;
    for (std::size_t k = 0; k < f; ++k) g[k] += d * xr[k];
  }
}

}  // namespace

namespace serial {

Matrix prune(std::span<const Point> pois, std::span<const Segment> obstacles) {
  const std::size_t n = pois.size();
  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) prune_pair(pois, obstacles, i, j, dist);
  return dist;
}

std::vector<std::uint32_t> random_walks(const Matrix& trans, std::size_t walks_per_node,
                                        std::size_t length, std::uint64_t seed) {
  const std::size_t n = trans.rows();
  std::vector<std::uint32_t> walks(n * walks_per_node * length);
  for (std::size_t node = 0; node < n; ++node)
    walks_from(trans, node, walks_per_node, length, seed,
               walks.data() + node * walks_per_node * length);
  return walks;
}

void project(const Matrix& x, std::size_t rows, const Matrix& weights, std::size_t col_offset,
             std::span<const double> bias, Matrix& out) {
  for (std::size_t t = 0; t < rows; ++t) project_row(x, t, weights, col_offset, bias, out);
}

void outer_accum(const Matrix& delta, const Matrix& x, std::size_t rows, std::size_t col_offset,
                 Matrix& grad) {
  for (std::size_t r = 0; r < grad.rows(); ++r) accum_row(delta, x, rows, col_offset, r, grad);
}

}  // namespace serial

namespace omp {

Matrix prune(std::span<const Point> pois, std::span<const Segment> obstacles) {
  const auto n = static_cast<std::ptrdiff_t>(pois.size());
  Matrix dist(pois.size(), pois.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = i + 1; j < n; ++j)
      prune_pair(pois, obstacles, static_cast<std::size_t>(i), static_cast<std::size_t>(j), dist);
  return dist;
}

std::vector<std::uint32_t> random_walks(const Matrix& trans, std::size_t walks_per_node,
                                        std::size_t length, std::uint64_t seed) {
  const auto n = static_cast<std::ptrdiff_t>(trans.rows());
  std::vector<std::uint32_t> walks(trans.rows() * walks_per_node * length);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t node = 0; node < n; ++node) {
    const auto u = static_cast<std::size_t>(node);
    walks_from(trans, u, walks_per_node, length, seed,
               walks.data() + u * walks_per_node * length);
  }
  return walks;
}

void project(const Matrix& x, std::size_t rows, const Matrix& weights, std::size_t col_offset,
             std::span<const double> bias, Matrix& out) {
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t)
    project_row(x, static_cast<std::size_t>(t), weights, col_offset, bias, out);
}

void outer_accum(const Matrix& delta, const Matrix& x, std::size_t rows, std::size_t col_offset,
                 Matrix& grad) {
  const auto n = static_cast<std::ptrdiff_t>(grad.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r)
    accum_row(delta, x, rows, col_offset, static_cast<std::size_t>(r), grad);
}

}  // namespace omp

}  // namespace posenc::kernels
