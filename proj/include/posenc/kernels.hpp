#pragma once

// Data-parallel inner loops. Every kernel has a single-threaded reference in
// `serial` and an OpenMP version in `omp`; both produce bitwise-identical
// results because each output element is computed by exactly one thread in
// the same floating-point order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "posenc/geometry.hpp"
#include "posenc/matrix.hpp"

namespace posenc::kernels {

/// Distance matrix of the complete POI graph with obstructed edges zeroed.
using PruneFn = Matrix (*)(std::span<const Point>, std::span<const Segment>);

/// Row-major walks: walk w occupies [w * length, (w + 1) * length).
/// Walk index = start_node * walks_per_node + repetition.
using WalkFn = std::vector<std::uint32_t> (*)(const Matrix& trans, std::size_t walks_per_node,
                                              std::size_t length, std::uint64_t seed);

/// out(t, r) = bias[r] + sum_k x(t, k) * weights(r, col_offset + k)
using ProjectFn = void (*)(const Matrix& x, std::size_t rows, const Matrix& weights,
                           std::size_t col_offset, std::span<const double> bias, Matrix& out);

/// grad(r, col_offset + k) += sum_t delta(t, r) * x(t, k)
using OuterAccumFn = void (*)(const Matrix& delta, const Matrix& x, std::size_t rows,
                              std::size_t col_offset, Matrix& grad);

/// Seed of the generator used for walks starting at `node`.
std::uint64_t walk_stream_seed(std::uint64_t master, std::size_t node);

namespace serial {
Matrix prune(std::span<const Point> pois, std::span<const Segment> obstacles);
std::vector<std::uint32_t> random_walks(const Matrix& trans, std::size_t walks_per_node,
                                        std::size_t length, std::uint64_t seed);
void project(const Matrix& x, std::size_t rows, const Matrix& weights, std::size_t col_offset,
             std::span<const double> bias, Matrix& out);
void outer_accum(const Matrix& delta, const Matrix& x, std::size_t rows, std::size_t col_offset,
                 Matrix& grad);
}  // namespace serial

namespace omp {
Matrix prune(std::span<const Point> pois, std::span<const Segment> obstacles);
std::vector<std::uint32_t> random_walks(const Matrix& trans, std::size_t walks_per_node,
                                        std::size_t length, std::uint64_t seed);
void project(const Matrix& x, std::size_t rows, const Matrix& weights, std::size_t col_offset,
             std::span<const double> bias, Matrix& out);
void outer_accum(const Matrix& delta, const Matrix& x, std::size_t rows, std::size_t col_offset,
                 Matrix& grad);
}  // namespace omp

/// Samples an index from a probability row with a uniform draw in [0, 1).
std::size_t sample_row(std::span<const double> row, double u);

}  // namespace posenc::kernels
