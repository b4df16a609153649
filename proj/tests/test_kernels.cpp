#include <doctest.h>

#include <omp.h>

#include <random>

#include "paper_example.hpp"
#include "posenc/graph.hpp"
#include "posenc/kernels.hpp"
#include "posenc/rng.hpp"

using namespace posenc;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Matrix m(r, c);
  for (auto& v : m.flat()) v = unit_uniform(gen) - 0.5;
  return m;
}

// Forces a real thread team even on a single core.
struct Threads {
  int saved = omp_get_max_threads();
  explicit Threads(int n) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("parallel prune equals the serial reference") {
  Threads t(4);
  std::mt19937_64 gen(21);
  std::vector<Point> pois;
  std::vector<Segment> walls;
  for (int i = 0; i < 80; ++i) pois.push_back(Point{{40 * unit_uniform(gen), 40 * unit_uniform(gen)}});
  for (int i = 0; i < 30; ++i) {
    const double x = 40 * unit_uniform(gen), y = 40 * unit_uniform(gen);
    walls.push_back({Point{{x, y}}, Point{{x + 3, y - 2}}});
  }
  CHECK(kernels::omp::prune(pois, walls) == kernels::serial::prune(pois, walls));
}

TEST_CASE("parallel walks equal the serial reference") {
  Threads t(4);
  const Matrix trans = apg_from_ag(four_node_graph(), 0.5).trans;
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const auto a = kernels::serial::random_walks(trans, 37, 25, seed);
    const auto b = kernels::omp::random_walks(trans, 37, 25, seed);
    CHECK(a == b);
    CHECK(a.size() == 4u * 37u * 25u);
  }
  CHECK(kernels::serial::random_walks(trans, 5, 5, 1) != kernels::serial::random_walks(trans, 5, 5, 2));
}

TEST_CASE("parallel projection and accumulation equal the serial reference") {
  Threads t(3);
  const Matrix x = random_matrix(57, 11, 1);
  const Matrix w = random_matrix(24, 6 + 11, 2);
  std::vector<double> bias(24);
  for (std::size_t i = 0; i < bias.size(); ++i) bias[i] = 0.01 * static_cast<double>(i);
  Matrix a(57, 24), b(57, 24);
  kernels::serial::project(x, 50, w, 6, bias, a);
  kernels::omp::project(x, 50, w, 6, bias, b);
  CHECK(a == b);
  // direct sum for one entry
  double expect = bias[5];
  for (std::size_t k = 0; k < 11; ++k) expect += x(3, k) * w(5, 6 + k);
  CHECK(a(3, 5) == doctest::Approx(expect).epsilon(1e-14));
  // rows past `rows` untouched
  CHECK(a(55, 0) == 0.0);

  const Matrix delta = random_matrix(57, 24, 3);
  Matrix ga = random_matrix(24, 17, 4), gb = ga;
  const Matrix g0 = ga;
  kernels::serial::outer_accum(delta, x, 50, 6, ga);
  kernels::omp::outer_accum(delta, x, 50, 6, gb);
  CHECK(ga == gb);
  double acc = g0(7, 6 + 2);
  for (std::size_t s = 0; s < 50; ++s) acc += delta(s, 7) * x(s, 2);
  CHECK(ga(7, 8) == doctest::Approx(acc).epsilon(1e-13));
  CHECK(ga(7, 0) == g0(7, 0));
}

TEST_CASE("sample_row") {
  const std::vector<double> row{0.0, 0.25, 0.0, 0.75};
  CHECK(kernels::sample_row(row, 0.0) == 1);
  CHECK(kernels::sample_row(row, 0.2499) == 1);
  CHECK(kernels::sample_row(row, 0.25) == 3);
  CHECK(kernels::sample_row(row, 0.999999) == 3);
  // rounding slack never lands on a zero-probability entry
  const std::vector<double> short_row{0.3, 0.3, 0.3999999, 0.0};
  CHECK(kernels::sample_row(short_row, 0.9999999999) == 2);
}
