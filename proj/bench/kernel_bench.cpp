// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the
// thread count; both variants compute identical results.

#include <benchmark/benchmark.h>

#include <random>

#include "posenc/graph.hpp"
#include "posenc/kernels.hpp"
#include "posenc/rng.hpp"

namespace {

using posenc::Matrix;
using posenc::Point;
using posenc::Segment;

struct Scene {
  std::vector<Point> pois;
  std::vector<Segment> walls;
};

Scene random_scene(std::size_t n, std::size_t walls) {
  std::mt19937_64 gen(7);
  auto coord = [&] { return 100.0 * posenc::unit_uniform(gen); };
  Scene s;
  for (std::size_t i = 0; i < n; ++i) s.pois.push_back(Point{{coord(), coord()}});
  for (std::size_t i = 0; i < walls; ++i) {
    const double x = coord(), y = coord();
    s.walls.push_back({Point{{x, y}}, Point{{x + 5.0, y + 2.0}}});
  }
  return s;
}

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Matrix m(r, c);
  for (auto& v : m.flat()) v = posenc::unit_uniform(gen) - 0.5;
  return m;
}

template <posenc::kernels::PruneFn Fn>
void BM_Prune(benchmark::State& state) {
  const Scene s = random_scene(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(s.pois, s.walls));
}

template <posenc::kernels::WalkFn Fn>
void BM_Walks(benchmark::State& state) {
  const Scene s = random_scene(static_cast<std::size_t>(state.range(0)), 16);
  const Matrix trans = posenc::transition_matrix(posenc::kernels::serial::prune(s.pois, s.walls), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(trans, 50, 200, 3));
}

template <posenc::kernels::ProjectFn Fn>
void BM_Project(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(t, 48, 1), w = random_matrix(256, 64 + 48, 2);
  const std::vector<double> b(256, 0.1);
  Matrix out(t, 256);
  for (auto _ : state) {
    Fn(x, t, w, 64, b, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <posenc::kernels::OuterAccumFn Fn>
void BM_OuterAccum(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(t, 48, 1), delta = random_matrix(t, 256, 3);
  Matrix grad(256, 64 + 48);
  for (auto _ : state) {
    Fn(delta, x, t, 64, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}

namespace k = posenc::kernels;

BENCHMARK(BM_Prune<k::serial::prune>)->Name("prune/serial")->Arg(64)->Arg(256);
BENCHMARK(BM_Prune<k::omp::prune>)->Name("prune/omp")->Arg(64)->Arg(256);
BENCHMARK(BM_Walks<k::serial::random_walks>)->Name("walks/serial")->Arg(32)->Arg(128);
BENCHMARK(BM_Walks<k::omp::random_walks>)->Name("walks/omp")->Arg(32)->Arg(128);
BENCHMARK(BM_Project<k::serial::project>)->Name("project/serial")->Arg(1000);
BENCHMARK(BM_Project<k::omp::project>)->Name("project/omp")->Arg(1000);
BENCHMARK(BM_OuterAccum<k::serial::outer_accum>)->Name("outer_accum/serial")->Arg(1000);
BENCHMARK(BM_OuterAccum<k::omp::outer_accum>)->Name("outer_accum/omp")->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
