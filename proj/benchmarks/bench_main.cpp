#include <benchmark/benchmark.h>

#include <vector>

#include "strata/devissage.hpp"
#include "strata/gallery.hpp"
#include "strata/sampling.hpp"

namespace {

using namespace strata;

DiscreteMeasure random_measure(const ConeSpace& X, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back({random_vector(X, rng), 1.0 / static_cast<double>(n)});
  return DiscreteMeasure(atoms);
}

const ConeSpace& theta() {
  static const ConeSpace X = gallery::cone_over(gallery::theta_graph(3.5, 4.0, 5.0), 1);
  return X;
}

void BM_FrechetMean(benchmark::State& state) {
  const DiscreteMeasure mu = random_measure(theta(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(frechet_mean(theta(), mu));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FrechetMean)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_Distance(benchmark::State& state) {
  Rng rng(2);
  const Point p = random_vector(theta(), rng);
  const Point q = random_vector(theta(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(distance(theta(), p, q));
}
BENCHMARK(BM_Distance);

void BM_FluctuatingCone(benchmark::State& state) {
  const ConeSpace X = gallery::spider(static_cast<int>(state.range(0)));
  std::vector<Atom> atoms;
  for (int v = 1; v <= 2; ++v) atoms.push_back({make_point({}, GraphPoint::vertex(v), 1.0), 0.5});
  const DiscreteMeasure mu(atoms);
  for (auto _ : state) benchmark::DoNotOptimize(fluctuating_cone(X, mu));
}
BENCHMARK(BM_FluctuatingCone)->Arg(3)->Arg(16)->Arg(64);

void BM_FluctuatingConeApproximate(benchmark::State& state) {
  const ConeSpace X = gallery::open_book(3, 1);
  const DiscreteMeasure mu({{make_point({-1.0}, GraphPoint::vertex(1), 1.0), 1.0 / 3},
                            {make_point({0.0}, GraphPoint::vertex(2), 1.0), 1.0 / 3},
                            {make_point({1.0}, GraphPoint::vertex(3), 1.0), 1.0 / 3}});
  for (auto _ : state) benchmark::DoNotOptimize(fluctuating_cone(X, mu, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FluctuatingConeApproximate)->DenseRange(1, 4);

void BM_Collapse(benchmark::State& state) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(4.0, 4.0, 4.0));
  const DiscreteMeasure mu({{make_point({}, OnEdge{EdgeId{1}, 1.0}, 1.0), 0.3246116026023812},
                            {make_point({}, OnEdge{EdgeId{2}, 1.0}, 1.0), 0.3246116026023812},
                            {make_point({}, GraphPoint::vertex(1), 1.0), 0.3507767947952376}});
  for (auto _ : state) benchmark::DoNotOptimize(collapse(X, mu));
}
BENCHMARK(BM_Collapse);

void BM_LimitLog(benchmark::State& state) {
  Rng rng(3);
  const TangentVector Z = random_unit_vector(theta(), rng);
  const LimitStage stage = make_limit_stage(theta(), Z);
  const TangentVector V = random_vector(theta(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(limit_log(stage, V));
}
BENCHMARK(BM_LimitLog);

}  // namespace

BENCHMARK_MAIN();
