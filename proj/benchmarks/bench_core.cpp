#include <benchmark/benchmark.h>

#include "anisost/adaptive.hpp"
#include "anisost/approx.hpp"
#include "anisost/besov.hpp"
#include "anisost/field.hpp"
#include "anisost/moduli.hpp"
#include "anisost/quadrature.hpp"

using namespace anisost;

namespace {

void BM_BisectSimplex(benchmark::State& state) {
  Simplex S = kuhn_mesh(static_cast<int>(state.range(0))).front();
  for (auto _ : state) {
    auto [a, b] = bisect_simplex(S);
    benchmark::DoNotOptimize(a);
    S = b.level < 40 ? b : kuhn_mesh(static_cast<int>(state.range(0))).front();
  }
}
BENCHMARK(BM_BisectSimplex)->Arg(2)->Arg(3);

void BM_PrismRule(benchmark::State& state) {
  const Interval J{0, 1, 0};
  const Simplex S = reference_simplex(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const QuadratureRule rule = prism_rule(J, S, 3, static_cast<int>(state.range(1)));
    benchmark::DoNotOptimize(rule.weight_sum());
  }
}
BENCHMARK(BM_PrismRule)->Args({2, 4})->Args({2, 8})->Args({3, 6});

void BM_LpNorm(benchmark::State& state) {
  const Interval J{0, 1, 0};
  const Simplex S = reference_simplex(2);
  const ScalarField f = builtin_field("smooth_wave", FieldParams{}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(f, J, S, 2.0, 4, 6));
}
BENCHMARK(BM_LpNorm);

void BM_SupModulus(benchmark::State& state) {
  const Cylinder cyl = unit_cylinder(static_cast<int>(state.range(0)));
  const NodeSet nodes = quadrature_nodes(cyl, NodeBuildParams{});
  const ScalarField f = builtin_field("smooth_wave", FieldParams{}, cyl.dim());
  SamplingConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sup_modulus(f, cyl, nodes, Direction::spatial, 2, 0.25, 2.0, cfg).value);
}
BENCHMARK(BM_SupModulus)->Arg(1)->Arg(2);

void BM_BestFit(benchmark::State& state) {
  Prism el;
  el.time = {0, 1, 0};
  el.space = reference_simplex(2);
  const ScalarField f = builtin_field("smooth_wave", FieldParams{}, 2);
  const QuadratureRule rule = prism_rule(el.time, el.space, 3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(best_fit(f, el, 2, 2, 2.0, rule).error);
}
BENCHMARK(BM_BestFit);

void BM_BesovSeminorm(benchmark::State& state) {
  const Cylinder cyl = unit_cylinder(1);
  const ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  SamplingConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        besov_seminorm(f, cyl, 1.0, 1.0, 2.0, 2.0, 8, cfg).seminorm);
}
BENCHMARK(BM_BesovSeminorm);

void BM_GreedyRun(benchmark::State& state) {
  const Cylinder cyl = unit_cylinder(1);
  const ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  for (auto _ : state) {
    Partition P0 = make_tensor_partition(cyl, 1, 1.0, 1.0);
    RefinementConfig cfg;
    cfg.d = 1;
    cfg.delta = 1e-3;
    benchmark::DoNotOptimize(greedy(f, P0, cfg).partition.elements.size());
  }
}
BENCHMARK(BM_GreedyRun);

}  // namespace

BENCHMARK_MAIN();
