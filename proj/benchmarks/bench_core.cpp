#include <benchmark/benchmark.h>

#include "pfs/algorithms.hpp"
#include "pfs/analysis.hpp"
#include "pfs/geometry.hpp"
#include "pfs/problem.hpp"

namespace {

pfs::ProblemInstance make_instance(int horizon) {
  return pfs::make_quadratic_box_instance(1, horizon);
}

// Rotated box: no axis-aligned rows, so the distance oracle takes the
// iterative (Dykstra) path.
pfs::ProblemInstance make_rotated_instance() {
  const double r = 0.7071067811865476;
  pfs::ConstraintModel::Row r1{pfs::Vec(2), 0.5};
  r1.a << r, r;
  pfs::ConstraintModel::Row r2{pfs::Vec(2), 0.5};
  r2.a << -r, r;
  pfs::ConstraintModel::Row r3{pfs::Vec(2), 0.5};
  r3.a << r, -r;
  pfs::ConstraintModel::Row r4{pfs::Vec(2), 0.5};
  r4.a << -r, -r;
  return pfs::ProblemInstance(pfs::ConstraintModel({r1, r2, r3, r4}),
                              pfs::CostStream::generate(1, 8, 2), 1.0,
                              1.4142135623730951, 0.5, 0.1);
}

void BM_ProjectBall(benchmark::State& state) {
  pfs::Vec x(2);
  x << 1.7, -2.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pfs::project_ball(x, 1.0));
  }
}
BENCHMARK(BM_ProjectBall);

void BM_ProjectHalfspace(benchmark::State& state) {
  pfs::Vec x(2);
  x << 0.9, 0.4;
  pfs::Halfspace h;
  h.normal = pfs::Vec(2);
  h.normal << 1.0, 0.0;
  h.offset = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pfs::project_halfspace(x, h));
  }
}
BENCHMARK(BM_ProjectHalfspace);

void BM_ConstraintEval(benchmark::State& state) {
  auto inst = make_instance(16);
  pfs::Vec x(2);
  x << 0.31, -0.77;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inst.constraint().evaluate(x));
  }
}
BENCHMARK(BM_ConstraintEval);

void BM_PfsStep(benchmark::State& state) {
  pfs::Vec x(2);
  x << 0.7, 0.7;
  pfs::Vec grad(2);
  grad << 4.2, -1.8;
  pfs::Vec sub(2);
  sub << 1.0, 0.0;
  for (auto _ : state) {
    auto step = pfs::pfs_step_detailed(x, grad, 0.2, sub, 0.01, 0.005, 1.0);
    benchmark::DoNotOptimize(step);
  }
}
BENCHMARK(BM_PfsStep);

void BM_RunPfs(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  auto inst = make_instance(horizon);
  auto cfg = pfs::preset_regret_optimal(inst, horizon, pfs::Vec::Zero(2));
  for (auto _ : state) {
    auto logs = pfs::run_pfs(inst, cfg, horizon);
    benchmark::DoNotOptimize(logs);
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_RunPfs)->Arg(1000)->Arg(10000);

void BM_DistanceAxisAligned(benchmark::State& state) {
  auto inst = make_instance(16);
  pfs::Vec x(2);
  x << 0.9, -0.8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pfs::distance_to_sublevel(x, inst, 0.05));
  }
}
BENCHMARK(BM_DistanceAxisAligned);

void BM_DistanceDykstra(benchmark::State& state) {
  auto inst = make_rotated_instance();
  pfs::Vec x(2);
  x << 0.9, 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pfs::distance_to_sublevel(x, inst, 0.0));
  }
}
BENCHMARK(BM_DistanceDykstra);

}  // namespace

BENCHMARK_MAIN();
