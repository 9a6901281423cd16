#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "oslk/bevgrid.hpp"
#include "oslk/geometry3d.hpp"
#include "oslk/matching.hpp"
#include "oslk/selection.hpp"
#include "oslk/simulator.hpp"

using namespace oslk;

namespace {

Box3D random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-3, 3), dim(0.5, 4), yaw(-kPi, kPi);
  return Box3D::make(pos(rng), pos(rng), pos(rng) * 0.2, dim(rng), dim(rng), dim(rng), yaw(rng));
}

void BM_SolveAssignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 100);
  std::vector<double> v(n * n);
  for (double& x : v) x = u(rng);
  const CostMatrix costs(n, n, v);
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(costs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveAssignment)->RangeMultiplier(2)->Range(4, 256)->Complexity();

void BM_Iou3d(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<Box3D> boxes;
  for (int k = 0; k < 256; ++k) boxes.push_back(random_box(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iou3d(boxes[i % 256], boxes[(i + 1) % 256]));
    ++i;
  }
}
BENCHMARK(BM_Iou3d);

void BM_WindowResponse(benchmark::State& state) {
  SimConfig cfg;
  const auto sim = generate_scene(cfg, 0);
  const ResponseMap map = reduce_mean(sim.grid);
  const double size = static_cast<double>(state.range(0));
  const Box3D box = Box3D::make(0, 0, 0, size, size, 1.5, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(window_response(map, box));
}
BENCHMARK(BM_WindowResponse)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

void BM_Reduce(benchmark::State& state) {
  SimConfig cfg;
  const auto sim = generate_scene(cfg, 0);
  const auto method = state.range(0) == 0 ? Reduction::kMean : Reduction::kPca;
  for (auto _ : state) benchmark::DoNotOptimize(reduce(sim.grid, method));
  state.SetLabel(state.range(0) == 0 ? "mean" : "pca");
}
BENCHMARK(BM_Reduce)->Arg(0)->Arg(1);

void BM_ScenePipeline(benchmark::State& state) {
  SimConfig cfg;
  const auto sim = generate_scene(cfg, 3);
  PipelineConfig pipe;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_pseudo_labels(sim.scene.scene_id, sim.scene.proposals,
                                                  sim.scene.known_gt, sim.grid, pipe));
  }
}
BENCHMARK(BM_ScenePipeline);

}  // namespace

BENCHMARK_MAIN();
