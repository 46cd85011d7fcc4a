#include "semmap/label_distribution.hpp"
#include "semmap/projection.hpp"
#include "semmap/synth.hpp"
#include "semmap/topo.hpp"

#include <benchmark/benchmark.h>

using namespace semmap;

namespace {

const World& bench_world() {
  static const World world = [] {
    WorldSpec spec;
    spec.seed = 7;
    spec.shape = TrajectoryShape::straight;
    spec.n_points = 1000;
    spec.n_frames = 20;
    spec.step = 0.2;
    spec.image_width = 320;
    spec.image_height = 240;
    return generate_world(spec);
  }();
  return world;
}

void BM_BayesUpdate(benchmark::State& state) {
  SynthRng rng(1);
  std::array<double, kNumLabels> raw{};
  for (auto& v : raw) v = rng.uniform();
  const auto obs = LabelDistribution::from_scores(std::span<const double>(raw));
  auto belief = LabelDistribution::uniform();
  for (auto _ : state) {
    belief = bayes_update(belief, obs);
    benchmark::DoNotOptimize(belief);
  }
}
BENCHMARK(BM_BayesUpdate);

// Project, sample and update every visible point of one frame.
void BM_FuseFrame(benchmark::State& state) {
  const World& world = bench_world();
  const auto& slam = world.bundle.slam;
  const auto& kf = slam.keyframes.front();
  const auto& ids = slam.visibility.at(kf.frame_id);
  const auto& raster = world.bundle.rasters.at(kf.frame_id);
  SemanticMap map = slam.to_semantic_map();
  for (auto _ : state) {
    auto rep = fuse_frame(map, kf, raster, ids);
    benchmark::DoNotOptimize(rep);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ids.size()));
}
BENCHMARK(BM_FuseFrame);

void BM_FuseRevisits(benchmark::State& state) {
  WorldSpec spec;
  spec.shape = TrajectoryShape::figure_eight;
  spec.n_points = 10;
  spec.n_frames = static_cast<std::size_t>(state.range(0));
  spec.image_width = 16;
  spec.image_height = 12;
  const auto world = generate_world(spec);
  const auto turns = detect_turns(world.bundle.slam.keyframes);
  const auto graph = build_topo(world.bundle.slam.keyframes, {}, turns);
  for (auto _ : state) {
    auto fused = fuse_revisits(graph);
    benchmark::DoNotOptimize(fused);
  }
}
BENCHMARK(BM_FuseRevisits)->Arg(341)->Arg(3401);

}  // namespace

BENCHMARK_MAIN();
