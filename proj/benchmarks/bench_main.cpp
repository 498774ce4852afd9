#include <benchmark/benchmark.h>

#include <random>

#include "insight/eval.hpp"
#include "insight/fusion.hpp"
#include "insight/nn_index.hpp"
#include "insight/rle_mask.hpp"
#include "insight/scene_graph.hpp"

using namespace insight;

namespace {

const Taxonomy& taxonomy() {
  static const Taxonomy t = Taxonomy::defaults();
  return t;
}

std::vector<Vec3> random_points(std::size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 50.0);
  std::vector<Vec3> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    points.emplace_back(coord(rng), coord(rng), coord(rng));
  }
  return points;
}

void BM_NnIndexBuild(benchmark::State& state) {
  const auto points = random_points(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    NnIndex index(points);
    benchmark::DoNotOptimize(index);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NnIndexBuild)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_NnIndexQuery(benchmark::State& state) {
  const auto points = random_points(static_cast<std::size_t>(state.range(0)), 2);
  const NnIndex index(points);
  const auto queries = random_points(1024, 3);
  std::size_t qi = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.nearest(queries[qi++ & 1023]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NnIndexQuery)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_LinearScanQuery(benchmark::State& state) {
  const auto points = random_points(static_cast<std::size_t>(state.range(0)), 2);
  const auto queries = random_points(1024, 3);
  std::size_t qi = 0;
  for (auto _ : state) {
    const Vec3& q = queries[qi++ & 1023];
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d2 = (points[i] - q).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LinearScanQuery)->Arg(1000)->Arg(10000);

void BM_RegistryInsert(benchmark::State& state) {
  const auto centers = random_points(static_cast<std::size_t>(state.range(0)), 4);
  const int door = taxonomy().id_of("door");
  for (auto _ : state) {
    InstanceRegistry registry("bench", taxonomy());
    for (const Vec3& c : centers) {
      Observation obs;
      obs.image_id = "img";
      obs.class_id = door;
      obs.confidence = 0.8;
      obs.points.push_back(c);
      obs.centroid = c;
      registry.insert(std::move(obs));
    }
    benchmark::DoNotOptimize(registry.instance_count());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RegistryInsert)->Arg(1000)->Arg(10000);

void BM_RleRoundTrip(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const uint32_t w = 1920, h = 1080;
  std::vector<bool> bits(static_cast<std::size_t>(w) * h);
  std::bernoulli_distribution bit(0.2);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = bit(rng);
  for (auto _ : state) {
    const RleMask mask = encode_mask(bits, w, h);
    benchmark::DoNotOptimize(decode_mask(mask));
  }
  state.SetItemsProcessed(state.iterations() * bits.size());
}
BENCHMARK(BM_RleRoundTrip);

void BM_GraphmlExport(benchmark::State& state) {
  std::vector<FusedInstance> instances;
  const auto centers = random_points(static_cast<std::size_t>(state.range(0)), 6);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    FusedInstance f;
    f.class_id = taxonomy().id_of("door");
    f.class_name = "door";
    f.area_id = "bench";
    f.centroid = centers[i];
    f.confidence = 0.8;
    f.seq = static_cast<uint32_t>(i);
    f.instance_id = "bench/door/" + std::to_string(i);
    f.box.center = centers[i];
    f.box.extents = Vec3(1, 1, 2);
    instances.push_back(std::move(f));
  }
  const SceneGraph g = build_scene_graph("bench", instances, taxonomy(),
                                         FloorModel::single_floor(), "sam3")
                           .graph;
  for (auto _ : state) {
    benchmark::DoNotOptimize(export_graphml(g));
  }
  state.SetItemsProcessed(state.iterations() * g.node_count());
}
BENCHMARK(BM_GraphmlExport)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
