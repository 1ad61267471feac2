#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>
#include <memory>

#include "glv/glsolver.hpp"

using namespace glv;

namespace {

struct Fixture {
  explicit Fixture(int level) : mesh(make_icosphere(level)), frame(build_frame(mesh)) {
    energy = std::make_unique<GLEnergy>(frame, PotentialF{}, 0.1);
    u = random_field(frame, 1);
  }
  SurfaceMesh mesh;
  FrameField frame;
  std::unique_ptr<GLEnergy> energy;
  TangentVectorField u;
};

Fixture& fixture(int level) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[level];
  if (!f) f = std::make_unique<Fixture>(level);
  return *f;
}

void BM_EnergyGradientSerial(benchmark::State& state) {
  auto& f = fixture(static_cast<int>(state.range(0)));
  Eigen::VectorXcd g;
  for (auto _ : state) benchmark::DoNotOptimize(f.energy->evaluate_serial(f.u.z, &g));
  state.SetItemsProcessed(state.iterations() * f.mesh.num_vertices());
}

void BM_EnergyGradientParallel(benchmark::State& state) {
  auto& f = fixture(static_cast<int>(state.range(0)));
  Eigen::VectorXcd g;
  for (auto _ : state) benchmark::DoNotOptimize(f.energy->evaluate(f.u.z, &g));
  state.SetItemsProcessed(state.iterations() * f.mesh.num_vertices());
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_EnergyGradientSerial)->DenseRange(4, 6);
BENCHMARK(BM_EnergyGradientParallel)->DenseRange(4, 6);

BENCHMARK_MAIN();
