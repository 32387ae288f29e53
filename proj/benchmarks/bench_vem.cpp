#include <benchmark/benchmark.h>

#include "polyvem/cases.hpp"
#include "polyvem/study.hpp"

using namespace vem;

namespace {

const Mesh2D& bench_mesh(int n) {
  static std::map<int, Mesh2D> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, lloyd_cvt(DomainSpec::square(3), n)).first;
  return it->second;
}

void BM_LloydCvt(benchmark::State& state) {
  const int n = int(state.range(0));
  for (auto _ : state) {
    const Mesh2D m = lloyd_cvt(DomainSpec::square(3), n);
    benchmark::DoNotOptimize(m.nodes.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LloydCvt)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_AuxStructure(benchmark::State& state) {
  const Mesh2D& m = bench_mesh(int(state.range(0)));
  for (auto _ : state) {
    const AuxStructure2D aux = build_aux_structure(m);
    benchmark::DoNotOptimize(aux.edges.data());
  }
  state.SetItemsProcessed(state.iterations() * m.num_cells());
}
BENCHMARK(BM_AuxStructure)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_PoissonLocal(benchmark::State& state) {
  const int k = int(state.range(0));
  const Mesh2D& m = bench_mesh(256);
  const AuxStructure2D aux = build_aux_structure(m);
  const ElementGeometry2D geom = element_geometry(m);
  int c = 0;
  for (auto _ : state) {
    const LocalPoisson L = conforming_local(m, aux, geom, c, k);
    benchmark::DoNotOptimize(L.proj.data());
    c = (c + 1) % m.num_cells();
  }
}
BENCHMARK(BM_PoissonLocal)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_StokesLocal(benchmark::State& state) {
  const Mesh2D& m = bench_mesh(256);
  const AuxStructure2D aux = build_aux_structure(m);
  const ElementGeometry2D geom = element_geometry(m);
  int c = 0;
  for (auto _ : state) {
    const StokesLocal L = stokes_local(m, aux, geom, c, 1.0);
    benchmark::DoNotOptimize(L.proj.data());
    c = (c + 1) % m.num_cells();
  }
}
BENCHMARK(BM_StokesLocal)->Unit(benchmark::kMicrosecond);

void BM_PoissonSolve(benchmark::State& state) {
  const Mesh2D& m = bench_mesh(int(state.range(0)));
  const study::ProblemSpec spec{"poisson", "reaction-log", 2, 1e8, 1.0};
  for (auto _ : state) {
    const study::SolveOutput out = study::run_single(spec, m);
    benchmark::DoNotOptimize(out.errors.data());
  }
  state.SetItemsProcessed(state.iterations() * m.num_cells());
}
BENCHMARK(BM_PoissonSolve)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Refine(benchmark::State& state) {
  const Mesh2D& m = bench_mesh(256);
  const AuxStructure2D aux = build_aux_structure(m);
  MarkSet all;
  for (int c = 0; c < m.num_cells(); ++c) all.cells.push_back(c);
  for (auto _ : state) {
    const Mesh2D r = refine(m, aux, all);
    benchmark::DoNotOptimize(r.nodes.data());
  }
  state.SetItemsProcessed(state.iterations() * m.num_cells());
}
BENCHMARK(BM_Refine)->Unit(benchmark::kMillisecond);

void BM_FaceCache3D(benchmark::State& state) {
  static const Mesh3D m = cvt_cube_mesh(64, 5);
  static const AuxStructure3D aux = build_aux3(m);
  for (auto _ : state) {
    const FaceProjectionCache cache = build_face_cache(m, aux);
    benchmark::DoNotOptimize(cache.proj.data());
  }
  state.SetItemsProcessed(state.iterations() * aux.num_faces());
}
BENCHMARK(BM_FaceCache3D)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
