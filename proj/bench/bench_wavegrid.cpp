// Serial reference kernels vs the OpenMP ones on the grid hot paths:
// point-map sampling and the Hamiltonian stencils.

#include <benchmark/benchmark.h>

#include "tdosc/wavegrid.hpp"

using namespace tdosc;

namespace {

struct Fixture {
  SystemParams params;
  ReductionPipeline pipe;
  QuantumContext ctx;

  Fixture() : params(make_params()), pipe(params, 1e-8), ctx(pipe, 257) {}

  static SystemParams make_params() {
    SystemParams p;
    p.m1 = ParameterProfile::constant(1.0);
    p.m2 = ParameterProfile::constant(1.0);
    p.C1 = ParameterProfile::constant(1.0);
    p.C2 = ParameterProfile::constant(1.0);
    p.C3 = ParameterProfile::constant(0.5);
    p.B = ParameterProfile::constant(0.0);
    p.t0 = 0.0;
    p.t1 = 20.0;
    return p;
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

PointFn psi_point(const QuantumNumbers& n, double t) {
  return [n, t](double x, double y) {
    return psi_compositional(n, x, y, t, fixture().ctx);
  };
}

void bench_sample(benchmark::State& state, bool serial) {
  const int n = static_cast<int>(state.range(0));
  const GridSpec grid = auto_grid(fixture().ctx, FieldFrame::Original, n);
  const PointFn f = psi_point({1, 1}, 3.0);
  for (auto _ : state) {
    const WaveField wf = serial ? sample_field_serial(grid, f, 3.0, FieldFrame::Original)
                                : sample_field(grid, f, 3.0, FieldFrame::Original);
    benchmark::DoNotOptimize(wf.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void bench_apply_transformed(benchmark::State& state, bool serial) {
  const int n = static_cast<int>(state.range(0));
  const GridSpec grid = auto_grid(fixture().ctx, FieldFrame::Transformed, n);
  const WaveField f = sample_chi({1, 1}, 3.0, fixture().ctx, grid);
  const ReducedCoefficients rc = fixture().pipe.coefficients(3.0);
  const TransformedHamiltonian ham{rc.Omega1 * rc.Omega1, rc.Omega2 * rc.Omega2};
  for (auto _ : state) {
    const WaveField out = serial ? apply_hamiltonian_serial(f, ham, 1.0)
                                 : apply_hamiltonian(f, ham, 1.0);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void bench_apply_original(benchmark::State& state, bool serial) {
  const int n = static_cast<int>(state.range(0));
  const GridSpec grid = auto_grid(fixture().ctx, FieldFrame::Original, n);
  const WaveField f = sample_psi({1, 1}, 3.0, fixture().ctx, grid);
  const OriginalHamiltonian ham = original_hamiltonian(fixture().pipe, 3.0);
  for (auto _ : state) {
    const WaveField out = serial ? apply_hamiltonian_serial(f, ham, 1.0)
                                 : apply_hamiltonian(f, ham, 1.0);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_sample_serial(benchmark::State& state) { bench_sample(state, true); }
void BM_sample_openmp(benchmark::State& state) { bench_sample(state, false); }
void BM_apply_transformed_serial(benchmark::State& state) {
  bench_apply_transformed(state, true);
}
void BM_apply_transformed_openmp(benchmark::State& state) {
  bench_apply_transformed(state, false);
}
void BM_apply_original_serial(benchmark::State& state) {
  bench_apply_original(state, true);
}
void BM_apply_original_openmp(benchmark::State& state) {
  bench_apply_original(state, false);
}

}  // namespace

BENCHMARK(BM_sample_serial)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_openmp)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_transformed_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_transformed_openmp)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_original_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_original_openmp)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
