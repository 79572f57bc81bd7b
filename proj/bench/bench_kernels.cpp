// Serial against OpenMP kernels: reduced-Hessian assembly and verifier sweeps.

#include <benchmark/benchmark.h>

#include "renyi/experiments.hpp"
#include "renyi/solver.hpp"
#include "renyi/verifier.hpp"

using namespace renyi;

namespace {

struct HessianFixture {
  AffineForm form;
  ProductBarrier barrier;

  static HessianFixture make(int n) {
    Rng rng(1);
    const Matrix a = random_bipartite_state(rng, n);
    Vector z0;
    AffineForm form = mutual_info_form(a, n, 0.75, z0);
    ProductBarrier barrier(form.cones, form.point(z0));
    return {std::move(form), std::move(barrier)};
  }
};

void reduced_hessian(benchmark::State& state, bool parallel) {
  const auto f = HessianFixture::make(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    RealMatrix k = parallel ? reduced_hessian_parallel(f.barrier, f.form.N)
                            : reduced_hessian_serial(f.barrier, f.form.N);
    benchmark::DoNotOptimize(k.data());
  }
  state.counters["columns"] = static_cast<double>(f.form.N.cols());
}

void BM_ReducedHessianSerial(benchmark::State& s) { reduced_hessian(s, false); }
void BM_ReducedHessianParallel(benchmark::State& s) { reduced_hessian(s, true); }
BENCHMARK(BM_ReducedHessianSerial)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReducedHessianParallel)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void sweep(benchmark::State& state, bool parallel) {
  SampleSpec spec;
  spec.count = 200;
  spec.boundary_bias = 0.5;
  spec.parallel = parallel;
  const ConeKind cone = ConeKind::renyi_epi(static_cast<int>(state.range(0)), 1.5);
  for (auto _ : state) {
    VerificationReport r = check_self_concordance(cone, spec);
    benchmark::DoNotOptimize(r.worst_violation);
  }
  state.counters["samples"] = spec.count;
}

void BM_SelfConcordanceSweepSerial(benchmark::State& s) { sweep(s, false); }
void BM_SelfConcordanceSweepParallel(benchmark::State& s) { sweep(s, true); }
BENCHMARK(BM_SelfConcordanceSweepSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelfConcordanceSweepParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
