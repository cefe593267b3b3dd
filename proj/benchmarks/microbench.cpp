#include "acqregret/acquisition.hpp"
#include "acqregret/direct.hpp"
#include "acqregret/gp.hpp"
#include "acqregret/local_search.hpp"
#include "acqregret/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace acqregret;

GpModel Model(int n, int d) {
  Rng rng(7);
  Matrix x(n, d);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.Uniform01();
    y[i] = std::sin(6.0 * x(i, 0)) + rng.Normal() * 0.1;
  }
  return GpModel::Build(Kernel(KernelFamily::kMatern52, 1.0, Vector::Constant(d, 0.3)), 0.05, x, y);
}

void BM_EiValueAndGrad(benchmark::State& state) {
  const GpModel model = Model(static_cast<int>(state.range(0)), 2);
  const AcquisitionSpec spec = AcquisitionSpec::ForTargets(AcquisitionKind::kEI, model.train_targets());
  const Vector x = Vector::Constant(2, 0.4);
  Vector g;
  for (auto _ : state) benchmark::DoNotOptimize(AcquisitionValueAndGrad(spec, model, x, g));
}
BENCHMARK(BM_EiValueAndGrad)->Arg(10)->Arg(50);

void BM_FitGp(benchmark::State& state) {
  const GpModel model = Model(static_cast<int>(state.range(0)), 2);
  GpFitOptions opts;
  opts.restarts = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(FitGp(model.train_inputs(), model.train_targets(), KernelFamily::kMatern52, opts, 3));
  }
}
BENCHMARK(BM_FitGp)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DirectMaximize(benchmark::State& state) {
  const GpModel model = Model(20, 2);
  const AcquisitionHandle h =
      MakeAcquisitionHandle(AcquisitionSpec::ForTargets(AcquisitionKind::kEI, model.train_targets()), model);
  DirectConfig cfg;
  cfg.max_evals = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(DirectMaximize(h, Domain::UnitCube(2), cfg));
}
BENCHMARK(BM_DirectMaximize)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_MultiStartMaximize(benchmark::State& state) {
  const GpModel model = Model(20, 2);
  const AcquisitionHandle h =
      MakeAcquisitionHandle(AcquisitionSpec::ForTargets(AcquisitionKind::kEI, model.train_targets()), model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MultiStartMaximize(h, Domain::UnitCube(2), static_cast<int>(state.range(0)),
                                                LocalSearchConfig{}, 5));
  }
}
BENCHMARK(BM_MultiStartMaximize)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
