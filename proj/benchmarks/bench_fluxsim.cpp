#include <benchmark/benchmark.h>

#include "fluxsim/estimators.hpp"
#include "fluxsim/harness.hpp"
#include "fluxsim/integrate.hpp"
#include "fluxsim/machine.hpp"

namespace {

using namespace fluxsim;

void BM_IntegrateStep(benchmark::State& state) {
  const auto method = static_cast<IntegrationMethod>(state.range(0));
  const Derivative rotate = [](double, const State& s) { return State{s[0].rotate90(), -1.0 * s[1]}; };
  State y{SpaceVector{1.0, 0.0}, SpaceVector{0.5, 0.5}};
  double t = 0.0;
  for (auto _ : state) {
    y = integrate_step(y, rotate, t, 1e-4, method);
    t += 1e-4;
    benchmark::DoNotOptimize(y);
  }
}
BENCHMARK(BM_IntegrateStep)
    ->Arg(static_cast<int>(IntegrationMethod::ForwardEuler))
    ->Arg(static_cast<int>(IntegrationMethod::RungeKutta4));

void BM_SimulateOneSecond(benchmark::State& state) {
  const InputProfile profile{SinusoidVoltage{18.8, 5.0, 0.0}, SynchronousSpeed{0.95}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(MachineParams{}, profile, 1e-4, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * 10001);
}
BENCHMARK(BM_SimulateOneSecond)->Unit(benchmark::kMillisecond);

void BM_EstimatorStep(benchmark::State& state) {
  const std::vector<EstimatorKind> kinds{VoltageModel{}, CurrentModelSimple{}, CurrentModelFull{},
                                         StatorCurrentEstimation{}, Blended{}};
  const EstimatorKind& kind = kinds.at(static_cast<std::size_t>(state.range(0)));
  state.SetLabel(std::string(kind_name(kind)));
  const Trace truth =
      simulate(MachineParams{}, InputProfile{SinusoidVoltage{18.8, 5.0, 0.0}, SynchronousSpeed{}}, 1e-4, 0.2);
  Estimator est = estimator_init(kind, EstimatorParams::from_machine(MachineParams{}), 1e-4);
  std::size_t k = 0;
  double t_shift = 0.0;
  for (auto _ : state) {
    const auto& r = truth.records[k];
    benchmark::DoNotOptimize(estimator_step(est, Measurement{r.t + t_shift, r.u_s, r.i_s, r.omega}));
    if (++k == truth.records.size()) {
      k = 0;
      t_shift += truth.records.back().t + truth.dt;
    }
  }
}
BENCHMARK(BM_EstimatorStep)->DenseRange(0, 4);

void BM_RunScenario(benchmark::State& state) {
  const Scenario s = *find_canned_scenario("blend5");
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(s, 1));
  }
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
