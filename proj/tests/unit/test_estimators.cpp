#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fluxsim/estimators.hpp"
#include "fluxsim/machine.hpp"
#include "fluxsim/metrics.hpp"

using namespace fluxsim;
using Catch::Approx;

namespace {

const std::vector<EstimatorKind> kAllKinds{VoltageModel{}, CurrentModelSimple{}, CurrentModelFull{},
                                           StatorCurrentEstimation{}, Blended{10.0}};

Measurement meas(double t, SpaceVector u, SpaceVector i, double omega = 0.0) { return Measurement{t, u, i, omega}; }

std::vector<FluxEstimate> run_on(const Trace& trace, Estimator est) {
  std::vector<FluxEstimate> out;
  out.reserve(trace.records.size());
  for (const auto& r : trace.records) out.push_back(estimator_step(est, Measurement{r.t, r.u_s, r.i_s, r.omega}));
  return out;
}

/// RMS of |estimate - truth| over t >= from, relative to RMS |truth|.
template <class Get>
double relative_rms(const Trace& trace, const std::vector<FluxEstimate>& est, double from, Get truth_of) {
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    if (trace.records[k].t < from) continue;
    const auto [hat, truth] = truth_of(est[k], trace.records[k]);
    err += (hat - truth).magnitude() * (hat - truth).magnitude();
    ref += truth.magnitude() * truth.magnitude();
  }
  return std::sqrt(err / ref);
}

double stator_relative_rms(const Trace& trace, const std::vector<FluxEstimate>& est, double from) {
  return relative_rms(trace, est, from,
                      [](const FluxEstimate& e, const TraceRecord& r) { return std::pair{e.psi_s_hat, r.psi_s}; });
}

InputProfile sine(double amplitude, double hz, double ratio = 1.0) {
  return InputProfile{SinusoidVoltage{amplitude, hz, 0.0}, SynchronousSpeed{ratio}};
}

/// Machine run that starts from the state reached after `preroll` seconds.
Trace settled_run(const MachineParams& p, const InputProfile& profile, double preroll, double t_end, double dt = 1e-4) {
  const Trace pre = simulate(p, profile, dt, preroll);
  const MachineState init{pre.records.back().psi_s, pre.records.back().psi_r};
  return simulate(p, profile, dt, t_end, IntegrationMethod::RungeKutta4, init, pre.records.back().t);
}

}  // namespace

TEST_CASE("estimator_init validation", "[estimators]") {
  const EstimatorParams p = EstimatorParams::from_machine(MachineParams{});
  CHECK_THROWS_AS(estimator_init(VoltageModel{}, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(estimator_init(Blended{0.0}, p, 1e-4), std::invalid_argument);
  EstimatorParams bad = p;
  bad.l_me = 0.0;
  CHECK_THROWS_AS(estimator_init(CurrentModelSimple{}, bad, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(EstimatorParams::from_machine(MachineParams{}, MismatchFactors{1.0, 1.0, -1.0, 1.0}),
                  std::invalid_argument);

  const EstimatorParams skewed = EstimatorParams::from_machine(MachineParams{}, MismatchFactors{1.05, 1.0, 0.95, 1.0});
  CHECK(skewed.r_se == Approx(0.435 * 1.05));
  CHECK(skewed.l_me == Approx(0.0693 * 0.95));
  CHECK(skewed.r_re == MachineParams{}.r_r);
}

TEST_CASE("kind names round-trip", "[estimators]") {
  for (const auto& kind : kAllKinds) {
    const auto parsed = parse_estimator_kind(kind_name(kind), 10.0);
    REQUIRE(parsed.has_value());
    CHECK(parsed->index() == kind.index());
  }
  CHECK_FALSE(parse_estimator_kind("kalman").has_value());
}

TEST_CASE("zero measurements keep every estimator at zero", "[estimators]") {
  const EstimatorParams p = EstimatorParams::from_machine(MachineParams{});
  for (const auto& kind : kAllKinds) {
    Estimator est = estimator_init(kind, p, 1e-4);
    for (int k = 0; k < 2000; ++k) {
      const FluxEstimate e = estimator_step(est, meas(k * 1e-4, {}, {}, 50.0));
      REQUIRE(e.psi_s_hat == SpaceVector{});
      if (e.psi_r_hat) REQUIRE(*e.psi_r_hat == SpaceVector{});
    }
  }
}

TEST_CASE("estimators are deterministic", "[estimators]") {
  const EstimatorParams p = EstimatorParams::from_machine(MachineParams{}, MismatchFactors{1.05, 0.9, 1.1, 1.2});
  const Trace trace = simulate(MachineParams{}, sine(18.8, 5.0, 0.9), 1e-4, 0.3);
  for (const auto& kind : kAllKinds) {
    const auto a = run_on(trace, estimator_init(kind, p, 1e-4));
    const auto b = run_on(trace, estimator_init(kind, p, 1e-4));
    for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(a[k].psi_s_hat == b[k].psi_s_hat);
  }
}

TEST_CASE("dispatch matches the concrete estimator", "[estimators]") {
  const EstimatorParams p = EstimatorParams::from_machine(MachineParams{}, MismatchFactors{1.05, 1.0, 1.0, 1.0});
  const Trace trace = simulate(MachineParams{}, sine(18.8, 5.0), 1e-4, 0.2);
  Estimator dispatched = estimator_init(VoltageModel{}, p, 1e-4);
  VoltageModelEstimator direct(p, 1e-4);
  for (const auto& r : trace.records) {
    const Measurement m{r.t, r.u_s, r.i_s, r.omega};
    REQUIRE(estimator_step(dispatched, m).psi_s_hat == direct.step(m).psi_s_hat);
  }
}

TEST_CASE("voltage model", "[estimators][voltage_model]") {
  EstimatorParams p = EstimatorParams::from_machine(MachineParams{});

  SECTION("one step of the integral") {
    p.r_se = 1.0;
    for (const auto method : {IntegrationMethod::ForwardEuler, IntegrationMethod::RungeKutta4}) {
      VoltageModelEstimator vm(p, 1e-3, EstimatorOptions{method, std::nullopt});
      const Measurement m = meas(0.0, {100.0, 0.0}, {10.0, 0.0});
      // The first sample only opens the interval.
      CHECK(vm.step(m).psi_s_hat == SpaceVector{});
      Measurement next = m;
      next.t = 1e-3;
      const FluxEstimate e = vm.step(next);
      CHECK(e.psi_s_hat.x == Approx(0.09).epsilon(1e-14));
      CHECK(e.psi_s_hat.y == 0.0);
      CHECK_FALSE(e.psi_r_hat.has_value());
    }
  }

  SECTION("clamp saturates each axis") {
    p.r_se = 1.0;
    VoltageModelEstimator vm(p, 1e-3, EstimatorOptions{IntegrationMethod::ForwardEuler, 0.05});
    FluxEstimate e;
    for (int k = 0; k < 10; ++k) e = vm.step(meas(k * 1e-3, {100.0, -100.0}, {}));
    CHECK(e.psi_s_hat == SpaceVector{0.05, -0.05});
  }

  SECTION("exact parameters track the machine") {
    const MachineParams mp;
    const Trace trace = simulate(mp, sine(18.8, 5.0, 0.8), 1e-4, 2.0);
    const auto est = run_on(trace, estimator_init(VoltageModel{}, EstimatorParams::from_machine(mp), 1e-4));
    CHECK(stator_relative_rms(trace, est, 0.0) < 1e-5);
  }

  SECTION("5% resistance error drifts at (r_se - r_s) i_ss under a DC step") {
    const MachineParams mp;
    const double u = 10.0;
    const Trace trace = simulate(mp, InputProfile{StepVoltage{u, 0.0}, ConstantSpeed{0.0}}, 1e-4, 6.0);
    const auto est = run_on(
        trace, estimator_init(VoltageModel{}, EstimatorParams::from_machine(mp, {1.05, 1.0, 1.0, 1.0}), 1e-4));
    const double expected = std::abs((mp.r_s - 1.05 * mp.r_s) * (u / mp.r_s));
    // Two-point slope of |error| between t = 3 s and t = 6 s.
    const auto err_at = [&](std::size_t k) { return (est[k].psi_s_hat - trace.records[k].psi_s).magnitude(); };
    const std::size_t a = 30000;
    const std::size_t b = trace.records.size() - 1;
    const double slope = (err_at(b) - err_at(a)) / (trace.records[b].t - trace.records[a].t);
    CHECK(slope == Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("current model, simple", "[estimators][current_model_simple]") {
  EstimatorParams p = EstimatorParams::from_machine(MachineParams{});
  p.l_me = 0.1;
  const CurrentModelSimpleEstimator cms(p);
  CHECK(cms.step(meas(0.0, {}, {10.0, 0.0})).psi_s_hat == SpaceVector{1.0, 0.0});
  CHECK(cms.step(meas(0.0, {5.0, 5.0}, {})).psi_s_hat == SpaceVector{});

  SECTION("5% inductance error is a 5% flux error on an unloaded machine") {
    const MachineParams mp;
    const Trace trace = settled_run(mp, sine(18.8, 5.0), 10.0, 1.0);
    const auto est =
        run_on(trace, estimator_init(CurrentModelSimple{}, EstimatorParams::from_machine(mp, {1.0, 1.0, 1.05, 1.0}), 1e-4));
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
      const double rel = (est[k].psi_s_hat - trace.records[k].psi_s).magnitude() / trace.records[k].psi_s.magnitude();
      REQUIRE(rel == Approx(0.05).margin(1e-10));
    }
  }
}

TEST_CASE("current model, full", "[estimators][current_model_full]") {
  const MachineParams mp;
  const EstimatorParams p = EstimatorParams::from_machine(mp);
  const double dt = 1e-4;

  SECTION("rotor flux decays with time constant (l_le + l_me) / r_re") {
    CurrentModelFullEstimator cmf(p, dt);
    cmf.set_rotor_flux({1.0, 0.0});
    const double tau = (p.l_le + p.l_me) / p.r_re;
    const int n = static_cast<int>(std::lround(tau / dt));
    FluxEstimate e = cmf.step(meas(0.0, {}, {}));
    for (int k = 1; k <= n; ++k) e = cmf.step(meas(k * dt, {}, {}));
    REQUIRE(e.psi_r_hat.has_value());
    CHECK(e.psi_r_hat->x == Approx(std::exp(-n * dt / tau)).epsilon(1e-9));
    CHECK(e.psi_r_hat->y == Approx(0.0).margin(1e-12));
  }

  SECTION("constant current at standstill settles to l_me i_s") {
    CurrentModelFullEstimator cmf(p, dt);
    const SpaceVector i{4.0, -1.0};
    FluxEstimate e;
    for (int k = 0; k < 30000; ++k) e = cmf.step(meas(k * dt, {}, i));
    CHECK((*e.psi_r_hat - p.l_me * i).magnitude() < 1e-9);
    CHECK((e.psi_s_hat - p.l_me * i).magnitude() < 1e-9);
  }

  SECTION("exact parameters track both fluxes on a loaded machine") {
    const Trace trace = simulate(mp, sine(18.8, 5.0, 0.95), dt, 5.0);
    bool loaded = false;
    for (const auto& r : trace.records) loaded = loaded || (r.t > 1.0 && r.i_r.magnitude() > 1.0);
    REQUIRE(loaded);
    const auto est = run_on(trace, estimator_init(CurrentModelFull{}, p, dt));
    CHECK(stator_relative_rms(trace, est, 1.0) < 1e-3);
    CHECK(relative_rms(trace, est, 1.0, [](const FluxEstimate& e, const TraceRecord& r) {
            return std::pair{*e.psi_r_hat, r.psi_r};
          }) < 1e-3);
  }
}

TEST_CASE("stator current estimation", "[estimators][stator_current_estimation]") {
  const EstimatorParams p = EstimatorParams::from_machine(MachineParams{});
  const double dt = 1e-4;

  SECTION("DC voltage settles at U l_me / r_se") {
    StatorCurrentEstimator sce(p, dt);
    FluxEstimate e;
    for (int k = 0; k < 50000; ++k) e = sce.step(meas(k * dt, {3.0, 0.0}, {}));
    CHECK(e.psi_s_hat.x == Approx(3.0 * p.l_me / p.r_se).epsilon(1e-9));
    REQUIRE(e.i_s_hat.has_value());
    CHECK(e.i_s_hat->x == Approx(e.psi_s_hat.x / p.l_me));
  }

  SECTION("free decay with time constant l_me / r_se") {
    StatorCurrentEstimator sce(p, dt);
    sce.set_stator_flux({1.0, 0.0});
    const double tau = p.l_me / p.r_se;
    const int n = static_cast<int>(std::lround(tau / dt));
    FluxEstimate e = sce.step(meas(0.0, {}, {}));
    for (int k = 1; k <= n; ++k) e = sce.step(meas(k * dt, {}, {}));
    CHECK(e.psi_s_hat.x == Approx(std::exp(-n * dt / tau)).epsilon(1e-9));
  }

  SECTION("measured current is ignored") {
    StatorCurrentEstimator a(p, dt);
    StatorCurrentEstimator b(p, dt);
    for (int k = 0; k < 100; ++k) {
      REQUIRE(a.step(meas(k * dt, {10.0, 1.0}, {})).psi_s_hat ==
              b.step(meas(k * dt, {10.0, 1.0}, {100.0, -7.0})).psi_s_hat);
    }
  }

  SECTION("5% resistance error: bounded with a steady offset") {
    const MachineParams mp;
    const Trace trace = simulate(mp, sine(18.8, 5.0), dt, 10.0);
    const auto est = run_on(
        trace, estimator_init(StatorCurrentEstimation{}, EstimatorParams::from_machine(mp, {1.05, 1.0, 1.0, 1.0}), dt));
    const ErrorMetrics early = compute_metrics(trace, est, 2.0);
    const ErrorMetrics late = compute_metrics(trace, est, 6.0);
    CHECK_FALSE(early.diverged);
    CHECK(late.final_offset > 0.0);
    CHECK(late.final_offset == Approx(early.final_offset).epsilon(1e-3));
    CHECK(std::abs(late.drift_slope) < 1e-4);
  }
}

TEST_CASE("stator current estimation stays inside |u|max l_me / r_se", "[estimators][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> r_dist(0.1, 2.0);
  std::uniform_real_distribution<double> l_dist(0.01, 0.5);
  std::uniform_real_distribution<double> u_dist(0.0, 200.0);
  std::uniform_real_distribution<double> f_dist(0.0, 60.0);
  const double dt = 1e-3;
  for (int trial = 0; trial < 20; ++trial) {
    EstimatorParams p{r_dist(rng), 1.0, l_dist(rng), 0.01, 2};
    const double amplitude = u_dist(rng);
    const double hz = f_dist(rng);
    StatorCurrentEstimator sce(p, dt);
    double sup = 0.0;
    for (int k = 0; k <= 20000; ++k) {
      const double t = k * dt;
      const double angle = 2.0 * std::numbers::pi * hz * t;
      const SpaceVector u{amplitude * std::cos(angle), amplitude * std::sin(angle)};
      sup = std::max(sup, sce.step(meas(t, u, {})).psi_s_hat.magnitude());
    }
    REQUIRE(sup <= amplitude * p.l_me / p.r_se * 1.01);
  }
}

TEST_CASE("blended estimator", "[estimators][blended]") {
  const MachineParams mp;
  const EstimatorParams exact = EstimatorParams::from_machine(mp);
  const double dt = 1e-4;

  SECTION("init zeroes both filters") {
    const BlendedEstimator b(exact, dt, 10.0);
    CHECK(b.lowpass().prev_output() == SpaceVector{});
    CHECK(b.highpass().prev_input() == SpaceVector{});
    CHECK(b.lowpass().cutoff_rad_s() == 10.0);
  }

  SECTION("exact parameters reproduce the machine flux") {
    const Trace trace = simulate(mp, sine(18.8, 5.0), dt, 3.0);
    const auto est = run_on(trace, estimator_init(Blended{}, exact, dt));
    CHECK(stator_relative_rms(trace, est, 1.0) < 1e-3);
  }

  SECTION("a very high crossover follows the full current model") {
    const EstimatorParams skewed = EstimatorParams::from_machine(mp, {1.05, 1.05, 1.05, 1.05});
    const Trace trace = simulate(mp, sine(18.8, 5.0), dt, 1.0);
    const auto blend = run_on(trace, estimator_init(Blended{1e6}, skewed, dt));
    const auto cmf = run_on(trace, estimator_init(CurrentModelFull{}, skewed, dt));
    for (std::size_t k = 1000; k < trace.records.size(); ++k) {
      REQUIRE((blend[k].psi_s_hat - cmf[k].psi_s_hat).magnitude() < 1e-3 * cmf[k].psi_s_hat.magnitude());
    }
  }
}
