#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fluxsim/estimators.hpp"
#include "fluxsim/machine.hpp"
#include "fluxsim/measurement.hpp"
#include "fluxsim/metrics.hpp"
#include "fluxsim/profile.hpp"

namespace fluxsim {

struct Scenario {
  std::string name{"custom"};
  MachineParams machine{};
  EstimatorKind estimator{VoltageModel{}};
  EstimatorOptions estimator_options{};
  MismatchFactors mismatch{};
  InputProfile profile{};
  MeasurementFault fault{};
  IntegrationMethod plant_method{IntegrationMethod::RungeKutta4};
  double dt{1e-4};
  double t_end{5.0};
  double settle{1.0};  ///< start of the metric window [s]
  /// Plant-only run before the recorded interval; the estimator starts at zero on the
  /// settled machine. Must be zero for scenarios where an open integrator has to start
  /// with the machine at rest.
  double preroll{0.0};

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Ground-truth run of a scenario, including the plant-only pre-roll.
Trace simulate_scenario_truth(const Scenario& s);

struct ScenarioResult {
  Scenario scenario;
  Trace truth;
  std::vector<FluxEstimate> estimates;
  ErrorMetrics metrics;
};

/// simulate -> corrupt -> estimator_step for every sample, then metrics over the window.
/// Deterministic in (scenario, seed). Plant blow-up propagates as SimulationError;
/// estimator divergence is reported through metrics.diverged.
ScenarioResult run_scenario(const Scenario& s, std::uint64_t seed);

/// One experimental axis: excitation frequency, an estimator mismatch factor, or a
/// constant x-axis current offset.
struct SweepAxis {
  enum class Kind { Frequency, Mismatch, CurrentOffset };

  Kind kind{Kind::Frequency};
  std::string parameter{"freq"};  ///< "freq", "offset" or one of r_se, r_re, l_me, l_le
  std::vector<double> values;

  /// Parses "<param>=v1,v2,...". Throws std::invalid_argument naming the problem.
  static SweepAxis parse(std::string_view spec);
};

/// Returns a copy of `base` with the axis set to `value`. A frequency value replaces the
/// sinusoid frequency and keeps its amplitude; a synchronous speed profile follows it.
Scenario apply_axis(const Scenario& base, const SweepAxis& axis, double value);

struct SweepCell {
  double value{0.0};
  std::optional<ErrorMetrics> metrics;
  std::string error;  ///< failure description when metrics is empty
};

/// One run_scenario per axis value with the same seed. Cells run concurrently; the
/// result is in axis order. A failing cell records its error and the rest still run.
std::vector<SweepCell> sweep(const Scenario& base, const SweepAxis& axis, std::uint64_t seed);

/// fig2, fig3, fig5, fig8, blend5, blend50.
std::vector<Scenario> canned_scenarios();
std::optional<Scenario> find_canned_scenario(std::string_view name);

}  // namespace fluxsim
