#include "fluxsim/harness.hpp"

#include <charconv>
#include <cmath>
#include <future>
#include <stdexcept>

#include "fluxsim/detail/overloaded.hpp"

namespace fluxsim {

namespace {

// Phase-peak voltage of a 230 V line-to-line machine at 50 Hz, scaled V/f for 5 Hz.
constexpr double kVoltage50Hz = 188.0;
constexpr double kVoltage5Hz = 18.8;
constexpr double kStepVoltage = 10.0;

std::vector<double> parse_values(std::string_view list, std::string_view spec) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = list.find(',', pos);
    const std::string_view item = list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || end != item.data() + item.size() || !std::isfinite(v)) {
      throw std::invalid_argument("axis spec '" + std::string(spec) + "': bad value '" + std::string(item) + "'");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return values;
}

Scenario base_scenario(std::string name, EstimatorKind kind, VoltageProfile voltage) {
  Scenario s;
  s.name = std::move(name);
  s.estimator = kind;
  s.profile.voltage = voltage;
  s.profile.speed = SynchronousSpeed{1.0};
  return s;
}

}  // namespace

void Scenario::validate() const {
  machine.validate();
  mismatch.validate();
  profile.validate();
  fault.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("scenario '" + name + "': dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw std::invalid_argument("scenario '" + name + "': t_end must be >= dt");
  if (!(settle >= 0.0) || !(settle < t_end)) {
    throw std::invalid_argument("scenario '" + name + "': settle must lie in [0, t_end)");
  }
  if (!(preroll >= 0.0) || !std::isfinite(preroll)) {
    throw std::invalid_argument("scenario '" + name + "': preroll must be >= 0");
  }
  if (const auto* b = std::get_if<Blended>(&estimator); b && !(b->crossover_rad_s > 0.0)) {
    throw std::invalid_argument("scenario '" + name + "': blend crossover must be positive");
  }
}

Trace simulate_scenario_truth(const Scenario& s) {
  MachineState initial{};
  double offset = 0.0;
  if (s.preroll > 0.0) {
    const Trace settle_run = simulate(s.machine, s.profile, s.dt, s.preroll, s.plant_method);
    initial = MachineState{settle_run.records.back().psi_s, settle_run.records.back().psi_r};
    offset = settle_run.records.back().t;
  }
  return simulate(s.machine, s.profile, s.dt, s.t_end, s.plant_method, initial, offset);
}

ScenarioResult run_scenario(const Scenario& s, std::uint64_t seed) {
  s.validate();
  ScenarioResult result{s, simulate_scenario_truth(s), {}, {}};

  Rng rng(seed);
  Estimator estimator =
      estimator_init(s.estimator, EstimatorParams::from_machine(s.machine, s.mismatch), s.dt, s.estimator_options);
  result.estimates.reserve(result.truth.records.size());
  for (const TraceRecord& record : result.truth.records) {
    result.estimates.push_back(estimator_step(estimator, corrupt(record, s.fault, rng)));
  }
  result.metrics = compute_metrics(result.truth, result.estimates, s.settle);
  return result;
}

SweepAxis SweepAxis::parse(std::string_view spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("axis spec '" + std::string(spec) + "' must look like <param>=v1,v2,...");
  }
  SweepAxis axis;
  axis.parameter = std::string(spec.substr(0, eq));
  if (axis.parameter == "freq") {
    axis.kind = Kind::Frequency;
  } else if (axis.parameter == "offset") {
    axis.kind = Kind::CurrentOffset;
  } else if (axis.parameter == "r_se" || axis.parameter == "r_re" || axis.parameter == "l_me" ||
             axis.parameter == "l_le") {
    axis.kind = Kind::Mismatch;
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + axis.parameter +
                                "' (expected freq, offset, r_se, r_re, l_me or l_le)");
  }
  axis.values = parse_values(spec.substr(eq + 1), spec);
  return axis;
}

Scenario apply_axis(const Scenario& base, const SweepAxis& axis, double value) {
  Scenario s = base;
  switch (axis.kind) {
    case SweepAxis::Kind::Frequency: {
      auto* sine = std::get_if<SinusoidVoltage>(&s.profile.voltage);
      if (sine == nullptr) throw std::invalid_argument("frequency sweep needs a sinusoidal voltage profile");
      sine->frequency_hz = value;
      break;
    }
    case SweepAxis::Kind::Mismatch:
      if (axis.parameter == "r_se") s.mismatch.r_se = value;
      if (axis.parameter == "r_re") s.mismatch.r_re = value;
      if (axis.parameter == "l_me") s.mismatch.l_me = value;
      if (axis.parameter == "l_le") s.mismatch.l_le = value;
      break;
    case SweepAxis::Kind::CurrentOffset:
      s.fault.current_offset = SpaceVector{value, 0.0};
      break;
  }
  return s;
}

std::vector<SweepCell> sweep(const Scenario& base, const SweepAxis& axis, std::uint64_t seed) {
  if (axis.values.empty()) throw std::invalid_argument("sweep: empty axis");

  std::vector<std::future<SweepCell>> pending;
  pending.reserve(axis.values.size());
  for (const double value : axis.values) {
    pending.push_back(std::async(std::launch::async, [&base, &axis, value, seed] {
      SweepCell cell{value, std::nullopt, {}};
      try {
        cell.metrics = run_scenario(apply_axis(base, axis, value), seed).metrics;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      return cell;
    }));
  }

  std::vector<SweepCell> cells;
  cells.reserve(pending.size());
  for (auto& f : pending) cells.push_back(f.get());
  return cells;
}

std::vector<Scenario> canned_scenarios() {
  std::vector<Scenario> out;

  // Voltage model under a 5% stator-resistance error, DC step: linear drift.
  Scenario fig2 = base_scenario("fig2", VoltageModel{}, StepVoltage{kStepVoltage, 0.0});
  fig2.profile.speed = ConstantSpeed{0.0};
  fig2.mismatch.r_se = 1.05;
  fig2.t_end = 20.0;
  out.push_back(fig2);

  // Same mismatch at 5 Hz: bounded error.
  Scenario fig3 = base_scenario("fig3", VoltageModel{}, SinusoidVoltage{kVoltage5Hz, 5.0, 0.0});
  fig3.mismatch.r_se = 1.05;
  out.push_back(fig3);

  // Simple current model, 5% magnetizing-inductance error. The long pre-roll lets the
  // rotor current decay far below the proportional error.
  Scenario fig5 = base_scenario("fig5", CurrentModelSimple{}, SinusoidVoltage{kVoltage5Hz, 5.0, 0.0});
  fig5.mismatch.l_me = 1.05;
  fig5.preroll = 10.0;
  out.push_back(fig5);

  Scenario fig8 = base_scenario("fig8", StatorCurrentEstimation{}, SinusoidVoltage{kVoltage5Hz, 5.0, 0.0});
  fig8.mismatch.r_se = 1.05;
  fig8.preroll = 1.0;
  out.push_back(fig8);

  const MismatchFactors all_off{1.05, 1.05, 1.05, 1.05};
  Scenario blend5 = base_scenario("blend5", Blended{}, SinusoidVoltage{kVoltage5Hz, 5.0, 0.0});
  blend5.mismatch = all_off;
  out.push_back(blend5);

  Scenario blend50 = base_scenario("blend50", Blended{}, SinusoidVoltage{kVoltage50Hz, 50.0, 0.0});
  blend50.mismatch = all_off;
  out.push_back(blend50);

  return out;
}

std::optional<Scenario> find_canned_scenario(std::string_view name) {
  for (Scenario& s : canned_scenarios()) {
    if (s.name == name) return std::move(s);
  }
  return std::nullopt;
}

}  // namespace fluxsim
