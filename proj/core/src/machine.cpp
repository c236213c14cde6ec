#include "fluxsim/machine.hpp"

#include <cmath>
#include <string>

namespace fluxsim {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("MachineParams: ") + name + " must be positive and finite");
  }
}

TraceRecord make_record(double t, const MachineState& s, const SpaceVector& u, double omega,
                        const MachineParams& p) {
  const Currents c = currents_from_fluxes(s, p);
  return TraceRecord{t, u, c.i_s, c.i_r, omega, s.psi_s, s.psi_r};
}

}  // namespace

void MachineParams::validate() const {
  require_positive(r_s, "r_s");
  require_positive(r_r, "r_r");
  require_positive(l_m, "l_m");
  require_positive(l_l, "l_l");
  if (z_p < 1) throw std::invalid_argument("MachineParams: z_p must be >= 1");
}

Currents currents_from_fluxes(const MachineState& state, const MachineParams& p) {
  const SpaceVector i_r = (state.psi_r - state.psi_s) / p.l_l;
  const SpaceVector i_s = state.psi_s / p.l_m - i_r;
  return {i_s, i_r};
}

MachineState machine_derivatives(const MachineState& state, const SpaceVector& u_s, double omega,
                                 const MachineParams& p) {
  const Currents c = currents_from_fluxes(state, p);
  const double electrical_speed = static_cast<double>(p.z_p) * omega;
  return MachineState{
      u_s - p.r_s * c.i_s,
      electrical_speed * state.psi_r.rotate90() - p.r_r * c.i_r,
  };
}

SimulationError::SimulationError(std::size_t step, double dt, IntegrationMethod method, const std::string& detail)
    : std::runtime_error("machine simulation diverged at step " + std::to_string(step) + " (dt=" +
                         std::to_string(dt) + ", method=" + std::string(to_string(method)) + "): " + detail),
      step_(step) {}

std::size_t sample_count(double dt, double t_end) {
  // The small bias keeps e.g. 5 / 1e-4 from truncating to 49999.
  return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1;
}

Trace simulate(const MachineParams& p, const InputProfile& profile, double dt, double t_end,
               IntegrationMethod method, const MachineState& initial, double profile_time_offset) {
  p.validate();
  profile.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("simulate: dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw std::invalid_argument("simulate: t_end must be >= dt");

  const std::size_t n = sample_count(dt, t_end);
  Trace trace{dt, p, {}};
  trace.records.reserve(n);

  const auto inputs = [&](double t) {
    const double tp = t + profile_time_offset;
    return std::pair{profile.voltage_at(tp), profile.speed_at(tp, p.z_p)};
  };

  const Derivative deriv = [&](double t, const State& x) {
    const auto [u, omega] = inputs(t);
    const MachineState d = machine_derivatives(MachineState{x[0], x[1]}, u, omega, p);
    return State{d.psi_s, d.psi_r};
  };

  State x{initial.psi_s, initial.psi_r};
  {
    const auto [u, omega] = inputs(0.0);
    trace.records.push_back(make_record(0.0, initial, u, omega, p));
  }

  for (std::size_t k = 1; k < n; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;
    try {
      x = integrate_step(x, deriv, t_prev, dt, method);
    } catch (const NonFiniteError& e) {
      throw SimulationError(k, dt, method, e.what());
    }
    if (!x[0].is_finite() || !x[1].is_finite()) {
      throw SimulationError(k, dt, method, "state is not finite");
    }
    const double t = static_cast<double>(k) * dt;
    const auto [u, omega] = inputs(t);
    trace.records.push_back(make_record(t, MachineState{x[0], x[1]}, u, omega, p));
  }
  return trace;
}

}  // namespace fluxsim
