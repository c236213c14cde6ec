#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fluxsim/integrate.hpp"
#include "fluxsim/profile.hpp"
#include "fluxsim/space_vector.hpp"

namespace fluxsim {

/// Induction machine parameters with all leakage lumped on the rotor side:
///   Psi_s = L_m (i_s + i_r),   Psi_r = Psi_s + L_l i_r.
struct MachineParams {
  double r_s{0.435};   ///< stator resistance [ohm]
  double r_r{0.816};   ///< rotor resistance [ohm]
  double l_m{0.0693};  ///< magnetization inductance [H]
  double l_l{0.004};   ///< leakage inductance [H]
  int z_p{2};          ///< pole pairs

  /// Throws std::invalid_argument naming the first invalid field.
  void validate() const;

  friend bool operator==(const MachineParams&, const MachineParams&) = default;
};

struct MachineState {
  SpaceVector psi_s{};  ///< stator flux [Wb]
  SpaceVector psi_r{};  ///< rotor flux [Wb]

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

struct Currents {
  SpaceVector i_s{};
  SpaceVector i_r{};
};

/// Inverts the two flux relations: i_r = (Psi_r - Psi_s) / L_l, i_s = Psi_s / L_m - i_r.
Currents currents_from_fluxes(const MachineState& state, const MachineParams& p);

/// dPsi_s/dt = u_s - R_s i_s,   dPsi_r/dt = j z_p omega Psi_r - R_r i_r.
MachineState machine_derivatives(const MachineState& state, const SpaceVector& u_s, double omega,
                                 const MachineParams& p);

/// True machine signals at one sample instant.
struct TraceRecord {
  double t{0.0};
  SpaceVector u_s{};
  SpaceVector i_s{};
  SpaceVector i_r{};
  double omega{0.0};
  SpaceVector psi_s{};
  SpaceVector psi_r{};
};

struct Trace {
  double dt{0.0};
  MachineParams params{};
  std::vector<TraceRecord> records;
};

/// Numerical blow-up of the plant integration.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::size_t step, double dt, IntegrationMethod method, const std::string& detail);

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Number of samples of a run over [0, t_end] at spacing dt: floor(t_end / dt) + 1.
std::size_t sample_count(double dt, double t_end);

/// Integrates the machine from `initial` over [0, t_end] with fixed step dt.
///
/// Record k is at t = k dt; record 0 holds the initial state. `profile_time_offset`
/// shifts the instant at which the input profile is evaluated, so a run can resume a
/// profile after a pre-roll while its own time axis still starts at zero.
///
/// Throws std::invalid_argument for dt <= 0 or t_end < dt, and SimulationError when
/// the state becomes non-finite.
Trace simulate(const MachineParams& p, const InputProfile& profile, double dt, double t_end,
               IntegrationMethod method = IntegrationMethod::RungeKutta4, const MachineState& initial = {},
               double profile_time_offset = 0.0);

}  // namespace fluxsim
