#pragma once

#include <variant>

#include "fluxsim/space_vector.hpp"

namespace fluxsim {

struct ZeroVoltage {
  friend bool operator==(const ZeroVoltage&, const ZeroVoltage&) = default;
};

/// u_s = (amplitude, 0) for t >= start, zero before.
struct StepVoltage {
  double amplitude{0.0};
  double start{0.0};

  friend bool operator==(const StepVoltage&, const StepVoltage&) = default;
};

/// Balanced rotating vector: u_s = A (cos(2 pi f t + phase), sin(2 pi f t + phase)).
struct SinusoidVoltage {
  double amplitude{0.0};
  double frequency_hz{0.0};
  double phase{0.0};

  friend bool operator==(const SinusoidVoltage&, const SinusoidVoltage&) = default;
};

using VoltageProfile = std::variant<ZeroVoltage, StepVoltage, SinusoidVoltage>;

struct ConstantSpeed {
  double omega{0.0};

  friend bool operator==(const ConstantSpeed&, const ConstantSpeed&) = default;
};

struct RampSpeed {
  double omega0{0.0};
  double slope{0.0};

  friend bool operator==(const RampSpeed&, const RampSpeed&) = default;
};

/// Rotor speed as a fraction of the synchronous speed of the voltage profile,
/// omega = ratio * 2 pi f / z_p. ratio = 1 keeps the machine unloaded.
struct SynchronousSpeed {
  double ratio{1.0};

  friend bool operator==(const SynchronousSpeed&, const SynchronousSpeed&) = default;
};

using SpeedProfile = std::variant<ConstantSpeed, RampSpeed, SynchronousSpeed>;

/// Exogenous machine inputs. Evaluation is a pure function of t.
struct InputProfile {
  VoltageProfile voltage{ZeroVoltage{}};
  SpeedProfile speed{ConstantSpeed{}};

  SpaceVector voltage_at(double t) const;

  /// Mechanical rotor speed in rad/s.
  double speed_at(double t, int pole_pairs) const;

  /// Electrical excitation frequency in Hz (0 for zero or step voltage).
  double excitation_frequency_hz() const;

  /// Throws std::invalid_argument for negative frequency or non-finite fields.
  void validate() const;

  friend bool operator==(const InputProfile&, const InputProfile&) = default;
};

}  // namespace fluxsim
