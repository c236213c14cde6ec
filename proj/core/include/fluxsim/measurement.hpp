#pragma once

#include <random>

#include "fluxsim/machine.hpp"
#include "fluxsim/space_vector.hpp"

namespace fluxsim {

/// Sensor imperfections: constant offsets plus zero-mean Gaussian noise.
struct MeasurementFault {
  SpaceVector current_offset{};
  double current_noise_std{0.0};
  SpaceVector voltage_offset{};
  double voltage_noise_std{0.0};

  /// Throws std::invalid_argument for negative or non-finite noise levels.
  void validate() const;

  friend bool operator==(const MeasurementFault&, const MeasurementFault&) = default;
};

/// What an estimator is allowed to observe. Fluxes and rotor current have no
/// representation here.
struct Measurement {
  double t{0.0};
  SpaceVector u_s{};
  SpaceVector i_s{};
  double omega{0.0};
};

using Rng = std::mt19937_64;

/// Applies offsets and noise to one record. Noise draws are taken from `rng` only
/// for channels with a non-zero standard deviation (voltage x, y then current x, y).
Measurement corrupt(const TraceRecord& record, const MeasurementFault& fault, Rng& rng);

}  // namespace fluxsim
