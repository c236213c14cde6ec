#include "fluxsim/measurement.hpp"

#include <cmath>
#include <stdexcept>

namespace fluxsim {

namespace {

SpaceVector noise(double std_dev, Rng& rng) {
  if (std_dev == 0.0) return {};
  std::normal_distribution<double> dist(0.0, std_dev);
  const double x = dist(rng);
  const double y = dist(rng);
  return {x, y};
}

}  // namespace

void MeasurementFault::validate() const {
  if (!(current_noise_std >= 0.0) || !std::isfinite(current_noise_std) || !(voltage_noise_std >= 0.0) ||
      !std::isfinite(voltage_noise_std)) {
    throw std::invalid_argument("MeasurementFault: noise standard deviations must be finite and >= 0");
  }
  if (!current_offset.is_finite() || !voltage_offset.is_finite()) {
    throw std::invalid_argument("MeasurementFault: offsets must be finite");
  }
}

Measurement corrupt(const TraceRecord& record, const MeasurementFault& fault, Rng& rng) {
  Measurement m{record.t, record.u_s, record.i_s, record.omega};
  m.u_s += fault.voltage_offset + noise(fault.voltage_noise_std, rng);
  m.i_s += fault.current_offset + noise(fault.current_noise_std, rng);
  return m;
}

}  // namespace fluxsim
