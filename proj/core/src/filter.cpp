#include "fluxsim/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace fluxsim {

FirstOrderFilter::FirstOrderFilter(double cutoff_rad_s) : cutoff_rad_s_(cutoff_rad_s) {
  if (!(cutoff_rad_s > 0.0) || !std::isfinite(cutoff_rad_s)) {
    throw std::invalid_argument("FirstOrderFilter: cutoff must be positive and finite");
  }
}

SpaceVector FirstOrderFilter::lowpass_step(const SpaceVector& input, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("FirstOrderFilter: dt must be positive");
  // y[k] = ((1 - c) y[k-1] + c (x[k] + x[k-1])) / (1 + c),  c = wc dt / 2
  const double c = 0.5 * cutoff_rad_s_ * dt;
  const SpaceVector out = ((1.0 - c) * prev_output_ + c * (input + prev_input_)) / (1.0 + c);
  prev_input_ = input;
  prev_output_ = out;
  return out;
}

SpaceVector FirstOrderFilter::highpass_step(const SpaceVector& input, double dt) {
  return input - lowpass_step(input, dt);
}

}  // namespace fluxsim
