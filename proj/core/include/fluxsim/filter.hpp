#pragma once

#include "fluxsim/space_vector.hpp"

namespace fluxsim {

/// First-order low-pass 1/(1 + s/wc) discretized with the bilinear (trapezoidal) rule,
/// with the high-pass defined as its complement so that lowpass + highpass = input.
///
/// The filter keeps the previous input and output; both step functions advance that
/// history by one sample.
class FirstOrderFilter {
 public:
  /// Throws std::invalid_argument unless cutoff_rad_s is positive and finite.
  explicit FirstOrderFilter(double cutoff_rad_s);

  SpaceVector lowpass_step(const SpaceVector& input, double dt);

  /// input - lowpass_step(input), sharing the same state history.
  SpaceVector highpass_step(const SpaceVector& input, double dt);

  double cutoff_rad_s() const noexcept { return cutoff_rad_s_; }
  const SpaceVector& prev_input() const noexcept { return prev_input_; }
  const SpaceVector& prev_output() const noexcept { return prev_output_; }

 private:
  double cutoff_rad_s_;
  SpaceVector prev_input_{};
  SpaceVector prev_output_{};
};

}  // namespace fluxsim
