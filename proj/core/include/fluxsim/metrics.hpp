#pragma once

#include <span>

#include "fluxsim/estimators.hpp"
#include "fluxsim/machine.hpp"

namespace fluxsim {

/// Stator-flux error statistics over the window [settle, t_end].
struct ErrorMetrics {
  double rms{0.0};           ///< RMS of |psi_s_hat - psi_s| [Wb]
  double max_abs{0.0};       ///< max |psi_s_hat - psi_s| [Wb]
  double final_offset{0.0};  ///< mean |error| over the last 10% of the window [Wb]
  double drift_slope{0.0};   ///< least-squares slope of |error| against t [Wb/s]
  bool diverged{false};      ///< |error| exceeded kDivergenceFactor x peak |psi_s|
  double relative_rms{0.0};  ///< rms / RMS |psi_s| over the window
  double peak_true{0.0};     ///< peak |psi_s| over the window [Wb]

  static constexpr double kDivergenceFactor = 10.0;
};

/// Throws std::invalid_argument when the series lengths differ or no sample lies in
/// the window.
ErrorMetrics compute_metrics(const Trace& truth, std::span<const FluxEstimate> estimates, double settle);

/// Half peak-to-peak of the x-axis stator-flux error over the window; isolates the
/// oscillating part of the error from any constant offset.
double x_error_amplitude(const Trace& truth, std::span<const FluxEstimate> estimates, double settle);

/// Ordinary least-squares slope of y against t.
double least_squares_slope(std::span<const double> t, std::span<const double> y);

}  // namespace fluxsim
