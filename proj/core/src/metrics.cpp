#include "fluxsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fluxsim {

namespace {

std::size_t window_start(const Trace& truth, std::span<const FluxEstimate> estimates, double settle) {
  if (truth.records.size() != estimates.size()) {
    throw std::invalid_argument("compute_metrics: truth has " + std::to_string(truth.records.size()) +
                                " samples but estimates have " + std::to_string(estimates.size()));
  }
  const double tolerance = 1e-9 * std::max(truth.dt, 1e-12);
  const auto it = std::find_if(truth.records.begin(), truth.records.end(),
                               [&](const TraceRecord& r) { return r.t >= settle - tolerance; });
  if (it == truth.records.end()) throw std::invalid_argument("compute_metrics: empty metric window");
  return static_cast<std::size_t>(it - truth.records.begin());
}

}  // namespace

double least_squares_slope(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size() || t.empty()) throw std::invalid_argument("least_squares_slope: bad series");
  const double n = static_cast<double>(t.size());
  double t_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    t_mean += t[i];
    y_mean += y[i];
  }
  t_mean /= n;
  y_mean /= n;
  double sty = 0.0;
  double stt = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dt = t[i] - t_mean;
    sty += dt * (y[i] - y_mean);
    stt += dt * dt;
  }
  return stt > 0.0 ? sty / stt : 0.0;
}

ErrorMetrics compute_metrics(const Trace& truth, std::span<const FluxEstimate> estimates, double settle) {
  const std::size_t first = window_start(truth, estimates, settle);
  const std::size_t count = truth.records.size() - first;

  std::vector<double> times;
  std::vector<double> errors;
  times.reserve(count);
  errors.reserve(count);

  ErrorMetrics m;
  double sum_sq = 0.0;
  double truth_sq = 0.0;
  for (std::size_t k = first; k < truth.records.size(); ++k) {
    const TraceRecord& r = truth.records[k];
    const double e = (estimates[k].psi_s_hat - r.psi_s).magnitude();
    const double mag = r.psi_s.magnitude();
    times.push_back(r.t);
    errors.push_back(e);
    sum_sq += e * e;
    truth_sq += mag * mag;
    m.max_abs = std::max(m.max_abs, std::isnan(e) ? std::numeric_limits<double>::infinity() : e);
    m.peak_true = std::max(m.peak_true, mag);
  }

  const double n = static_cast<double>(count);
  // Rounding in the mean of squares can push the RMS a few ulp past the maximum.
  m.rms = std::min(std::sqrt(sum_sq / n), m.max_abs);
  const double truth_rms = std::sqrt(truth_sq / n);
  if (truth_rms > 0.0) {
    m.relative_rms = m.rms / truth_rms;
  } else {
    m.relative_rms = m.rms > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }

  const std::size_t tail = std::max<std::size_t>(1, count / 10);
  double tail_sum = 0.0;
  for (std::size_t i = count - tail; i < count; ++i) tail_sum += errors[i];
  m.final_offset = tail_sum / static_cast<double>(tail);

  m.drift_slope = least_squares_slope(times, errors);
  m.diverged = m.max_abs > ErrorMetrics::kDivergenceFactor * m.peak_true && m.max_abs > 0.0;
  return m;
}

double x_error_amplitude(const Trace& truth, std::span<const FluxEstimate> estimates, double settle) {
  const std::size_t first = window_start(truth, estimates, settle);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = first; k < truth.records.size(); ++k) {
    const double e = estimates[k].psi_s_hat.x - truth.records[k].psi_s.x;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return 0.5 * (hi - lo);
}

}  // namespace fluxsim
