#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "fluxsim/filter.hpp"
#include "fluxsim/integrate.hpp"
#include "fluxsim/machine.hpp"
#include "fluxsim/measurement.hpp"

namespace fluxsim {

/// Relative errors applied to the machine parameters when building estimator parameters
/// (e.g. r_se = 1.05 makes the estimator's stator resistance 5% high).
struct MismatchFactors {
  double r_se{1.0};
  double r_re{1.0};
  double l_me{1.0};
  double l_le{1.0};

  void validate() const;

  friend bool operator==(const MismatchFactors&, const MismatchFactors&) = default;
};

/// The estimator's copies of the machine parameters.
struct EstimatorParams {
  double r_se{0.0};
  double r_re{0.0};
  double l_me{0.0};
  double l_le{0.0};
  int z_p{1};

  static EstimatorParams from_machine(const MachineParams& p, const MismatchFactors& factors = {});

  void validate() const;
};

struct FluxEstimate {
  SpaceVector psi_s_hat{};
  std::optional<SpaceVector> psi_r_hat;
  std::optional<SpaceVector> i_s_hat;
};

struct VoltageModel {
  friend bool operator==(const VoltageModel&, const VoltageModel&) = default;
};
struct CurrentModelSimple {
  friend bool operator==(const CurrentModelSimple&, const CurrentModelSimple&) = default;
};
struct CurrentModelFull {
  friend bool operator==(const CurrentModelFull&, const CurrentModelFull&) = default;
};
struct StatorCurrentEstimation {
  friend bool operator==(const StatorCurrentEstimation&, const StatorCurrentEstimation&) = default;
};
struct Blended {
  double crossover_rad_s{kDefaultCrossover};

  /// 2 pi 15 rad/s, between the 5 Hz and 50 Hz operating points.
  static constexpr double kDefaultCrossover = 94.24777960769379;

  friend bool operator==(const Blended&, const Blended&) = default;
};

using EstimatorKind = std::variant<VoltageModel, CurrentModelSimple, CurrentModelFull, StatorCurrentEstimation, Blended>;

std::string_view kind_name(const EstimatorKind& kind);
std::optional<EstimatorKind> parse_estimator_kind(std::string_view name, double crossover_rad_s = Blended::kDefaultCrossover);

struct EstimatorOptions {
  /// Rule used across each sample interval. Inputs are linearly interpolated between
  /// consecutive measurements for the intermediate RK4 stages.
  IntegrationMethod method{IntegrationMethod::RungeKutta4};
  /// Symmetric per-axis saturation of the voltage-model integrator; disabled when empty.
  std::optional<double> clamp;

  friend bool operator==(const EstimatorOptions&, const EstimatorOptions&) = default;
};

namespace detail {

/// Timing shared by the integrating estimators: the first measurement is latched,
/// each later one closes the interval [t_prev, t_prev + dt].
class SampleInterval {
 public:
  bool primed() const noexcept { return previous_.has_value(); }
  const Measurement& previous() const { return *previous_; }
  void latch(const Measurement& m) { previous_ = m; }

 private:
  std::optional<Measurement> previous_;
};

}  // namespace detail

/// Open integration of the stator EMF: dPsi_s/dt = u_s - R_se i_s.
///
/// Drifts without bound under any resistance mismatch or current offset; an optional
/// clamp reproduces integrator saturation.
class VoltageModelEstimator {
 public:
  VoltageModelEstimator(const EstimatorParams& p, double dt, EstimatorOptions options = {});

  FluxEstimate step(const Measurement& m);

  const SpaceVector& flux() const noexcept { return psi_s_; }

 private:
  EstimatorParams params_;
  double dt_;
  EstimatorOptions options_;
  detail::SampleInterval interval_;
  SpaceVector psi_s_{};
};

/// Psi_s = L_me i_s. Exact only while the rotor current is zero.
class CurrentModelSimpleEstimator {
 public:
  explicit CurrentModelSimpleEstimator(const EstimatorParams& p);

  FluxEstimate step(const Measurement& m) const;

 private:
  EstimatorParams params_;
};

/// Rotor-flux model driven by stator current and speed:
///   dPsi_r/dt = i_s R_re L_me / (L_le + L_me) - Psi_r R_re / (L_le + L_me) + j z_p omega Psi_r
///   Psi_s     = (L_le i_s + Psi_r) L_me / (L_le + L_me)
class CurrentModelFullEstimator {
 public:
  CurrentModelFullEstimator(const EstimatorParams& p, double dt, EstimatorOptions options = {});

  FluxEstimate step(const Measurement& m);

  /// Overrides the rotor-flux state (used to study the homogeneous response).
  void set_rotor_flux(const SpaceVector& psi_r) { psi_r_ = psi_r; }

 private:
  EstimatorParams params_;
  double dt_;
  EstimatorOptions options_;
  detail::SampleInterval interval_;
  SpaceVector psi_r_{};
};

/// Voltage model closed on its own current estimate i_s_hat = Psi_s / L_me:
///   dPsi_s/dt = u_s - (R_se / L_me) Psi_s.
/// Uses only the measured voltage.
class StatorCurrentEstimator {
 public:
  StatorCurrentEstimator(const EstimatorParams& p, double dt, EstimatorOptions options = {});

  FluxEstimate step(const Measurement& m);

  void set_stator_flux(const SpaceVector& psi_s) { psi_s_ = psi_s; }

 private:
  EstimatorParams params_;
  double dt_;
  EstimatorOptions options_;
  detail::SampleInterval interval_;
  SpaceVector psi_s_{};
};

/// Complementary blend: low-pass of the current-model (full) flux plus high-pass of the
/// voltage-model flux, both filters at the same crossover.
class BlendedEstimator {
 public:
  BlendedEstimator(const EstimatorParams& p, double dt, double crossover_rad_s, EstimatorOptions options = {});

  FluxEstimate step(const Measurement& m);

  const FirstOrderFilter& lowpass() const noexcept { return lowpass_; }
  const FirstOrderFilter& highpass() const noexcept { return highpass_; }

 private:
  double dt_;
  VoltageModelEstimator voltage_;
  CurrentModelFullEstimator current_;
  FirstOrderFilter lowpass_;
  FirstOrderFilter highpass_;
};

using Estimator = std::variant<VoltageModelEstimator, CurrentModelSimpleEstimator, CurrentModelFullEstimator,
                               StatorCurrentEstimator, BlendedEstimator>;

/// Builds a zeroed estimator of the given kind. Throws std::invalid_argument for dt <= 0,
/// invalid parameters or a non-positive blend crossover.
Estimator estimator_init(const EstimatorKind& kind, const EstimatorParams& p, double dt,
                         EstimatorOptions options = {});

FluxEstimate estimator_step(Estimator& estimator, const Measurement& m);

}  // namespace fluxsim
