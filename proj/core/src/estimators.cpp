#include "fluxsim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluxsim/detail/overloaded.hpp"

namespace fluxsim {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_dt(double dt) { require_positive(dt, "estimator dt"); }

Measurement interpolate(const Measurement& a, const Measurement& b, double s) {
  return Measurement{a.t + s * (b.t - a.t), lerp(a.u_s, b.u_s, s), lerp(a.i_s, b.i_s, s),
                     a.omega + s * (b.omega - a.omega)};
}

/// One integration step of dx/dt = rhs(x, m(t)) across [a.t, a.t + dt], with m(t) the
/// straight line between samples a and b.
template <class Rhs>
SpaceVector advance(const SpaceVector& x, const Measurement& a, const Measurement& b, double dt,
                    IntegrationMethod method, Rhs rhs) {
  const Derivative deriv = [&](double tau, const State& s) {
    return State{rhs(s[0], interpolate(a, b, tau / dt))};
  };
  return integrate_step(State{x}, deriv, 0.0, dt, method)[0];
}

}  // namespace

void MismatchFactors::validate() const {
  require_positive(r_se, "mismatch factor r_se");
  require_positive(r_re, "mismatch factor r_re");
  require_positive(l_me, "mismatch factor l_me");
  require_positive(l_le, "mismatch factor l_le");
}

EstimatorParams EstimatorParams::from_machine(const MachineParams& p, const MismatchFactors& f) {
  f.validate();
  return EstimatorParams{p.r_s * f.r_se, p.r_r * f.r_re, p.l_m * f.l_me, p.l_l * f.l_le, p.z_p};
}

void EstimatorParams::validate() const {
  require_positive(r_se, "EstimatorParams r_se");
  require_positive(r_re, "EstimatorParams r_re");
  require_positive(l_me, "EstimatorParams l_me");
  require_positive(l_le, "EstimatorParams l_le");
  if (z_p < 1) throw std::invalid_argument("EstimatorParams z_p must be >= 1");
}

std::string_view kind_name(const EstimatorKind& kind) {
  return std::visit(detail::overloaded{
                        [](const VoltageModel&) { return std::string_view{"voltage_model"}; },
                        [](const CurrentModelSimple&) { return std::string_view{"current_model_simple"}; },
                        [](const CurrentModelFull&) { return std::string_view{"current_model_full"}; },
                        [](const StatorCurrentEstimation&) { return std::string_view{"stator_current_estimation"}; },
                        [](const Blended&) { return std::string_view{"blended"}; },
                    },
                    kind);
}

std::optional<EstimatorKind> parse_estimator_kind(std::string_view name, double crossover_rad_s) {
  if (name == "voltage_model") return VoltageModel{};
  if (name == "current_model_simple") return CurrentModelSimple{};
  if (name == "current_model_full") return CurrentModelFull{};
  if (name == "stator_current_estimation") return StatorCurrentEstimation{};
  if (name == "blended") return Blended{crossover_rad_s};
  return std::nullopt;
}

// -- voltage model ----------------------------------------------------------

VoltageModelEstimator::VoltageModelEstimator(const EstimatorParams& p, double dt, EstimatorOptions options)
    : params_(p), dt_(dt), options_(options) {
  params_.validate();
  require_dt(dt);
  if (options_.clamp) require_positive(*options_.clamp, "voltage-model clamp level");
}

FluxEstimate VoltageModelEstimator::step(const Measurement& m) {
  if (interval_.primed()) {
    const double r_se = params_.r_se;
    psi_s_ = advance(psi_s_, interval_.previous(), m, dt_, options_.method,
                     [r_se](const SpaceVector&, const Measurement& in) { return in.u_s - r_se * in.i_s; });
    if (options_.clamp) {
      const double c = *options_.clamp;
      psi_s_ = {std::clamp(psi_s_.x, -c, c), std::clamp(psi_s_.y, -c, c)};
    }
  }
  interval_.latch(m);
  return FluxEstimate{psi_s_, std::nullopt, std::nullopt};
}

// -- current model, simple --------------------------------------------------

CurrentModelSimpleEstimator::CurrentModelSimpleEstimator(const EstimatorParams& p) : params_(p) {
  params_.validate();
}

FluxEstimate CurrentModelSimpleEstimator::step(const Measurement& m) const {
  return FluxEstimate{params_.l_me * m.i_s, std::nullopt, std::nullopt};
}

// -- current model, full ----------------------------------------------------

CurrentModelFullEstimator::CurrentModelFullEstimator(const EstimatorParams& p, double dt, EstimatorOptions options)
    : params_(p), dt_(dt), options_(options) {
  params_.validate();
  require_dt(dt);
}

FluxEstimate CurrentModelFullEstimator::step(const Measurement& m) {
  const double l_total = params_.l_le + params_.l_me;
  if (interval_.primed()) {
    const double drive = params_.r_re * params_.l_me / l_total;
    const double decay = params_.r_re / l_total;
    const double z_p = static_cast<double>(params_.z_p);
    psi_r_ = advance(psi_r_, interval_.previous(), m, dt_, options_.method,
                     [=](const SpaceVector& psi_r, const Measurement& in) {
                       return drive * in.i_s - decay * psi_r + (z_p * in.omega) * psi_r.rotate90();
                     });
  }
  interval_.latch(m);
  const SpaceVector psi_s = (params_.l_le * m.i_s + psi_r_) * (params_.l_me / l_total);
  return FluxEstimate{psi_s, psi_r_, std::nullopt};
}

// -- stator current estimation ----------------------------------------------

StatorCurrentEstimator::StatorCurrentEstimator(const EstimatorParams& p, double dt, EstimatorOptions options)
    : params_(p), dt_(dt), options_(options) {
  params_.validate();
  require_dt(dt);
}

FluxEstimate StatorCurrentEstimator::step(const Measurement& m) {
  if (interval_.primed()) {
    const double rate = params_.r_se / params_.l_me;
    psi_s_ = advance(psi_s_, interval_.previous(), m, dt_, options_.method,
                     [rate](const SpaceVector& psi_s, const Measurement& in) { return in.u_s - rate * psi_s; });
  }
  interval_.latch(m);
  return FluxEstimate{psi_s_, std::nullopt, psi_s_ / params_.l_me};
}

// -- complementary blend ----------------------------------------------------

BlendedEstimator::BlendedEstimator(const EstimatorParams& p, double dt, double crossover_rad_s,
                                   EstimatorOptions options)
    : dt_(dt),
      voltage_(p, dt, options),
      current_(p, dt, options),
      lowpass_(crossover_rad_s),
      highpass_(crossover_rad_s) {}

FluxEstimate BlendedEstimator::step(const Measurement& m) {
  const FluxEstimate from_voltage = voltage_.step(m);
  const FluxEstimate from_current = current_.step(m);
  const SpaceVector psi_s =
      lowpass_.lowpass_step(from_current.psi_s_hat, dt_) + highpass_.highpass_step(from_voltage.psi_s_hat, dt_);
  return FluxEstimate{psi_s, std::nullopt, std::nullopt};
}

// -- dispatch -----------------------------------------------------------------

Estimator estimator_init(const EstimatorKind& kind, const EstimatorParams& p, double dt, EstimatorOptions options) {
  require_dt(dt);
  p.validate();
  return std::visit(detail::overloaded{
                        [&](const VoltageModel&) -> Estimator { return VoltageModelEstimator(p, dt, options); },
                        [&](const CurrentModelSimple&) -> Estimator { return CurrentModelSimpleEstimator(p); },
                        [&](const CurrentModelFull&) -> Estimator { return CurrentModelFullEstimator(p, dt, options); },
                        [&](const StatorCurrentEstimation&) -> Estimator {
                          return StatorCurrentEstimator(p, dt, options);
                        },
                        [&](const Blended& b) -> Estimator {
                          if (!(b.crossover_rad_s > 0.0)) {
                            throw std::invalid_argument("blended estimator crossover must be positive");
                          }
                          return BlendedEstimator(p, dt, b.crossover_rad_s, options);
                        },
                    },
                    kind);
}

FluxEstimate estimator_step(Estimator& estimator, const Measurement& m) {
  return std::visit([&m](auto& e) { return e.step(m); }, estimator);
}

}  // namespace fluxsim
