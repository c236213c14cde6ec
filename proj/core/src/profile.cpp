#include "fluxsim/profile.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fluxsim/detail/overloaded.hpp"

namespace fluxsim {

namespace {

using detail::overloaded;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("InputProfile: ") + what + " must be finite");
}

}  // namespace

SpaceVector InputProfile::voltage_at(double t) const {
  return std::visit(overloaded{
                        [](const ZeroVoltage&) { return SpaceVector{}; },
                        [t](const StepVoltage& s) {
                          return t >= s.start ? SpaceVector{s.amplitude, 0.0} : SpaceVector{};
                        },
                        [t](const SinusoidVoltage& s) {
                          const double angle = 2.0 * std::numbers::pi * s.frequency_hz * t + s.phase;
                          return SpaceVector{s.amplitude * std::cos(angle), s.amplitude * std::sin(angle)};
                        },
                    },
                    voltage);
}

double InputProfile::excitation_frequency_hz() const {
  if (const auto* s = std::get_if<SinusoidVoltage>(&voltage)) return s->frequency_hz;
  return 0.0;
}

double InputProfile::speed_at(double t, int pole_pairs) const {
  return std::visit(overloaded{
                        [](const ConstantSpeed& c) { return c.omega; },
                        [t](const RampSpeed& r) { return r.omega0 + r.slope * t; },
                        [&](const SynchronousSpeed& s) {
                          return s.ratio * 2.0 * std::numbers::pi * excitation_frequency_hz() /
                                 static_cast<double>(pole_pairs);
                        },
                    },
                    speed);
}

void InputProfile::validate() const {
  std::visit(overloaded{
                 [](const ZeroVoltage&) {},
                 [](const StepVoltage& s) {
                   require_finite(s.amplitude, "step amplitude");
                   require_finite(s.start, "step start");
                 },
                 [](const SinusoidVoltage& s) {
                   require_finite(s.amplitude, "sinusoid amplitude");
                   require_finite(s.frequency_hz, "sinusoid frequency");
                   require_finite(s.phase, "sinusoid phase");
                   if (s.frequency_hz < 0.0) throw std::invalid_argument("InputProfile: frequency must be >= 0");
                 },
             },
             voltage);
  std::visit(overloaded{
                 [](const ConstantSpeed& c) { require_finite(c.omega, "speed"); },
                 [](const RampSpeed& r) {
                   require_finite(r.omega0, "ramp initial speed");
                   require_finite(r.slope, "ramp slope");
                 },
                 [](const SynchronousSpeed& s) { require_finite(s.ratio, "synchronous ratio"); },
             },
             speed);
}

}  // namespace fluxsim
