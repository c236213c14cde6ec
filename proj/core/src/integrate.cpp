#include "fluxsim/integrate.hpp"

#include <cmath>

namespace fluxsim {

namespace {

State axpy(const State& base, double k, const State& d) {
  State out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + k * d[i];
  return out;
}

State evaluate(const Derivative& deriv, double t, const State& state) {
  State d = deriv(t, state);
  if (d.size() != state.size()) {
    throw std::invalid_argument("integrate_step: derivative size " + std::to_string(d.size()) +
                                " does not match state size " + std::to_string(state.size()));
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d[i].is_finite()) throw NonFiniteError(i, t);
  }
  return d;
}

}  // namespace

std::string_view to_string(IntegrationMethod method) {
  switch (method) {
    case IntegrationMethod::ForwardEuler:
      return "euler";
    case IntegrationMethod::RungeKutta4:
      return "rk4";
  }
  return "unknown";
}

std::optional<IntegrationMethod> parse_integration_method(std::string_view text) {
  if (text == "euler" || text == "forward_euler") return IntegrationMethod::ForwardEuler;
  if (text == "rk4" || text == "runge_kutta4") return IntegrationMethod::RungeKutta4;
  return std::nullopt;
}

NonFiniteError::NonFiniteError(std::size_t index, double t)
    : std::runtime_error("non-finite derivative in state component " + std::to_string(index) +
                         " at t=" + std::to_string(t)),
      index_(index),
      time_(t) {}

State integrate_step(const State& state, const Derivative& deriv, double t, double dt,
                     IntegrationMethod method) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("integrate_step: dt must be positive and finite");
  }

  switch (method) {
    case IntegrationMethod::ForwardEuler:
      return axpy(state, dt, evaluate(deriv, t, state));

    case IntegrationMethod::RungeKutta4: {
      const double half = 0.5 * dt;
      const State k1 = evaluate(deriv, t, state);
      const State k2 = evaluate(deriv, t + half, axpy(state, half, k1));
      const State k3 = evaluate(deriv, t + half, axpy(state, half, k2));
      const State k4 = evaluate(deriv, t + dt, axpy(state, dt, k3));
      State out(state.size());
      for (std::size_t i = 0; i < state.size(); ++i) {
        out[i] = state[i] + (dt / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
      }
      return out;
    }
  }
  throw std::invalid_argument("integrate_step: unknown integration method");
}

}  // namespace fluxsim
