#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fluxsim/space_vector.hpp"

namespace fluxsim {

enum class IntegrationMethod { ForwardEuler, RungeKutta4 };

std::string_view to_string(IntegrationMethod method);
std::optional<IntegrationMethod> parse_integration_method(std::string_view text);

using State = std::vector<SpaceVector>;

/// Right-hand side of an ODE: d(state)/dt evaluated at (t, state).
using Derivative = std::function<State(double t, const State& state)>;

/// Raised when a derivative evaluation produces NaN or infinity.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(std::size_t index, double t);

  std::size_t index() const noexcept { return index_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t index_;
  double time_;
};

/// Advances `state` from t to t + dt with a single fixed step.
///
/// ForwardEuler: state + dt f(t, state).
/// RungeKutta4: the classical four-stage rule.
///
/// Throws std::invalid_argument for dt <= 0 and NonFiniteError when any stage
/// derivative has a non-finite component.
State integrate_step(const State& state, const Derivative& deriv, double t, double dt,
                     IntegrationMethod method);

}  // namespace fluxsim
