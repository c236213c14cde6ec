#pragma once

#include <cmath>

namespace fluxsim {

/// Two-axis quantity in the stationary stator frame (x = real axis, y = imaginary axis).
/// Carries volts, amperes or webers depending on context.
struct SpaceVector {
  double x{0.0};
  double y{0.0};

  constexpr SpaceVector() = default;
  constexpr SpaceVector(double x_, double y_) : x(x_), y(y_) {}

  double magnitude() const { return std::hypot(x, y); }

  /// Multiplication by j.
  constexpr SpaceVector rotate90() const { return {-y, x}; }

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }

  constexpr SpaceVector& operator+=(const SpaceVector& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr SpaceVector& operator-=(const SpaceVector& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr SpaceVector& operator*=(double k) {
    x *= k;
    y *= k;
    return *this;
  }

  friend constexpr bool operator==(const SpaceVector&, const SpaceVector&) = default;
};

constexpr SpaceVector operator+(SpaceVector a, const SpaceVector& b) { return a += b; }
constexpr SpaceVector operator-(SpaceVector a, const SpaceVector& b) { return a -= b; }
constexpr SpaceVector operator-(const SpaceVector& a) { return {-a.x, -a.y}; }
constexpr SpaceVector operator*(double k, SpaceVector v) { return v *= k; }
constexpr SpaceVector operator*(SpaceVector v, double k) { return v *= k; }
constexpr SpaceVector operator/(const SpaceVector& v, double k) { return {v.x / k, v.y / k}; }

constexpr SpaceVector scale(double k, const SpaceVector& v) { return k * v; }

/// Linear interpolation a + s (b - a).
constexpr SpaceVector lerp(const SpaceVector& a, const SpaceVector& b, double s) {
  return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
}

}  // namespace fluxsim
