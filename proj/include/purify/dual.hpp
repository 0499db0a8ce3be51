#pragma once
#include <cmath>

namespace purify {

// First-order forward-mode dual number: v + d*eps with eps^2 = 0.
// Mixed double/Dual arithmetic works through the implicit converting
// constructor; comparisons look only at the value part so sorting and
// branch selection agree with the primal computation.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}
  Dual(double value, double deriv) : v(value), d(deriv) {}
};

inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
inline Dual operator/(Dual a, Dual b) {
  double inv = 1.0 / b.v;
  return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
}
inline Dual& operator+=(Dual& a, Dual b) { return a = a + b; }
inline Dual& operator-=(Dual& a, Dual b) { return a = a - b; }
inline Dual& operator*=(Dual& a, Dual b) { return a = a * b; }

inline bool operator<(Dual a, Dual b) { return a.v < b.v; }
inline bool operator>(Dual a, Dual b) { return a.v > b.v; }
inline bool operator<=(Dual a, Dual b) { return a.v <= b.v; }
inline bool operator>=(Dual a, Dual b) { return a.v >= b.v; }

inline Dual sin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
// Caller is responsible for keeping the argument away from 0 (the derivative
// blows up there); concurrence code guards this explicitly.
inline Dual sqrt(Dual a) {
  double s = std::sqrt(a.v);
  return {s, s > 0.0 ? a.d / (2.0 * s) : 0.0};
}
inline Dual fabs(Dual a) { return a.v < 0.0 ? -a : a; }

inline double value(double x) { return x; }
inline double value(Dual x) { return x.v; }

}  // namespace purify
