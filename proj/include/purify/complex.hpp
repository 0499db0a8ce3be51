#pragma once
#include <cmath>

#include "purify/dual.hpp"

namespace purify {

// Complex number over a generic real scalar. std::complex<T> is only
// specified for the builtin floating types and we also instantiate the whole
// pipeline with Dual, so we carry our own. For T = double the layout is two
// adjacent doubles; the vectorized kernels rely on that interleaving.
template <class T>
struct Cx {
  T re{};
  T im{};

  constexpr Cx() = default;
  constexpr Cx(T r) : re(r) {}
  constexpr Cx(T r, T i) : re(r), im(i) {}
};

template <class T>
constexpr Cx<T> operator+(const Cx<T>& a, const Cx<T>& b) {
  return {a.re + b.re, a.im + b.im};
}
template <class T>
constexpr Cx<T> operator-(const Cx<T>& a, const Cx<T>& b) {
  return {a.re - b.re, a.im - b.im};
}
template <class T>
constexpr Cx<T> operator-(const Cx<T>& a) {
  return {-a.re, -a.im};
}
template <class T>
constexpr Cx<T> operator*(const Cx<T>& a, const Cx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
constexpr Cx<T> operator*(const Cx<T>& a, const T& s) {
  return {a.re * s, a.im * s};
}
template <class T>
constexpr Cx<T> operator*(const T& s, const Cx<T>& a) {
  return {a.re * s, a.im * s};
}
template <class T>
constexpr Cx<T>& operator+=(Cx<T>& a, const Cx<T>& b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}
template <class T>
constexpr Cx<T>& operator-=(Cx<T>& a, const Cx<T>& b) {
  a.re -= b.re;
  a.im -= b.im;
  return a;
}

template <class T>
constexpr Cx<T> conj(const Cx<T>& a) {
  return {a.re, -a.im};
}
template <class T>
constexpr T norm_sq(const Cx<T>& a) {
  return a.re * a.re + a.im * a.im;
}

inline double abs_c(const Cx<double>& a) { return std::hypot(a.re, a.im); }

// e^{i t} as a complex number; works for double and Dual through ADL.
template <class T>
Cx<T> polar1(const T& t) {
  using std::cos;
  using std::sin;
  return {cos(t), sin(t)};
}

using C64 = Cx<double>;

inline Cx<double> to_cx(double re, double im = 0.0) { return {re, im}; }

// Widen a double-complex to a T-complex with zero derivative part.
template <class T>
Cx<T> widen(const Cx<double>& z) {
  return {T(z.re), T(z.im)};
}

inline bool finite_c(const Cx<double>& z) {
  return std::isfinite(z.re) && std::isfinite(z.im);
}

}  // namespace purify
