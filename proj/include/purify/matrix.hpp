#pragma once
#include <array>
#include <cstddef>
#include <type_traits>

#include "purify/complex.hpp"
#include "purify/kernels.hpp"

namespace purify {

// Dense square complex matrix over real scalar T (double or Dual), row-major.
// Dimensions in play: 2 (single-qubit gates), 4 (two-qubit states/gates),
// 16 (two-pair states/gates). The template is generic so tests may use other
// small sizes, but only 4 and 16 have vectorized product paths.
template <class T, int N>
struct Mat {
  std::array<Cx<T>, static_cast<std::size_t>(N) * N> a{};

  Cx<T>& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * N + c]; }
  const Cx<T>& operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r) * N + c];
  }

  static Mat zero() { return {}; }
  static Mat identity() {
    Mat m;
    for (int i = 0; i < N; ++i) m(i, i) = Cx<T>{T(1)};
    return m;
  }
};

using Mat2 = Mat<double, 2>;
using Mat4 = Mat<double, 4>;
using Mat16 = Mat<double, 16>;

// Contract-facing alias: complex dense matrix of a fixed small dimension.
template <int N>
using CMatrix = Mat<double, N>;

template <class T, int N>
Mat<T, N> operator+(const Mat<T, N>& x, const Mat<T, N>& y) {
  Mat<T, N> r;
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

template <class T, int N>
Mat<T, N> operator-(const Mat<T, N>& x, const Mat<T, N>& y) {
  Mat<T, N> r;
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

template <class T, int N>
Mat<T, N> scale(const Mat<T, N>& x, const Cx<T>& s) {
  Mat<T, N> r;
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] * s;
  return r;
}

template <class T, int N>
Mat<T, N> mul_naive(const Mat<T, N>& x, const Mat<T, N>& y) {
  Mat<T, N> r;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      const Cx<T> xv = x(i, k);
      for (int j = 0; j < N; ++j) r(i, j) += xv * y(k, j);
    }
  return r;
}

template <class T, int N>
Mat<T, N> operator*(const Mat<T, N>& x, const Mat<T, N>& y) {
  if constexpr (std::is_same_v<T, double> && N == 4) {
    Mat<T, N> r;
    kernels::active().mul4(x.a.data(), y.a.data(), r.a.data());
    return r;
  } else if constexpr (std::is_same_v<T, double> && N == 16) {
    Mat<T, N> r;
    kernels::active().mul16(x.a.data(), y.a.data(), r.a.data());
    return r;
  } else {
    return mul_naive(x, y);
  }
}

template <class T, int N>
Mat<T, N> dagger(const Mat<T, N>& x) {
  Mat<T, N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = conj(x(j, i));
  return r;
}

template <class T, int N>
Mat<T, N> conjugate(const Mat<T, N>& x) {
  Mat<T, N> r;
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = conj(x.a[i]);
  return r;
}

template <class T, int N>
Mat<T, N> transpose(const Mat<T, N>& x) {
  Mat<T, N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = x(j, i);
  return r;
}

template <class T, int N>
Cx<T> trace(const Mat<T, N>& x) {
  Cx<T> t{};
  for (int i = 0; i < N; ++i) t += x(i, i);
  return t;
}

template <class T, int N1, int N2>
Mat<T, N1 * N2> kron(const Mat<T, N1>& x, const Mat<T, N2>& y) {
  Mat<T, N1 * N2> r;
  for (int i = 0; i < N1; ++i)
    for (int j = 0; j < N1; ++j) {
      const Cx<T> xv = x(i, j);
      for (int k = 0; k < N2; ++k)
        for (int l = 0; l < N2; ++l) r(i * N2 + k, j * N2 + l) = xv * y(k, l);
    }
  return r;
}

template <int N>
double max_abs(const Mat<double, N>& x) {
  double m = 0.0;
  for (const auto& z : x.a) {
    double v = abs_c(z);
    if (v > m) m = v;
  }
  return m;
}

template <int N>
double max_abs_diff(const Mat<double, N>& x, const Mat<double, N>& y) {
  return max_abs<N>(x - y);
}

// ‖U U† − I‖_max; 0 for exactly unitary U.
template <int N>
double unitary_defect(const Mat<double, N>& u) {
  return max_abs_diff<N>(u * dagger(u), Mat<double, N>::identity());
}

template <int N>
bool all_finite(const Mat<double, N>& x) {
  for (const auto& z : x.a)
    if (!finite_c(z)) return false;
  return true;
}

}  // namespace purify
