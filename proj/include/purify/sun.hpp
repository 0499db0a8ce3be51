#pragma once
#include <array>
#include <cmath>

#include "purify/dual.hpp"
#include "purify/errors.hpp"
#include "purify/matrix.hpp"

namespace purify {

// 15 Euler angles for SU(4). Storage is zero-based: alpha[k] holds the
// (k+1)-th angle of the factorization
//   U = e^{i s3 a1} e^{i s2 a2} e^{i s3 a3} e^{i s5 a4} e^{i s3 a5}
//       e^{i s10 a6} e^{i s3 a7} e^{i s2 a8} e^{i s3 a9} e^{i s5 a10}
//       e^{i s3 a11} e^{i s2 a12} e^{i s3 a13} e^{i s8 a14} e^{i s15 a15}.
struct GateAngles {
  std::array<double, 15> alpha{};
};

// Closed search box: odd-position angles (1,3,5,7,9,11,13) in [0, pi],
// even positions (2,4,6,8,10,12) in [0, pi/2], angle 14 in [0, pi/sqrt(3)],
// angle 15 in [0, pi/sqrt(6)].
std::array<std::pair<double, double>, 15> angle_bounds();

// Throws BoundsError naming the offending component (one-based).
void check_angle_bounds(const GateAngles& a);

struct Su2Angles {
  double a1 = 0.0;  // [0, pi]
  double a2 = 0.0;  // [0, pi/2]
  double a3 = 0.0;  // [0, 2 pi]
};

// Generator basis sigma_1..sigma_15 (Hermitian, traceless, Tr si sj = 2 dij),
// plus sigma_0 = identity via gellmann(0).
Mat4 gellmann(int i);

// e^{i alpha sigma_i} in closed form for the generators used by the Euler
// product: i in {2, 3, 5, 8, 10, 15}. Plane rotations for 2/5/10, phase
// diagonals for 3/8/15.
Mat4 exp_generator(int i, double alpha);

// The ordered 15-factor Euler product; bounds are enforced.
Mat4 su4_from_angles(const GateAngles& a);

// Same product without the bounds check, generic over the scalar so the
// gradient pipeline can push dual numbers through the trigonometry. Factors
// are applied as structured row operations (each factor is a phase diagonal
// or a plane rotation), so the product costs a handful of 4-vector updates.
template <class T>
Mat<T, 4> su4_from_angles_t(const std::array<T, 15>& a) {
  using std::cos;
  using std::sin;
  Mat<T, 4> u = Mat<T, 4>::identity();

  // diag(e^{i t}, e^{-i t}, 1, 1) * u
  auto phase3 = [&u](const T& t) {
    const Cx<T> f = polar1(t);
    const Cx<T> g = conj(f);
    for (int j = 0; j < 4; ++j) {
      u(0, j) = u(0, j) * f;
      u(1, j) = u(1, j) * g;
    }
  };
  // plane rotation [[c, s], [-s, c]] in rows (0, r) times u
  auto rot = [&u](int r, const T& t) {
    const T c = cos(t);
    const T s = sin(t);
    for (int j = 0; j < 4; ++j) {
      const Cx<T> x = u(0, j);
      const Cx<T> y = u(r, j);
      u(0, j) = x * c + y * s;
      u(r, j) = y * c - x * s;
    }
  };

  // Rightmost factors first: u accumulates F15, F14 ... F1 from the left.
  {  // e^{i a15 s15} = diag(e^{i t}, e^{i t}, e^{i t}, e^{-3 i t}), t = a15/sqrt(6)
    const T t = a[14] * T(1.0 / std::sqrt(6.0));
    const Cx<T> f = polar1(t);
    const Cx<T> g = polar1(T(-3.0) * t);
    for (int j = 0; j < 3; ++j) u(j, j) = f;
    u(3, 3) = g;
  }
  {  // e^{i a14 s8} = diag(e^{i t}, e^{i t}, e^{-2 i t}, 1), t = a14/sqrt(3)
    const T t = a[13] * T(1.0 / std::sqrt(3.0));
    const Cx<T> f = polar1(t);
    const Cx<T> g = polar1(T(-2.0) * t);
    for (int j = 0; j < 4; ++j) {
      u(0, j) = u(0, j) * f;
      u(1, j) = u(1, j) * f;
      u(2, j) = u(2, j) * g;
    }
  }
  phase3(a[12]);     // a13, sigma3
  rot(1, a[11]);     // a12, sigma2: plane (1,2)
  phase3(a[10]);     // a11
  rot(2, a[9]);      // a10, sigma5: plane (1,3)
  phase3(a[8]);      // a9
  rot(1, a[7]);      // a8, sigma2
  phase3(a[6]);      // a7
  rot(3, a[5]);      // a6, sigma10: plane (1,4)
  phase3(a[4]);      // a5
  rot(2, a[3]);      // a4, sigma5
  phase3(a[2]);      // a3
  rot(1, a[1]);      // a2, sigma2
  phase3(a[0]);      // a1
  return u;
}

// Angles whose Euler product U' satisfies e^{i 3 pi / 4} U' = CNOT.
GateAngles cnot_angles();

// The CNOT matrix itself. As a one-transposition permutation it has
// determinant -1, hence the global phase relating it to its SU(4)
// representative: e^{i 3 pi/4} su4_from_angles(cnot_angles()) = cnot_gate().
Mat4 cnot_gate();

// U = e^{i sz a1} e^{i sy a2} e^{i sz a3}; determinant 1.
Mat2 su2_from_angles(const Su2Angles& a);

// b = (I2 + i sx)/sqrt(2), the local Bell-basis change of the rescue
// transformation.
Mat2 b_gate();

}  // namespace purify
