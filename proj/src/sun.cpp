#include "purify/sun.hpp"

#include <cmath>
#include <sstream>

namespace purify {

namespace {
const double kPi = std::acos(-1.0);
}

std::array<std::pair<double, double>, 15> angle_bounds() {
  std::array<std::pair<double, double>, 15> b;
  for (int k = 0; k < 13; ++k) b[k] = {0.0, (k % 2 == 0) ? kPi : kPi / 2.0};
  b[13] = {0.0, kPi / std::sqrt(3.0)};
  b[14] = {0.0, kPi / std::sqrt(6.0)};
  return b;
}

void check_angle_bounds(const GateAngles& a) {
  const auto b = angle_bounds();
  for (int k = 0; k < 15; ++k) {
    const double v = a.alpha[k];
    if (!(v >= b[k].first && v <= b[k].second) || !std::isfinite(v)) {
      std::ostringstream s;
      s << "angle alpha_" << (k + 1) << " = " << v << " outside [" << b[k].first << ", "
        << b[k].second << "]";
      throw BoundsError(s.str());
    }
  }
}

Mat4 gellmann(int i) {
  if (i < 0 || i > 15) throw ConfigError("generator index out of range 0..15");
  Mat4 m;
  auto pair_re = [&m](int r, int c) {
    m(r, c) = C64{1.0};
    m(c, r) = C64{1.0};
  };
  auto pair_im = [&m](int r, int c) {
    m(r, c) = C64{0.0, -1.0};
    m(c, r) = C64{0.0, 1.0};
  };
  switch (i) {
    case 0:
      return Mat4::identity();
    case 1:
      pair_re(0, 1);
      break;
    case 2:
      pair_im(0, 1);
      break;
    case 3:
      m(0, 0) = C64{1.0};
      m(1, 1) = C64{-1.0};
      break;
    case 4:
      pair_re(0, 2);
      break;
    case 5:
      pair_im(0, 2);
      break;
    case 6:
      pair_re(1, 2);
      break;
    case 7:
      pair_im(1, 2);
      break;
    case 8: {
      const double w = 1.0 / std::sqrt(3.0);
      m(0, 0) = C64{w};
      m(1, 1) = C64{w};
      m(2, 2) = C64{-2.0 * w};
      break;
    }
    case 9:
      pair_re(0, 3);
      break;
    case 10:
      pair_im(0, 3);
      break;
    case 11:
      pair_re(1, 3);
      break;
    case 12:
      pair_im(1, 3);
      break;
    case 13:
      pair_re(2, 3);
      break;
    case 14:
      pair_im(2, 3);
      break;
    case 15: {
      const double w = 1.0 / std::sqrt(6.0);
      m(0, 0) = C64{w};
      m(1, 1) = C64{w};
      m(2, 2) = C64{w};
      m(3, 3) = C64{-3.0 * w};
      break;
    }
  }
  return m;
}

Mat4 exp_generator(int i, double alpha) {
  Mat4 m = Mat4::identity();
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  auto rotation = [&m, c, s](int r) {
    m(0, 0) = C64{c};
    m(0, r) = C64{s};
    m(r, 0) = C64{-s};
    m(r, r) = C64{c};
  };
  switch (i) {
    case 2:
      rotation(1);
      break;
    case 3:
      m(0, 0) = C64{c, s};
      m(1, 1) = C64{c, -s};
      break;
    case 5:
      rotation(2);
      break;
    case 8: {
      const double t = alpha / std::sqrt(3.0);
      m(0, 0) = m(1, 1) = C64{std::cos(t), std::sin(t)};
      m(2, 2) = C64{std::cos(2.0 * t), -std::sin(2.0 * t)};
      break;
    }
    case 10:
      rotation(3);
      break;
    case 15: {
      const double t = alpha / std::sqrt(6.0);
      m(0, 0) = m(1, 1) = m(2, 2) = C64{std::cos(t), std::sin(t)};
      m(3, 3) = C64{std::cos(3.0 * t), -std::sin(3.0 * t)};
      break;
    }
    default:
      throw ConfigError("exp_generator supports generators {2, 3, 5, 8, 10, 15} only");
  }
  return m;
}

Mat4 su4_from_angles(const GateAngles& a) {
  check_angle_bounds(a);
  std::array<double, 15> v = a.alpha;
  return su4_from_angles_t<double>(v);
}

GateAngles cnot_angles() {
  GateAngles a;
  a.alpha[2] = kPi / 4.0;   // alpha_3
  a.alpha[4] = kPi / 4.0;   // alpha_5
  a.alpha[6] = kPi / 4.0;   // alpha_7
  a.alpha[3] = kPi / 2.0;   // alpha_4
  a.alpha[5] = kPi / 2.0;   // alpha_6
  a.alpha[9] = kPi / 2.0;   // alpha_10
  return a;
}

Mat4 cnot_gate() {
  Mat4 m;
  m(0, 0) = C64{1.0};
  m(1, 1) = C64{1.0};
  m(2, 3) = C64{1.0};
  m(3, 2) = C64{1.0};
  return m;
}

Mat2 su2_from_angles(const Su2Angles& a) {
  if (!(a.a1 >= 0.0 && a.a1 <= kPi))
    throw BoundsError("su2 angle a1 outside [0, pi]");
  if (!(a.a2 >= 0.0 && a.a2 <= kPi / 2.0))
    throw BoundsError("su2 angle a2 outside [0, pi/2]");
  if (!(a.a3 >= 0.0 && a.a3 <= 2.0 * kPi))
    throw BoundsError("su2 angle a3 outside [0, 2 pi]");

  const C64 f1{std::cos(a.a1), std::sin(a.a1)};
  const C64 f3{std::cos(a.a3), std::sin(a.a3)};
  const double c = std::cos(a.a2);
  const double s = std::sin(a.a2);
  // e^{i sz t} = diag(e^{i t}, e^{-i t}); e^{i sy t} = [[c, s], [-s, c]].
  Mat2 m;
  m(0, 0) = f1 * C64{c} * f3;
  m(0, 1) = f1 * C64{s} * conj(f3);
  m(1, 0) = conj(f1) * C64{-s} * f3;
  m(1, 1) = conj(f1) * C64{c} * conj(f3);
  return m;
}

Mat2 b_gate() {
  const double w = 1.0 / std::sqrt(2.0);
  Mat2 m;
  m(0, 0) = C64{w};
  m(0, 1) = C64{0.0, w};
  m(1, 0) = C64{0.0, w};
  m(1, 1) = C64{w};
  return m;
}

}  // namespace purify
