#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "purify/errors.hpp"
#include "purify/matrix.hpp"
#include "purify/sun.hpp"

using namespace purify;

namespace {

const double kPi = std::acos(-1.0);

// brute-force matrix exponential of i*alpha*g by scaled Taylor series
Mat4 expm_taylor(const Mat4& g, double alpha) {
  Mat4 x = scale(g, C64{0.0, alpha});
  int squarings = 0;
  while (max_abs<4>(x) > 0.25) {
    x = scale(x, C64{0.5});
    ++squarings;
  }
  Mat4 sum = Mat4::identity();
  Mat4 term = Mat4::identity();
  for (int k = 1; k <= 24; ++k) {
    term = term * x;
    term = scale(term, C64{1.0 / k});
    sum = sum + term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

GateAngles random_angles(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GateAngles a;
  auto bounds = angle_bounds();
  for (int i = 0; i < 15; ++i)
    a.alpha[i] = bounds[i].first + (bounds[i].second - bounds[i].first) * u(rng);
  return a;
}

}  // namespace

TEST_CASE("generator basis is hermitian traceless and orthogonal") {
  for (int i = 1; i <= 15; ++i) {
    Mat4 g = gellmann(i);
    CHECK(max_abs_diff<4>(g, dagger(g)) == 0.0);
    C64 tr = trace(g);
    CHECK(std::fabs(tr.re) < 1e-15);
    CHECK(std::fabs(tr.im) < 1e-15);
    for (int j = 1; j <= 15; ++j) {
      C64 p = trace(g * gellmann(j));
      CHECK(std::fabs(p.re - (i == j ? 2.0 : 0.0)) < 1e-14);
      CHECK(std::fabs(p.im) < 1e-14);
    }
  }
  CHECK(max_abs_diff<4>(gellmann(0), Mat4::identity()) == 0.0);
}

TEST_CASE("closed-form factor exponentials match the series") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int i : {2, 3, 5, 8, 10, 15}) {
    for (int t = 0; t < 12; ++t) {
      double alpha = u(rng);
      CHECK(max_abs_diff<4>(exp_generator(i, alpha), expm_taylor(gellmann(i), alpha)) <
            1e-12);
    }
  }
}

TEST_CASE("euler product equals the factor-by-factor exponential product") {
  std::mt19937_64 rng(103);
  const int gen_of[15] = {3, 2, 3, 5, 3, 10, 3, 2, 3, 5, 3, 2, 3, 8, 15};
  for (int t = 0; t < 30; ++t) {
    GateAngles a = random_angles(rng);
    Mat4 expect = Mat4::identity();
    for (int i = 0; i < 15; ++i) expect = expect * exp_generator(gen_of[i], a.alpha[i]);
    CHECK(max_abs_diff<4>(su4_from_angles(a), expect) < 1e-12);
  }
}

TEST_CASE("random euler products are special unitary") {
  std::mt19937_64 rng(107);
  for (int t = 0; t < 1000; ++t) {
    Mat4 u = su4_from_angles(random_angles(rng));
    CHECK(unitary_defect<4>(u) < 1e-10);
    // det via row-reduced product: for unitary u, det = product of eigenvalue
    // phases; cheaper check: det(u) from explicit 4x4 cofactor-free LU is
    // overkill, use the fact that det of the closed-form factors is exactly 1
    // each, so check det through the permanent-free minor expansion once on a
    // subset
    if (t % 50 == 0) {
      // direct determinant by elimination
      Mat4 m = u;
      C64 det{1.0};
      for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
          if (abs_c(m(r, col)) > abs_c(m(piv, col))) piv = r;
        if (piv != col) {
          for (int j = 0; j < 4; ++j) std::swap(m(piv, j), m(col, j));
          det = det * C64{-1.0};
        }
        C64 pv = m(col, col);
        det = det * pv;
        double n = pv.re * pv.re + pv.im * pv.im;
        C64 inv{pv.re / n, -pv.im / n};
        for (int r = col + 1; r < 4; ++r) {
          C64 f = m(r, col) * inv;
          for (int j = col; j < 4; ++j) m(r, j) = m(r, j) - f * m(col, j);
        }
      }
      CHECK(std::fabs(det.re - 1.0) < 1e-10);
      CHECK(std::fabs(det.im) < 1e-10);
    }
  }
}

TEST_CASE("angle bounds are enforced component by component") {
  GateAngles a;  // zeros: in bounds
  CHECK_NOTHROW(check_angle_bounds(a));
  a.alpha[0] = -0.01;
  CHECK_THROWS_AS(check_angle_bounds(a), BoundsError);
  a.alpha[0] = 0.0;
  a.alpha[1] = kPi / 2 + 0.01;  // even slot capped at pi/2
  CHECK_THROWS_AS(check_angle_bounds(a), BoundsError);
  a.alpha[1] = 0.0;
  a.alpha[13] = kPi / std::sqrt(3.0) + 1e-6;
  CHECK_THROWS_AS(check_angle_bounds(a), BoundsError);
  a.alpha[13] = 0.0;
  a.alpha[14] = kPi / std::sqrt(6.0) + 1e-6;
  CHECK_THROWS_AS(check_angle_bounds(a), BoundsError);
  a.alpha[14] = kPi / std::sqrt(6.0);  // closed interval: the endpoint is legal
  CHECK_NOTHROW(check_angle_bounds(a));
  CHECK_THROWS_AS(su4_from_angles(GateAngles{{-1.0}}), BoundsError);
}

TEST_CASE("cnot angles reproduce cnot up to the determinant phase") {
  Mat4 u = su4_from_angles(cnot_angles());
  // e^{i 3 pi / 4} U' = CNOT
  C64 phase = polar1(3.0 * kPi / 4.0);
  CHECK(max_abs_diff<4>(scale(u, phase), cnot_gate()) < 1e-14);
  CHECK(unitary_defect<4>(cnot_gate()) == 0.0);
}

TEST_CASE("cnot matrix permutes basis states as control-target") {
  Mat4 c = cnot_gate();
  // |00> -> |00>, |01> -> |01>, |10> -> |11>, |11> -> |10>
  int image[4] = {0, 1, 3, 2};
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) {
      double expect = (i == image[j]) ? 1.0 : 0.0;
      CHECK(std::fabs(c(i, j).re - expect) < 1e-15);
      CHECK(std::fabs(c(i, j).im) < 1e-15);
    }
}

TEST_CASE("su2 factorization is special unitary and hits known points") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    Su2Angles a;
    a.a1 = kPi * u(rng);
    a.a2 = kPi / 2 * u(rng);
    a.a3 = 2 * kPi * u(rng);
    Mat2 m = su2_from_angles(a);
    CHECK(unitary_defect<2>(m) < 1e-12);
    C64 det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    CHECK(std::fabs(det.re - 1.0) < 1e-12);
    CHECK(std::fabs(det.im) < 1e-12);
  }
  // zero angles give the identity
  CHECK(max_abs_diff<2>(su2_from_angles(Su2Angles{}), Mat2::identity()) == 0.0);
}

TEST_CASE("b gate is the x-axis quarter turn") {
  Mat2 b = b_gate();
  CHECK(unitary_defect<2>(b) < 1e-15);
  // b = (I + i sx)/sqrt(2)
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::fabs(b(0, 0).re - r) < 1e-15);
  CHECK(std::fabs(b(0, 1).im - r) < 1e-15);
  CHECK(std::fabs(b(1, 0).im - r) < 1e-15);
  CHECK(std::fabs(b(1, 1).re - r) < 1e-15);
}
