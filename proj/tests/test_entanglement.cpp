#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "purify/concurrence.hpp"
#include "purify/density.hpp"
#include "purify/eig.hpp"
#include "purify/matrix.hpp"
#include "purify/sun.hpp"

using namespace purify;

namespace {

Mat4 ket_to_rho(const std::array<C64, 4>& k) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = k[i] * conj(k[j]);
  return r;
}

std::array<C64, 4> bell(int which) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 0: return {C64{r}, C64{}, C64{}, C64{r}};    // phi+
    case 1: return {C64{r}, C64{}, C64{}, C64{-r}};   // phi-
    case 2: return {C64{}, C64{r}, C64{r}, C64{}};    // psi+
    default: return {C64{}, C64{r}, C64{-r}, C64{}};  // psi-
  }
}

Mat4 random_density_rank(std::mt19937_64& rng, int rank) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Mat4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = C64{d(rng), d(rng)};
  Mat4 p = a * dagger(a);
  return scale(p, C64{1.0 / trace(p).re});
}

// the textbook route: sqrt of eigenvalues of rho * (Y rho^* Y), descending
std::array<double, 4> spectrum_by_general_eig(const Mat4& rho) {
  Mat4 y = spin_flip_matrix();
  Mat4 rho_tilde = y * conjugate(rho) * y;
  Spectrum s = eig_general(rho * rho_tilde);
  std::array<double, 4> lam;
  for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, s.values[i].re));
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return lam;
}

Mat4 random_local_unitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pi = std::acos(-1.0);
  auto rnd_su2 = [&] {
    Su2Angles a;
    a.a1 = pi * u(rng);
    a.a2 = pi / 2 * u(rng);
    a.a3 = 2 * pi * u(rng);
    return su2_from_angles(a);
  };
  return kron(rnd_su2(), rnd_su2());
}

}  // namespace

TEST_CASE("spin flip matrix is the signed antidiagonal") {
  Mat4 y = spin_flip_matrix();
  double sign[4] = {-1.0, 1.0, 1.0, -1.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double expect = (j == 3 - i) ? sign[i] : 0.0;
      CHECK(y(i, j).re == expect);
      CHECK(y(i, j).im == 0.0);
    }
  CHECK(max_abs_diff<4>(y * y, Mat4::identity()) == 0.0);
}

TEST_CASE("bell states are maximally entangled, products are not") {
  for (int b = 0; b < 4; ++b) {
    Density4 rho = validate_density<4>(ket_to_rho(bell(b)));
    CHECK(concurrence(rho) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // |01>
  Mat4 sep;
  sep(1, 1) = C64{1.0};
  CHECK(concurrence_unchecked(sep) == doctest::Approx(0.0).epsilon(1e-12));
  // maximally mixed
  Mat4 mixed = scale(Mat4::identity(), C64{0.25});
  CHECK(concurrence_unchecked(mixed) == doctest::Approx(0.0).epsilon(1e-12));
  // equal mix of two bell states: zero concurrence
  Mat4 two = scale(ket_to_rho(bell(0)) + ket_to_rho(bell(1)), C64{0.5});
  CHECK(concurrence_unchecked(two) == doctest::Approx(0.0).epsilon(1e-11));
}

TEST_CASE("pure state concurrence is twice the schmidt product") {
  std::mt19937_64 rng(211);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::array<C64, 4> k;
    double n = 0.0;
    for (auto& z : k) {
      z = C64{d(rng), d(rng)};
      n += norm_sq(z);
    }
    const double inv = 1.0 / std::sqrt(n);
    for (auto& z : k) z = z * C64{inv};
    // C(|psi>) = 2 |k0 k3 - k1 k2|
    C64 det = k[0] * k[3] - k[1] * k[2];
    double expect = 2.0 * abs_c(det);
    CHECK(concurrence_unchecked(ket_to_rho(k)) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("bell diagonal states follow the excess-weight rule") {
  std::mt19937_64 rng(223);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    double w[4];
    double s = 0.0;
    for (double& x : w) {
      x = u(rng);
      s += x;
    }
    for (double& x : w) x /= s;
    Mat4 rho = Mat4::zero();
    double wmax = 0.0;
    for (int b = 0; b < 4; ++b) {
      rho = rho + scale(ket_to_rho(bell(b)), C64{w[b]});
      wmax = std::max(wmax, w[b]);
    }
    double expect = std::max(0.0, 2.0 * wmax - 1.0);
    CHECK(std::fabs(concurrence_unchecked(rho) - expect) < 1e-10);
  }
}

TEST_CASE("spectrum agrees with the general-eigenvalue route") {
  std::mt19937_64 rng(227);
  for (int t = 0; t < 400; ++t) {
    Mat4 rho = random_density_rank(rng, 1 + (t % 4));
    auto fast = spin_flip_spectrum(rho);
    auto ref = spectrum_by_general_eig(rho);
    for (int i = 0; i < 4; ++i) CHECK(std::fabs(fast[i] - ref[i]) < 5e-7);
    CHECK(std::is_sorted(fast.begin(), fast.end(), std::greater<double>()));
  }
}

TEST_CASE("concurrence is invariant under local unitaries") {
  std::mt19937_64 rng(229);
  for (int t = 0; t < 1000; ++t) {
    Mat4 rho = random_density_rank(rng, 1 + (t % 4));
    Mat4 w = random_local_unitary(rng);
    Mat4 moved = w * rho * dagger(w);
    CHECK(std::fabs(concurrence_unchecked(rho) - concurrence_unchecked(moved)) < 1e-9);
  }
}

TEST_CASE("concurrence stays within the unit interval") {
  std::mt19937_64 rng(233);
  for (int t = 0; t < 500; ++t) {
    double c = concurrence_unchecked(random_density_rank(rng, 1 + (t % 4)));
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("dual concurrence value matches the double path") {
  std::mt19937_64 rng(239);
  for (int t = 0; t < 100; ++t) {
    Mat4 rho = random_density_rank(rng, 4);
    Mat<Dual, 4> dr;
    for (int i = 0; i < 16; ++i)
      dr.a[i] = Cx<Dual>{Dual{rho.a[i].re, 0.0}, Dual{rho.a[i].im, 0.0}};
    DualConcurrence dc = concurrence_dual(dr);
    CHECK(std::fabs(dc.value.v - concurrence_unchecked(rho)) < 1e-10);
    CHECK(dc.value.d == 0.0);
  }
}
