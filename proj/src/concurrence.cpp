#include "purify/concurrence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace purify {

Mat4 spin_flip_matrix() {
  Mat4 y;
  y(0, 3) = C64{-1.0};
  y(1, 2) = C64{1.0};
  y(2, 1) = C64{1.0};
  y(3, 0) = C64{-1.0};
  return y;
}

namespace {
constexpr std::array<double, 4> kFlipSign{-1.0, 1.0, 1.0, -1.0};
}

std::array<double, 4> spin_flip_spectrum(const Mat4& rho) {
  const PivotedCholesky ch = pivoted_cholesky(rho, 1e-8);
  if (!ch.psd_ok) {
    std::ostringstream s;
    s << "state not positive semidefinite within tolerance: residual pivot = " << ch.worst_pivot;
    throw NumericalError(s.str());
  }
  const int r = ch.rank;
  if (r == 0) return {};

  // G[i][j] = sum_a sign_a * conj(L[a][i]) * conj(L[3-a][j]); Y applied as an
  // exact signed permutation, no rounding.
  Mat4 g;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      C64 acc{};
      for (int a = 0; a < 4; ++a)
        acc += C64{kFlipSign[a]} * conj(ch.l(a, i)) * conj(ch.l(3 - a, j));
      g(i, j) = acc;
    }
  return svd_values4(g, r);
}

double concurrence_unchecked(const Mat4& rho, double ceiling_tol) {
  const auto lam = spin_flip_spectrum(rho);
  double c = lam[0] - lam[1] - lam[2] - lam[3];
  if (c <= 0.0) return 0.0;
  if (c > 1.0) {
    if (c <= 1.0 + ceiling_tol) return 1.0;
    std::ostringstream s;
    s << "concurrence overshoot beyond tolerance: value = " << c;
    throw NumericalError(s.str());
  }
  return c;
}

double concurrence(const Density4& rho) { return concurrence_unchecked(rho.m); }

DualConcurrence concurrence_dual(const Mat<Dual, 4>& rho) {
  using CD = Cx<Dual>;

  // Primal lambdas from the stable route.
  Mat4 primal;
  for (int i = 0; i < 16; ++i) primal.a[i] = C64{rho.a[i].re.v, rho.a[i].im.v};
  const auto lam = spin_flip_spectrum(primal);

  // Spin-flip product in dual arithmetic: A = rho Y rho* Y. Apply Y as a
  // signed anti-diagonal permutation: (M Y)[i][j] = M[i][3-j] * sign_{3-j}.
  Mat<Dual, 4> rys;  // rho * Y
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rys(i, j) = rho(i, 3 - j) * CD{Dual(kFlipSign[3 - j])};
  Mat<Dual, 4> cys;  // rho* * Y
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      cys(i, j) = conj(rho(i, 3 - j)) * CD{Dual(kFlipSign[3 - j])};
  const Mat<Dual, 4> a = mul_naive(rys, cys);
  const Mat<Dual, 4> a2 = mul_naive(a, a);

  CD t1{}, t2{}, t3{}, t4{};
  for (int i = 0; i < 4; ++i) {
    t1 += a(i, i);
    t2 += a2(i, i);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      t3 += a2(i, j) * a(j, i);
      t4 += a2(i, j) * a2(j, i);
    }

  // Newton's identities; all e_k are real in exact arithmetic.
  const CD e1 = t1;
  const CD e2 = (e1 * t1 - t2) * CD{Dual(0.5)};
  const CD e3 = (e2 * t1 - e1 * t2 + t3) * CD{Dual(1.0 / 3.0)};
  const CD e4 = (e3 * t1 - e2 * t2 + e1 * t3 - t4) * CD{Dual(0.25)};

  bool degenerate = false;
  const double imag_resid = std::max(std::max(std::fabs(e1.im.v), std::fabs(e2.im.v)),
                                     std::max(std::fabs(e3.im.v), std::fabs(e4.im.v)));
  if (imag_resid > 1e-8) degenerate = true;

  const Dual c1 = e1.re, c2 = e2.re, c3 = e3.re, c4 = e4.re;

  // p(mu) = mu^4 - c1 mu^3 + c2 mu^2 - c3 mu + c4, roots mu_i = lambda_i^2.
  Dual lam_dual[4];
  for (int i = 0; i < 4; ++i) {
    const double mu = lam[i] * lam[i];
    if (mu < 1e-12) {
      // sqrt kink: lambda pinned at ~0; derivative information unreliable.
      lam_dual[i] = Dual(lam[i], 0.0);
      if (lam[0] - lam[1] - lam[2] - lam[3] > 1e-9) degenerate = true;
      continue;
    }
    const double dp = ((4.0 * mu - 3.0 * c1.v) * mu + 2.0 * c2.v) * mu - c3.v;
    if (std::fabs(dp) < 1e-6 * std::max(1.0, mu * mu * mu)) {
      degenerate = true;
      lam_dual[i] = Dual(lam[i], 0.0);
      continue;
    }
    // dp/dcoeffs dotted with coefficient derivatives.
    const double pdot = ((-c1.d * mu + c2.d) * mu - c3.d) * mu + c4.d;
    const double mu_dot = -pdot / dp;
    lam_dual[i] = Dual(lam[i], mu_dot / (2.0 * lam[i]));
  }

  Dual c = lam_dual[0] - lam_dual[1] - lam_dual[2] - lam_dual[3];
  if (std::fabs(c.v) < 1e-9) degenerate = true;  // max{0,.} kink
  if (c.v <= 0.0) return {Dual(0.0, 0.0), degenerate};
  if (c.v > 1.0) c.v = 1.0;
  return {c, degenerate};
}

}  // namespace purify
