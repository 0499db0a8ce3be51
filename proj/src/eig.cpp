#include "purify/eig.hpp"

#include <algorithm>
#include <cmath>

#include "purify/errors.hpp"

namespace purify {

namespace {

// One Hermitian Jacobi rotation zeroing A(p,q). Returns the (c, s, u) data
// needed to update other structures; here we only update A in place.
template <int N>
void jacobi_rotate(Mat<double, N>& a, int p, int q) {
  const C64 apq = a(p, q);
  const double m = abs_c(apq);
  if (m == 0.0) return;
  const C64 u{apq.re / m, apq.im / m};
  const double app = a(p, p).re;
  const double aqq = a(q, q).re;
  const double tau = (aqq - app) / (2.0 * m);
  double t;
  if (tau >= 0.0)
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  else
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // Right-multiply by J, then left-multiply by J†.
  for (int k = 0; k < N; ++k) {
    const C64 akp = a(k, p);
    const C64 akq = a(k, q);
    a(k, p) = akp * c - conj(u) * akq * s;
    a(k, q) = u * akp * s + akq * c;
  }
  for (int k = 0; k < N; ++k) {
    const C64 apk = a(p, k);
    const C64 aqk = a(q, k);
    a(p, k) = apk * c - u * aqk * s;
    a(q, k) = conj(u) * apk * s + aqk * c;
  }
  // Clean the pivot pair explicitly; rounding would otherwise leave ~1e-17
  // residue that slows convergence bookkeeping.
  a(p, q) = C64{};
  a(q, p) = C64{};
  a(p, p) = C64{a(p, p).re};
  a(q, q) = C64{a(q, q).re};
}

template <int N>
double off_diag_sq(const Mat<double, N>& a) {
  double s = 0.0;
  for (int p = 0; p < N; ++p)
    for (int q = p + 1; q < N; ++q) s += norm_sq(a(p, q));
  return s;
}

}  // namespace

template <int N>
std::array<double, N> eig_hermitian_values(const Mat<double, N>& h) {
  // Work on the Hermitian part so callers may pass matrices with ~1e-16
  // asymmetry from rounding.
  Mat<double, N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const C64 z = h(i, j);
      const C64 w = conj(h(j, i));
      a(i, j) = C64{0.5 * (z.re + w.re), 0.5 * (z.im + w.im)};
    }

  double scale = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) scale = std::max(scale, abs_c(a(i, j)));
  if (scale == 0.0) return {};

  const double stop = 1e-30 * scale * scale * N * N;
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (off_diag_sq(a) <= stop) break;
    if (sweep == 59) throw NumericalError("hermitian Jacobi did not converge in 60 sweeps");
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) jacobi_rotate(a, p, q);
  }

  std::array<double, N> ev;
  for (int i = 0; i < N; ++i) ev[i] = a(i, i).re;
  std::sort(ev.begin(), ev.end());
  return ev;
}

template std::array<double, 4> eig_hermitian_values<4>(const Mat4&);
template std::array<double, 16> eig_hermitian_values<16>(const Mat16&);

namespace {

// Complex Givens pair (c real, s complex) with G = [[c, s], [-conj(s), c]]
// mapping (f, g) to (r, 0).
struct Givens {
  double c;
  C64 s;
};

Givens make_givens(const C64& f, const C64& g) {
  const double af = abs_c(f);
  const double ag = abs_c(g);
  if (ag == 0.0) return {1.0, C64{}};
  if (af == 0.0) return {0.0, C64{g.re / ag, -g.im / ag}};
  const double r = std::hypot(af, ag);
  const double c = af / r;
  // s = (f/|f|) * conj(g) / r
  const C64 phase{f.re / af, f.im / af};
  const C64 s = phase * conj(g);
  return {c, C64{s.re / r, s.im / r}};
}

// Eigenvalues of [[a, b], [c, d]].
std::array<C64, 2> eig2(const C64& a, const C64& b, const C64& c, const C64& d) {
  const C64 tr = a + d;
  const C64 half{0.5 * tr.re, 0.5 * tr.im};
  const C64 diff = a - d;
  const C64 rad = C64{0.25} * diff * diff + b * c;
  // complex square root
  const double m = abs_c(rad);
  C64 sq{};
  if (m > 0.0) {
    const double re = std::sqrt(0.5 * (m + rad.re));
    const double im_mag = std::sqrt(0.5 * (m - rad.re));
    sq = C64{re, rad.im >= 0.0 ? im_mag : -im_mag};
  }
  return {half + sq, half - sq};
}

}  // namespace

Spectrum eig_general(const Mat4& m) {
  Mat4 h = m;

  // Householder reduction to upper Hessenberg form.
  for (int k = 0; k < 2; ++k) {
    double xnorm = 0.0;
    for (int i = k + 1; i < 4; ++i) xnorm += norm_sq(h(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm <= 1e-300) continue;
    C64 x0 = h(k + 1, k);
    const double ax0 = abs_c(x0);
    const C64 phase = ax0 > 0.0 ? C64{x0.re / ax0, x0.im / ax0} : C64{1.0};
    const C64 alpha = C64{-xnorm} * phase;
    // v = x - alpha * e1 over rows k+1..3
    std::array<C64, 4> v{};
    for (int i = k + 1; i < 4; ++i) v[i] = h(i, k);
    v[k + 1] = v[k + 1] - alpha;
    double vnorm = 0.0;
    for (int i = k + 1; i < 4; ++i) vnorm += norm_sq(v[i]);
    if (vnorm <= 1e-300) continue;
    const double beta = 2.0 / vnorm;
    // H = I - beta v v†;  h <- H h H
    for (int j = 0; j < 4; ++j) {
      C64 dot{};
      for (int i = k + 1; i < 4; ++i) dot += conj(v[i]) * h(i, j);
      dot = dot * beta;
      for (int i = k + 1; i < 4; ++i) h(i, j) -= v[i] * dot;
    }
    for (int i = 0; i < 4; ++i) {
      C64 dot{};
      for (int j = k + 1; j < 4; ++j) dot += h(i, j) * v[j];
      dot = dot * beta;
      for (int j = k + 1; j < 4; ++j) h(i, j) -= dot * conj(v[j]);
    }
  }

  Spectrum out{};
  int found = 0;
  int hi = 3;
  int iters = 0;
  double scale = 1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) scale = std::max(scale, abs_c(h(i, j)));
  const double eps = 1e-16;

  while (hi >= 0) {
    if (hi == 0) {
      out.values[found++] = h(0, 0);
      break;
    }
    // Deflate wherever a subdiagonal is negligible.
    const double sub = abs_c(h(hi, hi - 1));
    if (sub <= eps * (abs_c(h(hi - 1, hi - 1)) + abs_c(h(hi, hi)) + eps * scale)) {
      out.values[found++] = h(hi, hi);
      --hi;
      continue;
    }
    if (hi == 1) {
      const auto ev = eig2(h(0, 0), h(0, 1), h(1, 0), h(1, 1));
      out.values[found++] = ev[0];
      out.values[found++] = ev[1];
      hi = -1;
      break;
    }
    if (++iters > 160) throw NumericalError("QR eigenvalue iteration exceeded 160 steps");

    // Wilkinson shift: the eigenvalue of the trailing 2x2 closest to h(hi,hi).
    const auto ev = eig2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    const C64 corner = h(hi, hi);
    const C64 mu = (norm_sq(ev[0] - corner) <= norm_sq(ev[1] - corner)) ? ev[0] : ev[1];

    for (int i = 0; i <= hi; ++i) h(i, i) -= mu;
    // QR by Givens on the subdiagonal, then RQ.
    std::array<Givens, 3> rot{};
    for (int i = 0; i < hi; ++i) {
      const Givens g = make_givens(h(i, i), h(i + 1, i));
      rot[i] = g;
      for (int j = i; j < 4; ++j) {
        const C64 a = h(i, j);
        const C64 b = h(i + 1, j);
        h(i, j) = a * g.c + g.s * b;
        h(i + 1, j) = b * g.c - conj(g.s) * a;
      }
    }
    for (int i = 0; i < hi; ++i) {
      const Givens g = rot[i];
      for (int j = 0; j <= std::min(i + 2, hi); ++j) {
        const C64 a = h(j, i);
        const C64 b = h(j, i + 1);
        h(j, i) = a * g.c + conj(g.s) * b;
        h(j, i + 1) = b * g.c - g.s * a;
      }
    }
    for (int i = 0; i <= hi; ++i) h(i, i) += mu;
  }

  if (found != 4) throw NumericalError("QR eigenvalue iteration failed to deflate all eigenvalues");
  return out;
}

std::array<double, 4> svd_values4(const Mat4& g, int r) {
  // One-sided Jacobi on the columns of the leading r x r block.
  std::array<std::array<C64, 4>, 4> col{};
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) col[j][i] = g(i, j);

  const double eps = 1e-15;
  for (int sweep = 0; sweep < 40; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        double a = 0.0, b = 0.0;
        C64 d{};
        for (int k = 0; k < r; ++k) {
          a += norm_sq(col[i][k]);
          b += norm_sq(col[j][k]);
          d += conj(col[i][k]) * col[j][k];
        }
        const double m = abs_c(d);
        if (m <= eps * std::sqrt(a * b) || m == 0.0) continue;
        rotated = true;
        const C64 u{d.re / m, d.im / m};
        const double tau = (b - a) / (2.0 * m);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < r; ++k) {
          const C64 ci = col[i][k];
          const C64 cj = col[j][k];
          col[i][k] = ci * c - conj(u) * cj * s;
          col[j][k] = u * ci * s + cj * c;
        }
      }
    if (!rotated) break;
    if (sweep == 39) throw NumericalError("one-sided Jacobi SVD did not converge in 40 sweeps");
  }

  std::array<double, 4> sv{};
  for (int j = 0; j < r; ++j) {
    double n = 0.0;
    for (int k = 0; k < r; ++k) n += norm_sq(col[j][k]);
    sv[j] = std::sqrt(n);
  }
  std::sort(sv.begin(), sv.begin() + r, std::greater<double>());
  return sv;
}

PivotedCholesky pivoted_cholesky(const Mat4& rho, double neg_tol) {
  Mat4 w = rho;
  std::array<int, 4> perm{0, 1, 2, 3};
  PivotedCholesky out{};
  out.rank = 4;
  out.psd_ok = true;
  out.worst_pivot = 0.0;

  Mat4 lw;  // factor in working (permuted) row order
  double first_pivot = 0.0;
  for (int j = 0; j < 4; ++j) {
    int q = j;
    double piv = w(j, j).re;
    for (int k = j + 1; k < 4; ++k)
      if (w(k, k).re > piv) {
        piv = w(k, k).re;
        q = k;
      }
    if (q != j) {
      std::swap(perm[j], perm[q]);
      for (int k = 0; k < 4; ++k) std::swap(w(j, k), w(q, k));
      for (int k = 0; k < 4; ++k) std::swap(w(k, j), w(k, q));
      for (int k = 0; k < 4; ++k) std::swap(lw(j, k), lw(q, k));
    }
    if (j == 0) first_pivot = std::max(piv, 0.0);
    const double stop = std::max(1e-14 * first_pivot, 0.0);
    if (piv <= stop) {
      out.rank = j;
      double worst = 0.0;
      for (int k = j; k < 4; ++k) worst = std::min(worst, w(k, k).re);
      out.worst_pivot = worst;
      if (worst < -neg_tol) out.psd_ok = false;
      break;
    }
    const double root = std::sqrt(piv);
    lw(j, j) = C64{root};
    for (int i = j + 1; i < 4; ++i) lw(i, j) = C64{w(i, j).re / root, w(i, j).im / root};
    for (int i = j + 1; i < 4; ++i)
      for (int k = j + 1; k < 4; ++k) w(i, k) -= lw(i, j) * conj(lw(k, j));
  }

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < out.rank; ++j) out.l(perm[i], j) = lw(i, j);
  return out;
}

}  // namespace purify
