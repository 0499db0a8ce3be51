#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "purify/density.hpp"
#include "purify/dual.hpp"
#include "purify/eig.hpp"
#include "purify/errors.hpp"
#include "purify/kernels.hpp"
#include "purify/kernels_ref.hpp"
#include "purify/matrix.hpp"

using namespace purify;

namespace {

template <int N>
Mat<double, N> random_mat(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Mat<double, N> m;
  for (auto& z : m.a) z = C64{d(rng), d(rng)};
  return m;
}

template <int N>
Mat<double, N> random_hermitian(std::mt19937_64& rng) {
  Mat<double, N> a = random_mat<N>(rng);
  return scale(a + dagger(a), C64{0.5});
}

Mat4 random_density_like(std::mt19937_64& rng) {
  Mat4 a = random_mat<4>(rng);
  Mat4 p = a * dagger(a);
  double tr = trace(p).re;
  return scale(p, C64{1.0 / tr});
}

}  // namespace

static_assert(sizeof(Mat4) == 16 * sizeof(C64));
static_assert(sizeof(std::array<Mat4, 4>) == 4 * sizeof(Mat4));
static_assert(sizeof(C64) == 2 * sizeof(double));

TEST_CASE("matrix arithmetic basics") {
  Mat4 id = Mat4::identity();
  CHECK(max_abs_diff<4>(id * id, id) == 0.0);
  CHECK(trace(id).re == doctest::Approx(4.0));

  std::mt19937_64 rng(7);
  Mat4 a = random_mat<4>(rng);
  Mat4 b = random_mat<4>(rng);
  CHECK(max_abs_diff<4>(a * id, a) < 1e-14);
  CHECK(max_abs_diff<4>(id * a, a) < 1e-14);
  // (ab)† = b† a†
  CHECK(max_abs_diff<4>(dagger(a * b), dagger(b) * dagger(a)) < 1e-13);
  // trace cyclicity
  C64 t1 = trace(a * b);
  C64 t2 = trace(b * a);
  CHECK(std::abs(t1.re - t2.re) < 1e-12);
  CHECK(std::abs(t1.im - t2.im) < 1e-12);
}

TEST_CASE("kron layout matches index convention") {
  std::mt19937_64 rng(11);
  Mat2 x = random_mat<2>(rng);
  Mat2 y = random_mat<2>(rng);
  Mat4 k = kron(x, y);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
          C64 expect = x(i, j) * y(p, q);
          C64 got = k(2 * i + p, 2 * j + q);
          CHECK(std::abs(expect.re - got.re) < 1e-15);
          CHECK(std::abs(expect.im - got.im) < 1e-15);
        }
  // mixing property (A⊗B)(C⊗D) = AC ⊗ BD
  Mat2 c = random_mat<2>(rng);
  Mat2 d = random_mat<2>(rng);
  CHECK(max_abs_diff<4>(kron(x, y) * kron(c, d), kron(x * c, y * d)) < 1e-13);
}

TEST_CASE("dispatched products equal the naive triple loop") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    Mat4 a = random_mat<4>(rng);
    Mat4 b = random_mat<4>(rng);
    CHECK(max_abs_diff<4>(a * b, mul_naive(a, b)) < 1e-13);
  }
  for (int t = 0; t < 10; ++t) {
    Mat16 a = random_mat<16>(rng);
    Mat16 b = random_mat<16>(rng);
    CHECK(max_abs_diff<16>(a * b, mul_naive(a, b)) < 1e-12);
  }
}

TEST_CASE("kernel backends agree") {
  if (!kernels::avx2_available()) {
    MESSAGE("no avx2 on this host; scalar only");
    CHECK(std::string(kernels::active().name) == "scalar");
    return;
  }
  std::mt19937_64 rng(31);
  for (int t = 0; t < 25; ++t) {
    Mat16 e = random_mat<16>(rng);
    Mat4 r = random_mat<4>(rng);
    double p_s[4], p_v[4];
    std::array<Mat4, 4> b_s, b_v;

    kernels::set_backend(kernels::Backend::Scalar);
    kernels::active().branch_blocks(e.a.data(), r.a.data(), p_s, b_s[0].a.data());
    Mat16 m_s = e * e;

    kernels::set_backend(kernels::Backend::Avx2);
    kernels::active().branch_blocks(e.a.data(), r.a.data(), p_v, b_v[0].a.data());
    Mat16 m_v = e * e;

    kernels::set_backend(kernels::Backend::Auto);
    for (int m = 0; m < 4; ++m) {
      CHECK(std::fabs(p_s[m] - p_v[m]) < 1e-12);
      CHECK(max_abs_diff<4>(b_s[m], b_v[m]) < 1e-12);
    }
    CHECK(max_abs_diff<16>(m_s, m_v) < 1e-11);
  }
}

TEST_CASE("branch blocks kernel matches the generic reference") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    Mat16 e = random_mat<16>(rng);
    Mat4 r = random_mat<4>(rng);
    double p_a[4], p_r[4];
    std::array<Mat4, 4> b_a, b_r;
    kernels::active().branch_blocks(e.a.data(), r.a.data(), p_a, b_a[0].a.data());
    kernels::ref_branch_blocks<double>(e.a.data(), r.a.data(), p_r, b_r[0].a.data());
    for (int m = 0; m < 4; ++m) {
      CHECK(std::fabs(p_a[m] - p_r[m]) < 1e-12);
      CHECK(max_abs_diff<4>(b_a[m], b_r[m]) < 1e-12);
    }
  }
}

TEST_CASE("hermitian eigenvalues: trace identities and order") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 1000; ++t) {
    Mat4 h = random_hermitian<4>(rng);
    auto ev = eig_hermitian_values<4>(h);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
    double s1 = 0, s2 = 0;
    for (double v : ev) {
      s1 += v;
      s2 += v * v;
    }
    double tr1 = trace(h).re;
    double tr2 = trace(h * h).re;
    CHECK(std::fabs(s1 - tr1) < 1e-10);
    CHECK(std::fabs(s2 - tr2) < 1e-9);
  }
}

TEST_CASE("hermitian eigenvalues of a known matrix") {
  // diag(3, 1) in the plane spanned by (e0 ± e2)/sqrt(2)
  Mat4 h;
  h(0, 0) = C64{2.0};
  h(2, 2) = C64{2.0};
  h(0, 2) = C64{1.0};
  h(2, 0) = C64{1.0};
  h(1, 1) = C64{-1.0};
  auto ev = eig_hermitian_values<4>(h);
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev[3] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("general eigenvalues recover a planted spectrum") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    // similarity transform of a planted diagonal
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::array<C64, 4> planted;
    for (auto& z : planted) z = C64{d(rng), d(rng)};
    Mat4 dm;
    for (int i = 0; i < 4; ++i) dm(i, i) = planted[i];
    // build a well-conditioned similarity from a unitary-ish QR-free trick:
    // S = I + 0.3 R with R random
    Mat4 s = Mat4::identity() + scale(random_mat<4>(rng), C64{0.3});
    // invert S by Gauss elimination on an augmented copy (small, fine here)
    Mat4 inv = Mat4::identity();
    Mat4 a = s;
    for (int col = 0; col < 4; ++col) {
      int piv = col;
      for (int r = col + 1; r < 4; ++r)
        if (abs_c(a(r, col)) > abs_c(a(piv, col))) piv = r;
      for (int j = 0; j < 4; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
      C64 piv_v = a(col, col);
      double piv_n = piv_v.re * piv_v.re + piv_v.im * piv_v.im;
      C64 scale_inv{piv_v.re / piv_n, -piv_v.im / piv_n};
      for (int j = 0; j < 4; ++j) {
        a(col, j) = a(col, j) * scale_inv;
        inv(col, j) = inv(col, j) * scale_inv;
      }
      for (int r = 0; r < 4; ++r) {
        if (r == col) continue;
        C64 f = a(r, col);
        for (int j = 0; j < 4; ++j) {
          a(r, j) = a(r, j) - f * a(col, j);
          inv(r, j) = inv(r, j) - f * inv(col, j);
        }
      }
    }
    Mat4 m = s * dm * inv;
    auto spec = eig_general(m);
    // greedy-match eigenvalues to planted values
    std::array<bool, 4> used{};
    double worst = 0.0;
    for (const auto& z : spec.values) {
      double best = 1e300;
      int bi = -1;
      for (int i = 0; i < 4; ++i) {
        if (used[i]) continue;
        double dist = std::hypot(z.re - planted[i].re, z.im - planted[i].im);
        if (dist < best) {
          best = dist;
          bi = i;
        }
      }
      used[bi] = true;
      worst = std::max(worst, best);
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("singular values square to the gram spectrum") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 200; ++t) {
    Mat4 g = random_mat<4>(rng);
    auto sv = svd_values4(g, 4);
    CHECK(std::is_sorted(sv.begin(), sv.end(), std::greater<double>()));
    auto gram = eig_hermitian_values<4>(dagger(g) * g);  // ascending
    for (int i = 0; i < 4; ++i) {
      double expect = std::sqrt(std::max(0.0, gram[3 - i]));
      CHECK(std::fabs(sv[i] - expect) < 1e-9);
    }
  }
}

TEST_CASE("pivoted cholesky reconstructs and ranks") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 200; ++t) {
    Mat4 rho = random_density_like(rng);
    auto pc = pivoted_cholesky(rho, 1e-10);
    CHECK(pc.psd_ok);
    CHECK(pc.rank == 4);
    Mat4 rec = pc.l * dagger(pc.l);
    CHECK(max_abs_diff<4>(rec, rho) < 1e-12);
  }

  // rank-1 projector
  Mat4 proj;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) proj(i, j) = C64{0.25};
  auto pc = pivoted_cholesky(proj, 1e-10);
  CHECK(pc.psd_ok);
  CHECK(pc.rank == 1);
  CHECK(max_abs_diff<4>(pc.l * dagger(pc.l), proj) < 1e-13);

  // clearly indefinite
  Mat4 ind = Mat4::identity();
  ind(3, 3) = C64{-0.5};
  auto bad = pivoted_cholesky(ind, 1e-10);
  CHECK_FALSE(bad.psd_ok);
}

TEST_CASE("density validation rejects each defect") {
  Mat4 good;
  good(0, 0) = good(3, 3) = C64{0.5};
  good(0, 3) = good(3, 0) = C64{0.5};
  CHECK_NOTHROW(validate_density<4>(good));

  Mat4 nonherm = good;
  nonherm(0, 3) = C64{0.5, 0.3};
  CHECK_THROWS_AS(validate_density<4>(nonherm), ValidationError);

  Mat4 badtrace = good;
  badtrace(1, 1) = C64{0.2};
  CHECK_THROWS_AS(validate_density<4>(badtrace), ValidationError);

  Mat4 negative;
  negative(0, 0) = C64{1.5};
  negative(1, 1) = C64{-0.5};
  CHECK_THROWS_AS(validate_density<4>(negative), ValidationError);

  std::mt19937_64 rng(59);
  for (int t = 0; t < 50; ++t) CHECK_NOTHROW(validate_density<4>(random_density_like(rng)));
}

TEST_CASE("dual numbers differentiate through trig and sqrt") {
  auto f = [](auto x) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    return sin(x) * sqrt(x) + cos(x) * x;
  };
  double x0 = 0.73;
  Dual r = f(Dual{x0, 1.0});
  double h = 1e-6;
  double cd = (f(x0 + h) - f(x0 - h)) / (2 * h);
  CHECK(r.v == doctest::Approx(f(x0)).epsilon(1e-12));
  CHECK(r.d == doctest::Approx(cd).epsilon(1e-8));
}
