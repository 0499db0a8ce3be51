// AVX2+FMA variants of the hot-loop kernels. Complex numbers are interleaved
// (re, im) pairs, so one 256-bit lane holds two complex doubles. A complex
// scale-and-accumulate acc += a * b with scalar a uses the classic pattern
//   acc + [ar*br - ai*bi, ar*bi + ai*br] = add(acc, fmaddsub(ar, b, ai*swap(b)))
// where swap exchanges the re/im halves of each pair.
#include <immintrin.h>

#include "purify/kernels.hpp"

namespace purify::kernels {

namespace {

inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// c[0..n) row-major complex product, n = 4 or 16 (n*2 doubles per row).
template <int N>
void avx2_mul(const C64* a, const C64* b, C64* c) {
  constexpr int kVecs = N / 2;  // 256-bit vectors per row
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (int i = 0; i < N; ++i) {
    __m256d acc[kVecs];
    for (int v = 0; v < kVecs; ++v) acc[v] = _mm256_setzero_pd();
    const C64* arow = a + i * N;
    for (int k = 0; k < N; ++k) {
      const __m256d ar = _mm256_set1_pd(arow[k].re);
      const __m256d ai = _mm256_set1_pd(arow[k].im);
      const double* brow = bd + k * 2 * N;
      for (int v = 0; v < kVecs; ++v) {
        const __m256d bv = _mm256_loadu_pd(brow + 4 * v);
        const __m256d t = _mm256_mul_pd(ai, swap_pairs(bv));
        acc[v] = _mm256_add_pd(acc[v], _mm256_fmaddsub_pd(ar, bv, t));
      }
    }
    double* crow = cd + i * 2 * N;
    for (int v = 0; v < kVecs; ++v) _mm256_storeu_pd(crow + 4 * v, acc[v]);
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_pd(s, _mm_unpackhi_pd(s, s)));
}

void avx2_branch_blocks(const C64* e, const C64* rho, double* p, C64* bout) {
  // kron(rho, rho): row (4 r1 + r2) segment (4 c1 ..) = rho[r1,c1] * rho[r2,*].
  alignas(32) double kr[512];
  const double* rd = reinterpret_cast<const double*>(rho);
  for (int r1 = 0; r1 < 4; ++r1)
    for (int c1 = 0; c1 < 4; ++c1) {
      const __m256d vr = _mm256_set1_pd(rho[r1 * 4 + c1].re);
      const __m256d vi = _mm256_set1_pd(rho[r1 * 4 + c1].im);
      for (int r2 = 0; r2 < 4; ++r2) {
        double* dst = kr + (4 * r1 + r2) * 32 + 8 * c1;
        const double* src = rd + 8 * r2;
        for (int v = 0; v < 2; ++v) {
          const __m256d b = _mm256_loadu_pd(src + 4 * v);
          const __m256d t = _mm256_mul_pd(vi, swap_pairs(b));
          _mm256_storeu_pd(dst + 4 * v, _mm256_fmaddsub_pd(vr, b, t));
        }
      }
    }

  alignas(32) double t[512];
  avx2_mul<16>(e, reinterpret_cast<const C64*>(kr), reinterpret_cast<C64*>(t));

  // B_m[r,c] = sum_k T[4r+m,k] * conj(E[4c+m,k]). With z = (zr, zi) pairs:
  //   Re += dot(t, e);  Im += dot(t, swap(e) with its even lanes negated).
  const double* ed = reinterpret_cast<const double*>(e);
  const __m256d neg_even = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
  for (int m = 0; m < 4; ++m) {
    for (int r = 0; r < 4; ++r) {
      const double* trow = t + (4 * r + m) * 32;
      for (int c = 0; c < 4; ++c) {
        const double* erow = ed + (4 * c + m) * 32;
        __m256d accre = _mm256_setzero_pd();
        __m256d accim = _mm256_setzero_pd();
        for (int v = 0; v < 8; ++v) {
          const __m256d tv = _mm256_loadu_pd(trow + 4 * v);
          const __m256d ev = _mm256_loadu_pd(erow + 4 * v);
          accre = _mm256_fmadd_pd(tv, ev, accre);
          const __m256d esn = _mm256_xor_pd(swap_pairs(ev), neg_even);
          accim = _mm256_fmadd_pd(tv, esn, accim);
        }
        bout[m * 16 + r * 4 + c] = C64{hsum(accre), hsum(accim)};
      }
    }
    p[m] = bout[m * 16 + 0].re + bout[m * 16 + 5].re + bout[m * 16 + 10].re +
           bout[m * 16 + 15].re;
  }
}

const KernelTable kAvx2{avx2_mul<4>, avx2_mul<16>, avx2_branch_blocks, "avx2"};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace purify::kernels
