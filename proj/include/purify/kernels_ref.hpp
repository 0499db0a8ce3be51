#pragma once
#include "purify/complex.hpp"

namespace purify::kernels {

// Generic reference implementations of the hot-loop kernels, on raw row-major
// interleaved storage. These are the single source of truth: the scalar
// dispatch table instantiates them at T = double, the dual-number gradient
// path instantiates them at T = Dual, and the vectorized variants are tested
// against them.

template <class T>
void ref_mul(const Cx<T>* a, const Cx<T>* b, Cx<T>* c, int n) {
  for (int i = 0; i < n; ++i) {
    Cx<T>* ci = c + i * n;
    for (int j = 0; j < n; ++j) ci[j] = Cx<T>{};
    for (int k = 0; k < n; ++k) {
      const Cx<T> av = a[i * n + k];
      const Cx<T>* bk = b + k * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bk[j];
    }
  }
}

// Unnormalized measurement-branch blocks of one purification step:
//   B_m[r,c] = (E (rho ⊗ rho) E†)[4r+m, 4c+m],   p_m = Re tr B_m,
// where E is the embedded bilateral gate (16x16) and rho the single-pair
// state (4x4). Exploits that only the 4 strided diagonal sub-blocks of the
// conjugated matrix are ever needed: computes T = E · (rho⊗rho) in full, then
// contracts T rows against conjugated E rows.
template <class T>
void ref_branch_blocks(const Cx<T>* e, const Cx<T>* rho, T* p, Cx<T>* bout) {
  Cx<T> kr[256];
  for (int r1 = 0; r1 < 4; ++r1)
    for (int c1 = 0; c1 < 4; ++c1) {
      const Cx<T> v = rho[r1 * 4 + c1];
      for (int r2 = 0; r2 < 4; ++r2)
        for (int c2 = 0; c2 < 4; ++c2)
          kr[(4 * r1 + r2) * 16 + (4 * c1 + c2)] = v * rho[r2 * 4 + c2];
    }
  Cx<T> t[256];
  ref_mul(e, kr, t, 16);

  for (int m = 0; m < 4; ++m) {
    for (int r = 0; r < 4; ++r) {
      const Cx<T>* tr = t + (4 * r + m) * 16;
      for (int c = 0; c < 4; ++c) {
        const Cx<T>* ec = e + (4 * c + m) * 16;
        Cx<T> acc{};
        for (int k = 0; k < 16; ++k) acc += tr[k] * conj(ec[k]);
        bout[m * 16 + r * 4 + c] = acc;
      }
    }
    p[m] = bout[m * 16 + 0].re + bout[m * 16 + 5].re + bout[m * 16 + 10].re +
           bout[m * 16 + 15].re;
  }
}

}  // namespace purify::kernels
