#pragma once
#include <string>

#include "purify/complex.hpp"

namespace purify::kernels {

// Hot-loop kernels with a scalar reference implementation and, where the host
// supports it, an AVX2+FMA variant chosen at runtime. The scalar versions are
// the single source of truth (instantiations of the generic templates); the
// vectorized ones are equivalence-tested against them.
struct KernelTable {
  // C = A * B, 4x4 complex, row-major interleaved.
  void (*mul4)(const C64* a, const C64* b, C64* c);
  // C = A * B, 16x16.
  void (*mul16)(const C64* a, const C64* b, C64* c);
  // Given the embedded bilateral gate E (16x16) and a single-pair state rho
  // (4x4), compute the four unnormalized measurement-branch blocks
  //   B_m[r,c] = (E (rho ⊗ rho) E†)[4r+m, 4c+m]
  // and their probabilities p_m = Re tr B_m. B is four 4x4 matrices.
  void (*branch_blocks)(const C64* e, const C64* rho, double* p, C64* b);
  const char* name;
};

enum class Backend { Auto, Scalar, Avx2 };

// Active table. Resolved once on first use: AVX2 when the CPU supports it and
// the build contains the variant, unless overridden by set_backend() or the
// PURIFY_KERNELS environment variable ("scalar" or "avx2").
const KernelTable& active();

// Force a backend (tests use this to compare variants). Throws ConfigError if
// the requested backend is unavailable on this machine/build.
void set_backend(Backend b);

// True when this build contains the AVX2 variant and the CPU reports support.
bool avx2_available();

const KernelTable& scalar_table();

}  // namespace purify::kernels
