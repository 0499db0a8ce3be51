#include "purify/density.hpp"

#include <cmath>
#include <sstream>

#include "purify/eig.hpp"
#include "purify/errors.hpp"

namespace purify {

template <int N>
Density<N> validate_density(const Mat<double, N>& rho) {
  static_assert(N == 4 || N == 16, "density matrices are 4x4 or 16x16 here");

  double herm = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const C64 d = rho(i, j) - conj(rho(j, i));
      herm = std::max(herm, abs_c(d));
    }
  if (herm > kDensityTolerance) {
    std::ostringstream s;
    s << "not hermitian: max |rho - rho^dagger| entry = " << herm;
    throw ValidationError(s.str());
  }

  const C64 tr = trace(rho);
  const double tr_defect = std::hypot(tr.re - 1.0, tr.im);
  if (tr_defect > kDensityTolerance) {
    std::ostringstream s;
    s << "trace differs from one: |tr(rho) - 1| = " << tr_defect;
    throw ValidationError(s.str());
  }

  const auto ev = eig_hermitian_values<N>(rho);
  if (ev[0] < -kDensityTolerance) {
    std::ostringstream s;
    s << "not positive semidefinite: min eigenvalue = " << ev[0];
    throw ValidationError(s.str());
  }

  return Density<N>{rho};
}

template Density4 validate_density<4>(const Mat4&);
template Density16 validate_density<16>(const Mat16&);

}  // namespace purify
