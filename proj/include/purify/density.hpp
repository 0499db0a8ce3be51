#pragma once
#include "purify/matrix.hpp"

namespace purify {

// A matrix that has passed validate_density. Constructible only through
// validate_density (or explicitly by code that guarantees validity).
template <int N>
struct Density {
  Mat<double, N> m;
};

using Density4 = Density<4>;
using Density16 = Density<16>;

// Checks hermiticity (max entry defect <= 1e-10), unit trace (<= 1e-10) and
// positive semidefiniteness (min eigenvalue >= -1e-10). Each violation throws
// a ValidationError naming the condition and the measured magnitude.
template <int N>
Density<N> validate_density(const Mat<double, N>& rho);

extern template Density4 validate_density<4>(const Mat4&);
extern template Density16 validate_density<16>(const Mat16&);

inline constexpr double kDensityTolerance = 1e-10;

}  // namespace purify
