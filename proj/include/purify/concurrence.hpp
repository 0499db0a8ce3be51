#pragma once
#include <array>

#include "purify/density.hpp"
#include "purify/dual.hpp"
#include "purify/eig.hpp"
#include "purify/errors.hpp"
#include "purify/matrix.hpp"

namespace purify {

// kron(sigma_y, sigma_y): the spin-flip conjugation matrix, anti-diagonal
// (-1, 1, 1, -1), real and symmetric.
Mat4 spin_flip_matrix();

// The four lambda_i of the concurrence formula, descending: square roots of
// the eigenvalues of rho (sy⊗sy) rho* (sy⊗sy).
//
// Implementation route: factor rho = L L† (diagonally pivoted Cholesky, rank
// revealing), form G = L† Y L* with Y the spin-flip matrix, and return the
// singular values of G. G is complex symmetric, so G G* = G G† and the
// nonzero eigenvalues of the spin-flip product equal sigma_i(G)^2 exactly;
// the singular-value route avoids the sqrt-of-eigenvalue blowup of the
// non-Hermitian product at rank-deficient states.
std::array<double, 4> spin_flip_spectrum(const Mat4& rho);

// Wootters concurrence, in [0, 1]. The checked overload takes a validated
// density matrix; the unchecked one assumes validity (hot path). A computed
// value in (1, 1 + ceiling_tol] is rounding and clamps to 1; beyond that the
// input was not a density matrix and a NumericalError is thrown.
double concurrence(const Density4& rho);
double concurrence_unchecked(const Mat4& rho, double ceiling_tol = 1e-10);

// Ceiling tolerance for a state obtained by normalizing a measurement block
// by its probability p: the block carries absolute rounding error, so the
// normalized entries are off by O(eps / p) and the ceiling must widen by the
// same factor.
inline double concurrence_ceiling_tolerance(double p) { return 1e-10 + 1e-12 / p; }

// Forward-mode concurrence for gradient evaluation. Tracks the derivative of
// each lambda through the characteristic polynomial of the spin-flip product
// (coefficients via trace powers + Newton identities, root derivatives via
// implicit differentiation). `degenerate` is set wherever that breaks down —
// clustered roots, lambda ~ 0, or the max{0,.} kink — and the caller is
// expected to fall back to central differences for that coordinate.
struct DualConcurrence {
  Dual value;
  bool degenerate;
};
DualConcurrence concurrence_dual(const Mat<Dual, 4>& rho);

}  // namespace purify
