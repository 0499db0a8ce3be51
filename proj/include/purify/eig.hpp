#pragma once
#include <array>

#include "purify/matrix.hpp"

namespace purify {

// Eigenvalues of a general (not necessarily Hermitian) 4x4 complex matrix.
struct Spectrum {
  std::array<C64, 4> values;  // unordered
};

// Hessenberg reduction + shifted QR iteration. Throws NumericalError when the
// iteration cap is hit without deflating every eigenvalue.
Spectrum eig_general(const Mat4& m);

// Eigenvalues (ascending) of a Hermitian matrix by cyclic complex Jacobi.
// Only the Hermitian part of the input is read.
template <int N>
std::array<double, N> eig_hermitian_values(const Mat<double, N>& h);

extern template std::array<double, 4> eig_hermitian_values<4>(const Mat4&);
extern template std::array<double, 16> eig_hermitian_values<16>(const Mat16&);

// Singular values (descending) of the leading r x r block, one-sided Jacobi.
// Trailing entries of the result are zero.
std::array<double, 4> svd_values4(const Mat4& g, int r);

// Diagonally pivoted Cholesky factorization of a PSD 4x4 matrix:
// rho ≈ L L† with L stored in original row indexing, 4 x rank.
// Pivots below max(rel_tol * first_pivot, 0) stop the factorization; a pivot
// below -neg_tol reports failure through the return flag.
struct PivotedCholesky {
  Mat4 l;       // columns 0..rank-1 meaningful
  int rank;
  bool psd_ok;  // false when a pivot dipped below -neg_tol
  double worst_pivot;
};
PivotedCholesky pivoted_cholesky(const Mat4& rho, double neg_tol);

}  // namespace purify
