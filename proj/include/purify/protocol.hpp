#pragma once
#include <array>
#include <vector>

#include "purify/density.hpp"
#include "purify/kernels.hpp"
#include "purify/kernels_ref.hpp"
#include "purify/matrix.hpp"

namespace purify {

// Branches with probability at or below this are undefined (no post-state);
// the post-state formula divides by p_i and needs a guard.
inline constexpr double kEpsP = 1e-12;

// Two branch concurrences within this of each other count as "multiple
// maxima" and their probabilities aggregate.
inline constexpr double kTieTol = 1e-9;

// Global basis convention for the two-pair register: qubits ordered
// (A1, B1, A2, B2), basis index = 8 a1 + 4 b1 + 2 a2 + b2. The kept pair is
// (A1, B1), the measured pair is (A2, B2); with this layout the full index
// splits as 4 * kept + measured.
struct QubitOrdering {
  static constexpr int index(int a1, int b1, int a2, int b2) {
    return 8 * a1 + 4 * b1 + 2 * a2 + b2;
  }
  static constexpr int kept(int a1, int b1) { return 2 * a1 + b1; }
  static constexpr int measured(int a2, int b2) { return 2 * a2 + b2; }
};

// The 16x16 unitary acting as U on (A1, A2) and as U on (B1, B2):
//   E[idx(a1',b1',a2',b2'), idx(a1,b1,a2,b2)]
//     = U[2a1'+a2', 2a1+a2] * U[2b1'+b2', 2b1+b2].
// Equivalent to P† (U ⊗ U) P for the qubit permutation
// (A1,B1,A2,B2) -> (A1,A2,B1,B2).
template <class T>
Mat<T, 16> embed_bilateral_t(const Mat<T, 4>& u) {
  Mat<T, 16> e;
  for (int a1p = 0; a1p < 2; ++a1p)
    for (int b1p = 0; b1p < 2; ++b1p)
      for (int a2p = 0; a2p < 2; ++a2p)
        for (int b2p = 0; b2p < 2; ++b2p) {
          const int row = QubitOrdering::index(a1p, b1p, a2p, b2p);
          for (int a1 = 0; a1 < 2; ++a1)
            for (int b1 = 0; b1 < 2; ++b1)
              for (int a2 = 0; a2 < 2; ++a2)
                for (int b2 = 0; b2 < 2; ++b2)
                  e(row, QubitOrdering::index(a1, b1, a2, b2)) =
                      u(2 * a1p + a2p, 2 * a1 + a2) * u(2 * b1p + b2p, 2 * b1 + b2);
        }
  return e;
}

// Checked wrapper: verifies unitarity within 1e-10.
Mat16 embed_bilateral(const Mat4& u);

// Unnormalized branch blocks and probabilities for one step; double goes
// through the dispatched kernel, other scalars through the reference
// implementation.
template <class T>
void branch_blocks(const Mat<T, 16>& e, const Mat<T, 4>& rho, std::array<T, 4>& p,
                   std::array<Mat<T, 4>, 4>& b) {
  if constexpr (std::is_same_v<T, double>) {
    kernels::active().branch_blocks(e.a.data(), rho.a.data(), p.data(), b[0].a.data());
  } else {
    kernels::ref_branch_blocks<T>(e.a.data(), rho.a.data(), p.data(), b[0].a.data());
  }
}

struct BranchPolicy {
  enum Kind { PerStateMax, EnsembleBranch } kind = PerStateMax;
  int branch = -1;  // meaningful for EnsembleBranch

  static BranchPolicy per_state_max() { return {PerStateMax, -1}; }
  static BranchPolicy ensemble(int l) { return {EnsembleBranch, l}; }
};

struct StepBranch {
  double probability = 0.0;
  bool defined = false;      // probability > eps_p
  Mat4 post_state;           // meaningful when defined
  double concurrence = 0.0;  // 0 when undefined
};

struct StepOutcome {
  std::array<StepBranch, 4> branches;
  double selected_concurrence = 0.0;       // C'
  double success_probability = 0.0;        // P
  std::vector<int> selected_branch_set;    // indices whose p were summed
};

// One full purification step (steps I-III): tensor two copies of rho, apply
// the bilateral gate, measure the (A2, B2) pair in the standard basis,
// post-select. Throws DegeneracyError when every branch probability is at or
// below eps_p.
StepOutcome purification_step(const Density4& rho, const Mat4& u, BranchPolicy policy,
                              double eps_p = kEpsP);

// Same, but from a pre-embedded gate (saves re-embedding across an ensemble).
StepOutcome purification_step_embedded(const Mat4& rho, const Mat16& e, BranchPolicy policy,
                                       double eps_p = kEpsP);

}  // namespace purify
