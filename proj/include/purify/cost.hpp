#pragma once
#include <array>
#include <vector>

#include "purify/families.hpp"
#include "purify/protocol.hpp"
#include "purify/sampling.hpp"
#include "purify/sun.hpp"

namespace purify {

enum class GradientMode { CentralDifference, Dual };
const char* to_string(GradientMode m);
GradientMode gradient_mode_from_string(const std::string& s);

// Builds the density-matrix ensemble for a sample set.
std::vector<Mat4> make_ensemble(const families::StateFamily& fam,
                                const sampling::SampleSet& samples);

// Per-sample step result for one embedded gate: c[l] and p[l] per branch;
// c[l] = 0 when branch l is undefined (p <= eps). Never throws: a sample
// with no defined branch contributes zero concurrence everywhere.
void branch_concurrences(const Mat16& e, const Mat4& rho,
                         std::array<double, 4>& c, std::array<double, 4>& p);

struct CostBreakdown {
  double fbar = 1.0;
  std::array<double, 4> branch_average_concurrence{};
  int selected_branch = -1;  // branch of the argmin under EnsembleBranch
};

// f-bar for a gate over the ensemble. EnsembleBranch: averages each branch's
// concurrence over the ensemble, picks the branch minimizing 1 - average
// (lowest index on ties) and reports it. PerStateMax: 1 - mean of per-state
// maxima. Per-sample values are computed in parallel when threads > 1; the
// reduction is serial in sample order, so results do not depend on the
// thread count.
CostBreakdown average_cost(const GateAngles& a, const std::vector<Mat4>& states,
                           BranchPolicy policy, int threads = 1);

// 1 - mean concurrence with a frozen branch choice per sample (selection[j]
// = branch index for sample j). The cheap evaluation used inside
// finite-difference gradients.
double frozen_selection_cost(const GateAngles& a, const std::vector<Mat4>& states,
                             const std::vector<int>& selection, int threads = 1);

// The branch selection average_cost would freeze at this point: a constant
// vector under EnsembleBranch, the per-sample argmax under PerStateMax.
std::vector<int> freeze_selection(const GateAngles& a, const std::vector<Mat4>& states,
                                  BranchPolicy policy, int threads = 1);

struct GradientResult {
  std::array<double, 15> g{};
  // Dual mode: coordinates that hit a nondifferentiable point (degenerate
  // spectrum or concurrence kink) and were redone by central differences.
  int cd_fallback_coords = 0;
};

// Gradient of average_cost's objective with the branch selection frozen at
// a. Central differences use the given step, one-sided (second order) at box
// faces; dual mode pushes forward-mode derivatives through the gate product,
// the step and the concurrence, falling back per coordinate when flagged.
GradientResult gradient(const GateAngles& a, const std::vector<Mat4>& states,
                        BranchPolicy policy, GradientMode mode, double cd_step,
                        int threads = 1);

}  // namespace purify
