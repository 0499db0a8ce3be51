#include "purify/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "purify/concurrence.hpp"
#include "purify/errors.hpp"

namespace purify {

Mat16 embed_bilateral(const Mat4& u) {
  const double defect = unitary_defect<4>(u);
  if (defect > 1e-10) {
    std::ostringstream s;
    s << "gate is not unitary: max |U U^dagger - I| entry = " << defect;
    throw ValidationError(s.str());
  }
  return embed_bilateral_t<double>(u);
}

StepOutcome purification_step_embedded(const Mat4& rho, const Mat16& e, BranchPolicy policy,
                                       double eps_p) {
  std::array<double, 4> p{};
  std::array<Mat4, 4> blocks;
  branch_blocks<double>(e, rho, p, blocks);

  StepOutcome out;
  bool any = false;
  for (int m = 0; m < 4; ++m) {
    StepBranch& br = out.branches[m];
    br.probability = p[m];
    br.defined = p[m] > eps_p;
    if (!br.defined) continue;
    any = true;
    // Normalize and hermitize (the block is Hermitian up to rounding).
    const double inv = 1.0 / p[m];
    Mat4 post;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        const C64 z = blocks[m](r, c);
        const C64 w = conj(blocks[m](c, r));
        post(r, c) = C64{0.5 * inv * (z.re + w.re), 0.5 * inv * (z.im + w.im)};
      }
    br.post_state = post;
    br.concurrence = concurrence_unchecked(post, concurrence_ceiling_tolerance(p[m]));
  }
  if (!any)
    throw DegeneracyError("every measurement branch has probability below the eps_p threshold");

  if (policy.kind == BranchPolicy::EnsembleBranch) {
    const int l = policy.branch;
    if (l < 0 || l > 3) throw ConfigError("ensemble branch index must be in 0..3");
    out.selected_branch_set = {l};
    out.success_probability = out.branches[l].probability;
    out.selected_concurrence = out.branches[l].concurrence;  // 0 when undefined
    return out;
  }

  double cmax = -1.0;
  for (int m = 0; m < 4; ++m)
    if (out.branches[m].defined) cmax = std::max(cmax, out.branches[m].concurrence);
  double psum = 0.0;
  for (int m = 0; m < 4; ++m)
    if (out.branches[m].defined && out.branches[m].concurrence >= cmax - kTieTol) {
      out.selected_branch_set.push_back(m);
      psum += out.branches[m].probability;
    }
  out.selected_concurrence = cmax;
  out.success_probability = psum;
  return out;
}

StepOutcome purification_step(const Density4& rho, const Mat4& u, BranchPolicy policy,
                              double eps_p) {
  const Mat16 e = embed_bilateral(u);
  return purification_step_embedded(rho.m, e, policy, eps_p);
}

}  // namespace purify
