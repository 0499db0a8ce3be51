#include "purify/cost.hpp"

#include <cmath>
#include <thread>

#include "purify/concurrence.hpp"
#include "purify/errors.hpp"

namespace purify {

namespace {

// body(begin, end) over [0, n) split across up to `threads` workers. The
// caller writes per-index slots, so the split never changes results.
template <class F>
void parallel_for(int n, int threads, const F& body) {
  if (threads <= 1 || n < 2 * threads) {
    body(0, n);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(chunk, n));
  for (auto& t : pool) t.join();
}

Mat4 normalized_hermitized(const Mat4& b, double p) {
  const double inv = 1.0 / p;
  Mat4 post;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      post(r, c) = (0.5 * inv) * (b(r, c) + conj(b(c, r)));
  return post;
}

}  // namespace

const char* to_string(GradientMode m) {
  return m == GradientMode::Dual ? "dual" : "central-difference";
}

GradientMode gradient_mode_from_string(const std::string& s) {
  if (s == "dual") return GradientMode::Dual;
  if (s == "central-difference") return GradientMode::CentralDifference;
  throw ConfigError("unknown gradient mode " + s +
                    "; expected dual or central-difference");
}

std::vector<Mat4> make_ensemble(const families::StateFamily& fam,
                                const sampling::SampleSet& samples) {
  std::vector<Mat4> states;
  states.reserve(samples.points.size());
  for (const auto& pt : samples.points) states.push_back(fam.build(pt.data()).m);
  return states;
}

void branch_concurrences(const Mat16& e, const Mat4& rho,
                         std::array<double, 4>& c, std::array<double, 4>& p) {
  std::array<Mat4, 4> b;
  branch_blocks<double>(e, rho, p, b);
  for (int l = 0; l < 4; ++l) {
    if (p[l] > kEpsP)
      c[l] = concurrence_unchecked(normalized_hermitized(b[l], p[l]),
                                   concurrence_ceiling_tolerance(p[l]));
    else
      c[l] = 0.0;
  }
}

namespace {

// c[j][l] for the whole ensemble
void ensemble_branch_concurrences(const Mat16& e, const std::vector<Mat4>& states,
                                  std::vector<std::array<double, 4>>& c,
                                  int threads) {
  const int n = static_cast<int>(states.size());
  c.resize(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](int begin, int end) {
    std::array<double, 4> p;
    for (int j = begin; j < end; ++j)
      branch_concurrences(e, states[j], c[static_cast<std::size_t>(j)], p);
  });
}

CostBreakdown reduce_cost(const std::vector<std::array<double, 4>>& c,
                          BranchPolicy policy) {
  CostBreakdown out;
  const double n = static_cast<double>(c.size());
  for (int l = 0; l < 4; ++l) {
    double s = 0.0;
    for (const auto& cj : c) s += cj[l];
    out.branch_average_concurrence[l] = s / n;
  }
  if (policy.kind == BranchPolicy::EnsembleBranch) {
    int best = 0;
    for (int l = 1; l < 4; ++l)
      if (out.branch_average_concurrence[l] >
          out.branch_average_concurrence[best])
        best = l;
    out.selected_branch = best;
    out.fbar = 1.0 - out.branch_average_concurrence[best];
  } else {
    double s = 0.0;
    for (const auto& cj : c)
      s += std::max(std::max(cj[0], cj[1]), std::max(cj[2], cj[3]));
    out.fbar = 1.0 - s / n;
  }
  return out;
}

}  // namespace

CostBreakdown average_cost(const GateAngles& a, const std::vector<Mat4>& states,
                           BranchPolicy policy, int threads) {
  if (states.empty()) throw ConfigError("average_cost needs a non-empty ensemble");
  check_angle_bounds(a);
  const Mat16 e = embed_bilateral_t<double>(su4_from_angles_t<double>(a.alpha));
  std::vector<std::array<double, 4>> c;
  ensemble_branch_concurrences(e, states, c, threads);
  return reduce_cost(c, policy);
}

double frozen_selection_cost(const GateAngles& a, const std::vector<Mat4>& states,
                             const std::vector<int>& selection, int threads) {
  const int n = static_cast<int>(states.size());
  const Mat16 e = embed_bilateral_t<double>(su4_from_angles_t<double>(a.alpha));
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  parallel_for(n, threads, [&](int begin, int end) {
    std::array<double, 4> p;
    std::array<Mat4, 4> b;
    for (int j = begin; j < end; ++j) {
      const int l = selection[static_cast<std::size_t>(j)];
      branch_blocks<double>(e, states[static_cast<std::size_t>(j)], p, b);
      if (p[l] > kEpsP)
        c[static_cast<std::size_t>(j)] =
            concurrence_unchecked(normalized_hermitized(b[l], p[l]),
                                  concurrence_ceiling_tolerance(p[l]));
    }
  });
  double s = 0.0;
  for (double v : c) s += v;
  return 1.0 - s / static_cast<double>(n);
}

std::vector<int> freeze_selection(const GateAngles& a, const std::vector<Mat4>& states,
                                  BranchPolicy policy, int threads) {
  const Mat16 e = embed_bilateral_t<double>(su4_from_angles_t<double>(a.alpha));
  std::vector<std::array<double, 4>> c;
  ensemble_branch_concurrences(e, states, c, threads);
  std::vector<int> sel(states.size(), 0);
  if (policy.kind == BranchPolicy::EnsembleBranch) {
    const CostBreakdown b = reduce_cost(c, policy);
    for (auto& s : sel) s = b.selected_branch;
  } else {
    for (std::size_t j = 0; j < c.size(); ++j) {
      int best = 0;
      for (int l = 1; l < 4; ++l)
        if (c[j][l] > c[j][best]) best = l;
      sel[j] = best;
    }
  }
  return sel;
}

namespace {

// second-order one-sided / central difference of the frozen cost along
// coordinate k, honoring the box
double cd_coordinate(const GateAngles& a, const std::vector<Mat4>& states,
                     const std::vector<int>& sel, int k, double h, double lo,
                     double hi, int threads) {
  auto at = [&](double v) {
    GateAngles shifted = a;
    shifted.alpha[static_cast<std::size_t>(k)] = v;
    return frozen_selection_cost(shifted, states, sel, threads);
  };
  const double x = a.alpha[static_cast<std::size_t>(k)];
  if (x - h >= lo && x + h <= hi)
    return (at(x + h) - at(x - h)) / (2.0 * h);
  if (x - h < lo)
    return (-3.0 * at(x) + 4.0 * at(x + h) - at(x + 2.0 * h)) / (2.0 * h);
  return (3.0 * at(x) - 4.0 * at(x - h) + at(x - 2.0 * h)) / (2.0 * h);
}

// forward-mode derivative along coordinate k; false when any sample hits a
// nondifferentiable point
bool dual_coordinate(const GateAngles& a, const std::vector<Mat4>& states,
                     const std::vector<int>& sel, int k, int threads,
                     double* out) {
  std::array<Dual, 15> da;
  for (int i = 0; i < 15; ++i)
    da[static_cast<std::size_t>(i)] =
        Dual(a.alpha[static_cast<std::size_t>(i)], i == k ? 1.0 : 0.0);
  const Mat<Dual, 16> e = embed_bilateral_t<Dual>(su4_from_angles_t<Dual>(da));

  const int n = static_cast<int>(states.size());
  std::vector<double> deriv(static_cast<std::size_t>(n), 0.0);
  std::vector<char> bad(static_cast<std::size_t>(n), 0);
  parallel_for(n, threads, [&](int begin, int end) {
    std::array<Dual, 4> p;
    std::array<Mat<Dual, 4>, 4> b;
    for (int j = begin; j < end; ++j) {
      Mat<Dual, 4> rho;
      for (int r = 0; r < 4; ++r)
        for (int cc = 0; cc < 4; ++cc)
          rho(r, cc) = widen<Dual>(states[static_cast<std::size_t>(j)](r, cc));
      branch_blocks<Dual>(e, rho, p, b);
      const int l = sel[static_cast<std::size_t>(j)];
      if (p[l].v <= kEpsP) continue;  // frozen-undefined: constant zero
      const Dual inv = Dual(1.0) / p[l];
      Mat<Dual, 4> post;
      for (int r = 0; r < 4; ++r)
        for (int cc = 0; cc < 4; ++cc)
          post(r, cc) = (b[l](r, cc) + conj(b[l](cc, r))) * (Dual(0.5) * inv);
      const DualConcurrence dc = concurrence_dual(post);
      if (dc.degenerate) {
        bad[static_cast<std::size_t>(j)] = 1;
        continue;
      }
      deriv[static_cast<std::size_t>(j)] = dc.value.d;
    }
  });
  for (char f : bad)
    if (f) return false;
  double s = 0.0;
  for (double v : deriv) s += v;
  *out = -s / static_cast<double>(n);
  return true;
}

}  // namespace

GradientResult gradient(const GateAngles& a, const std::vector<Mat4>& states,
                        BranchPolicy policy, GradientMode mode, double cd_step,
                        int threads) {
  if (states.empty()) throw ConfigError("gradient needs a non-empty ensemble");
  if (mode == GradientMode::CentralDifference &&
      !(cd_step >= 1e-8 && cd_step <= 1e-4))
    throw ConfigError("central-difference step must lie in [1e-8, 1e-4]");
  const std::vector<int> sel = freeze_selection(a, states, policy, threads);
  const auto bounds = angle_bounds();
  // fallback step for dual-mode coordinates flagged as nondifferentiable
  const double h =
      (cd_step >= 1e-8 && cd_step <= 1e-4) ? cd_step : 1e-6;
  GradientResult out;
  for (int k = 0; k < 15; ++k) {
    const double lo = bounds[static_cast<std::size_t>(k)].first;
    const double hi = bounds[static_cast<std::size_t>(k)].second;
    if (mode == GradientMode::Dual) {
      double g = 0.0;
      if (dual_coordinate(a, states, sel, k, threads, &g)) {
        out.g[static_cast<std::size_t>(k)] = g;
        continue;
      }
      ++out.cd_fallback_coords;
    }
    out.g[static_cast<std::size_t>(k)] =
        cd_coordinate(a, states, sel, k, h, lo, hi, threads);
  }
  return out;
}

}  // namespace purify
