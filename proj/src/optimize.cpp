#include "purify/optimize.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "purify/concurrence.hpp"
#include "purify/errors.hpp"

namespace purify {

namespace {

std::vector<double> to_vec(const GateAngles& a) {
  return std::vector<double>(a.alpha.begin(), a.alpha.end());
}

GateAngles to_angles(const std::vector<double>& v) {
  GateAngles a;
  for (std::size_t i = 0; i < 15; ++i) a.alpha[i] = v[i];
  return a;
}

void check_config(const OptimizerConfig& cfg) {
  if (cfg.memory_pairs < 1 || cfg.max_iterations < 1 || cfg.restarts < 1 ||
      !(cfg.projected_gradient_tolerance > 0.0) || cfg.threads < 1)
    throw ConfigError("optimizer config fields must be positive");
  if (cfg.gradient_mode == GradientMode::CentralDifference &&
      !(cfg.cd_step >= 1e-8 && cfg.cd_step <= 1e-4))
    throw ConfigError("central-difference step must lie in [1e-8, 1e-4]");
}

double ipow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
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

MultistartResult multistart(const std::vector<Mat4>& states, BranchPolicy policy,
                            const OptimizerConfig& cfg,
                            const std::vector<GateAngles>& extra_starts) {
  check_config(cfg);
  if (states.empty()) throw ConfigError("multistart needs a non-empty ensemble");

  const auto bounds = angle_bounds();
  std::vector<double> lo(15), hi(15);
  for (int i = 0; i < 15; ++i) {
    lo[static_cast<std::size_t>(i)] = bounds[static_cast<std::size_t>(i)].first;
    hi[static_cast<std::size_t>(i)] = bounds[static_cast<std::size_t>(i)].second;
  }

  opt::LbfgsOptions lopt;
  lopt.memory = cfg.memory_pairs;
  lopt.max_iterations = cfg.max_iterations;
  lopt.pg_tolerance = cfg.projected_gradient_tolerance;

  auto cost = [&](const std::vector<double>& v) {
    return average_cost(to_angles(v), states, policy, cfg.threads).fbar;
  };
  auto grad = [&](const std::vector<double>& v) {
    const GradientResult g = gradient(to_angles(v), states, policy,
                                      cfg.gradient_mode, cfg.cd_step, cfg.threads);
    return std::vector<double>(g.g.begin(), g.g.end());
  };

  std::vector<std::pair<std::string, GateAngles>> starts;
  starts.emplace_back("cnot", cnot_angles());
  for (std::size_t i = 0; i < extra_starts.size(); ++i)
    starts.emplace_back("extra" + std::to_string(i), extra_starts[i]);
  std::mt19937_64 rng(cfg.restart_seed);
  for (int i = 0; i < cfg.restarts; ++i) {
    GateAngles a;
    for (int k = 0; k < 15; ++k) {
      const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
      a.alpha[static_cast<std::size_t>(k)] =
          lo[static_cast<std::size_t>(k)] +
          (hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)]) * u;
    }
    starts.emplace_back("seed" + std::to_string(i), a);
  }

  MultistartResult best;
  best.fbar = std::numeric_limits<double>::infinity();
  for (const auto& [label, a0] : starts) {
    const opt::LbfgsResult r =
        opt::lbfgs_minimize(cost, grad, to_vec(a0), lo, hi, lopt);
    best.starts.push_back({label, r.f, r.iterations, r.status});
    if (r.f < best.fbar) {
      best.fbar = r.f;
      best.angles = to_angles(r.x);
    }
  }
  const CostBreakdown cb = average_cost(best.angles, states, policy, cfg.threads);
  best.fbar = cb.fbar;
  best.selected_branch = cb.selected_branch;
  return best;
}

RecurrenceResult recurrence_optimize(const families::StateFamily& family,
                                     const families::PdfSpec& pdf, int samples,
                                     int rounds, const OptimizerConfig& cfg,
                                     sampling::SequenceKind kind,
                                     std::uint64_t sample_seed) {
  check_config(cfg);
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (rounds > cfg.round_cap) {
    std::ostringstream s;
    s << "rounds = " << rounds << " exceeds the configured cap of "
      << cfg.round_cap;
    throw ConfigError(s.str());
  }

  RecurrenceResult res;
  if (rounds > 3)
    res.warnings.push_back(
        "numerical accuracy is known to degrade beyond three rounds; treat "
        "round-4 results as qualitative");

  res.samples = sampling::sample(pdf, samples, sample_seed, kind);
  std::vector<Mat4> states = make_ensemble(family, res.samples);
  std::vector<int> owner(states.size());
  for (std::size_t j = 0; j < owner.size(); ++j) owner[j] = static_cast<int>(j);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const int m = static_cast<int>(states.size());
  int total_dropped = 0;
  BranchPolicy policy = BranchPolicy::ensemble(-1);  // argmin over branches

  GateAngles prev_best;
  for (int k = 1; k <= rounds; ++k) {
    // The identity gate reproduces the incoming ensemble in every branch, so
    // seeding it guarantees this round can only improve on the last one.
    std::vector<GateAngles> extras;
    extras.push_back(GateAngles{});
    if (k > 1) extras.push_back(prev_best);

    const MultistartResult ms = multistart(states, policy, cfg, extras);
    prev_best = ms.angles;

    IterationRecord rec;
    rec.angles = ms.angles;
    rec.fbar = ms.fbar;
    rec.selected_branch = ms.selected_branch;
    rec.fbar_cnot = average_cost(cnot_angles(), states, policy, cfg.threads).fbar;
    rec.c_out.assign(static_cast<std::size_t>(m), nan);
    rec.p_out.assign(static_cast<std::size_t>(m), nan);

    const Mat16 e =
        embed_bilateral_t<double>(su4_from_angles_t<double>(ms.angles.alpha));
    std::vector<Mat4> next;
    std::vector<int> next_owner;
    next.reserve(states.size());
    next_owner.reserve(states.size());
    const int l = ms.selected_branch;
    for (std::size_t j = 0; j < states.size(); ++j) {
      std::array<double, 4> p;
      std::array<Mat4, 4> b;
      branch_blocks<double>(e, states[j], p, b);
      const std::size_t orig = static_cast<std::size_t>(owner[j]);
      if (p[l] <= kEpsP) {
        ++rec.dropped;
        continue;
      }
      const Mat4 post = normalized_hermitized(b[l], p[l]);
      rec.c_out[orig] = concurrence_unchecked(post, concurrence_ceiling_tolerance(p[l]));
      rec.p_out[orig] = p[l];
      next.push_back(post);
      next_owner.push_back(owner[j]);
    }
    total_dropped += rec.dropped;
    res.iterations.push_back(std::move(rec));
    if (total_dropped > m / 10) {
      std::ostringstream s;
      s << "dropped " << total_dropped << " of " << m
        << " samples to vanishing kept-branch probability";
      throw DegeneracyError(s.str());
    }
    states = std::move(next);
    owner = std::move(next_owner);
  }

  res.overall_success.assign(static_cast<std::size_t>(m), nan);
  for (int orig : owner) {
    double prod = 1.0;
    for (int k = 1; k <= rounds; ++k)
      prod *= ipow(res.iterations[static_cast<std::size_t>(k - 1)]
                       .p_out[static_cast<std::size_t>(orig)],
                   1 << (rounds - k));
    res.overall_success[static_cast<std::size_t>(orig)] = prod;
  }
  res.survivors = owner;
  return res;
}

}  // namespace purify
