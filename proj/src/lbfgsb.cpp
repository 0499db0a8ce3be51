#include "purify/lbfgsb.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "purify/errors.hpp"

namespace purify::opt {

namespace {

using Vec = std::vector<double>;

Vec clip(Vec x, const Vec& lo, const Vec& hi) {
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::min(hi[i], std::max(lo[i], x[i]));
  return x;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double pg_inf_norm(const Vec& x, const Vec& g, const Vec& lo, const Vec& hi) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = std::min(hi[i], std::max(lo[i], x[i] - g[i]));
    m = std::max(m, std::fabs(x[i] - step));
  }
  return m;
}

struct Pair {
  Vec s, y;
  double rho;  // 1 / (y . s)
};

}  // namespace

const char* to_string(LbfgsStatus s) {
  switch (s) {
    case LbfgsStatus::Converged:
      return "converged";
    case LbfgsStatus::IterationLimit:
      return "iteration-limit";
    case LbfgsStatus::LineSearchFailure:
      return "line-search-failure";
  }
  return "";
}

LbfgsResult lbfgs_minimize(const CostFn& cost, const GradFn& grad, Vec x0,
                           const Vec& lo, const Vec& hi,
                           const LbfgsOptions& options) {
  const std::size_t n = x0.size();
  if (lo.size() != n || hi.size() != n)
    throw ConfigError("lbfgs bounds must match the variable count");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lo[i] <= hi[i])) throw ConfigError("lbfgs bounds must have lo <= hi");
  if (options.memory < 1 || options.max_iterations < 1 ||
      !(options.pg_tolerance > 0.0))
    throw ConfigError("lbfgs options must be positive");

  LbfgsResult res;
  Vec x = clip(std::move(x0), lo, hi);
  double fx = cost(x);
  ++res.evaluations;
  Vec gx = grad(x);

  res.x = x;
  res.f = fx;
  res.status = LbfgsStatus::IterationLimit;

  std::deque<Pair> mem;
  std::vector<char> active(n, 0);

  for (int it = 0; it < options.max_iterations; ++it) {
    res.iterations = it;
    const double pg = pg_inf_norm(x, gx, lo, hi);
    res.trace.push_back({it, fx, pg});
    if (pg <= options.pg_tolerance) {
      res.status = LbfgsStatus::Converged;
      break;
    }

    // bound i is active when x sits on it and the gradient pushes outward
    for (std::size_t i = 0; i < n; ++i) {
      const double span = hi[i] - lo[i];
      const double edge = 1e-10 * std::max(1.0, span);
      active[i] = (x[i] <= lo[i] + edge && gx[i] > 0.0) ||
                  (x[i] >= hi[i] - edge && gx[i] < 0.0);
    }

    // two-loop recursion on the free subspace
    Vec q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = active[i] ? 0.0 : gx[i];
    std::vector<double> alpha(mem.size());
    for (std::size_t k = mem.size(); k-- > 0;) {
      alpha[k] = mem[k].rho * dot(mem[k].s, q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * mem[k].y[i];
    }
    if (!mem.empty()) {
      const Pair& last = mem.back();
      const double yy = dot(last.y, last.y);
      const double gamma = yy > 0.0 ? 1.0 / (last.rho * yy) : 1.0;
      for (std::size_t i = 0; i < n; ++i) q[i] *= gamma;
    }
    for (std::size_t k = 0; k < mem.size(); ++k) {
      const double beta = mem[k].rho * dot(mem[k].y, q);
      for (std::size_t i = 0; i < n; ++i)
        q[i] += (alpha[k] - beta) * mem[k].s[i];
    }
    Vec d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = active[i] ? 0.0 : -q[i];

    double dg = dot(d, gx);
    if (!(dg < 0.0)) {
      // not a descent direction: restart from projected steepest descent
      mem.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = active[i] ? 0.0 : -gx[i];
      dg = dot(d, gx);
      if (!(dg < 0.0)) {
        // every free coordinate has zero gradient: only bound coordinates
        // remain, so the projected gradient test above will stop next round
        res.status = LbfgsStatus::Converged;
        break;
      }
    }

    // Armijo backtracking along the projected path
    const double c1 = 1e-4;
    bool accepted = false;
    Vec xn;
    double fn = fx;
    auto backtrack = [&](const Vec& dir) {
      double t = 1.0;
      for (int ls = 0; ls < options.max_line_steps; ++ls) {
        Vec trial(n);
        for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + t * dir[i];
        trial = clip(std::move(trial), lo, hi);
        const double ft = cost(trial);
        ++res.evaluations;
        // measure decrease against the step actually taken (post-projection)
        Vec moved(n);
        for (std::size_t i = 0; i < n; ++i) moved[i] = trial[i] - x[i];
        const double slope = dot(gx, moved);
        if (ft <= fx + c1 * slope && slope < 0.0) {
          xn = std::move(trial);
          fn = ft;
          accepted = true;
          return;
        }
        t *= 0.5;
      }
    };
    backtrack(d);
    if (!accepted) {
      // quasi-Newton step unusable here: drop the memory and try plain
      // projected steepest descent before declaring failure
      mem.clear();
      Vec sd(n);
      for (std::size_t i = 0; i < n; ++i) sd[i] = active[i] ? 0.0 : -gx[i];
      backtrack(sd);
    }
    if (!accepted) {
      res.status = LbfgsStatus::LineSearchFailure;
      break;
    }

    Vec gn = grad(xn);
    Pair pr;
    pr.s.resize(n);
    pr.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pr.s[i] = xn[i] - x[i];
      pr.y[i] = gn[i] - gx[i];
    }
    const double sy = dot(pr.s, pr.y);
    const double ss = std::sqrt(dot(pr.s, pr.s));
    const double yy = std::sqrt(dot(pr.y, pr.y));
    if (sy > 1e-10 * ss * yy && sy > 0.0) {
      pr.rho = 1.0 / sy;
      mem.push_back(std::move(pr));
      if (static_cast<int>(mem.size()) > options.memory) mem.pop_front();
    }

    x = std::move(xn);
    fx = fn;
    gx = std::move(gn);
    if (fx < res.f) {
      res.f = fx;
      res.x = x;
    }
    res.iterations = it + 1;
  }
  return res;
}

}  // namespace purify::opt
