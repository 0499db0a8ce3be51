#pragma once
#include <functional>
#include <vector>

namespace purify::opt {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 500;
  double pg_tolerance = 1e-8;
  int max_line_steps = 40;
};

enum class LbfgsStatus { Converged, IterationLimit, LineSearchFailure };
const char* to_string(LbfgsStatus s);

struct LbfgsTracePoint {
  int iteration = 0;
  double f = 0.0;
  double pg_norm = 0.0;  // infinity norm of the projected gradient
};

struct LbfgsResult {
  std::vector<double> x;  // best point seen
  double f = 0.0;
  LbfgsStatus status = LbfgsStatus::IterationLimit;
  int iterations = 0;
  int evaluations = 0;  // cost calls (gradient calls = accepted iterations + 1)
  std::vector<LbfgsTracePoint> trace;
};

using CostFn = std::function<double(const std::vector<double>&)>;
using GradFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Box-constrained limited-memory BFGS: gradient projection identifies the
// active bounds, the two-loop recursion runs on the free coordinates, and an
// Armijo backtracking search moves along the projected direction. Always
// returns the best point seen; a failed line search sets the status instead
// of throwing.
LbfgsResult lbfgs_minimize(const CostFn& cost, const GradFn& grad,
                           std::vector<double> x0, const std::vector<double>& lo,
                           const std::vector<double>& hi,
                           const LbfgsOptions& options = {});

}  // namespace purify::opt
