#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "purify/cost.hpp"
#include "purify/lbfgsb.hpp"

namespace purify {

struct OptimizerConfig {
  int memory_pairs = 10;
  int max_iterations = 500;
  double projected_gradient_tolerance = 1e-8;
  GradientMode gradient_mode = GradientMode::CentralDifference;
  double cd_step = 1e-6;
  int restarts = 20;
  std::uint64_t restart_seed = 1;
  int threads = 1;
  // recurrence driver: hard cap on rounds; accuracy degrades past round 3
  int round_cap = 4;
};

struct StartRecord {
  std::string label;  // "cnot", "extra<i>", "seed<i>"
  double fbar = 1.0;
  int iterations = 0;
  opt::LbfgsStatus status = opt::LbfgsStatus::IterationLimit;
};

struct MultistartResult {
  GateAngles angles;
  double fbar = 1.0;
  int selected_branch = -1;  // meaningful under EnsembleBranch
  std::vector<StartRecord> starts;
};

// Runs lbfgs_minimize from the CNOT angles, from each caller-supplied extra
// start, and from `restarts` uniform draws in the box (one deterministic
// stream seeded by restart_seed, drawn sequentially so a larger restart
// count evaluates a superset of starts). Returns the best result.
MultistartResult multistart(const std::vector<Mat4>& states, BranchPolicy policy,
                            const OptimizerConfig& cfg,
                            const std::vector<GateAngles>& extra_starts = {});

struct IterationRecord {
  GateAngles angles;
  double fbar = 1.0;         // optimized ensemble-branch cost
  int selected_branch = 0;   // branch the ensemble advanced through
  double fbar_cnot = 1.0;    // CNOT baseline on the same ensemble
  int dropped = 0;           // samples lost to vanishing kept-branch p
  // per original sample index; NaN once a sample is dropped
  std::vector<double> c_out;
  std::vector<double> p_out;
};

struct RecurrenceResult {
  sampling::SampleSet samples;
  std::vector<IterationRecord> iterations;
  // product over rounds k of P_k^(2^(rounds-k)), per original sample
  std::vector<double> overall_success;
  std::vector<int> survivors;  // sample indices alive after the last round
  std::vector<std::string> warnings;
};

// Full recurrence driver: sample once, then per round optimize a fresh gate
// on the current ensemble (EnsembleBranch policy), advance every sample
// through the selected branch feeding the post-state back as both copies,
// and account success probabilities with the 2^(rounds-k) pair-consumption
// exponents. Samples whose kept branch drops below the probability floor are
// removed; losing more than 10% aborts with DegeneracyError.
RecurrenceResult recurrence_optimize(
    const families::StateFamily& family, const families::PdfSpec& pdf,
    int samples, int rounds, const OptimizerConfig& cfg,
    sampling::SequenceKind kind = sampling::SequenceKind::LowDiscrepancy,
    std::uint64_t sample_seed = 0);

}  // namespace purify
