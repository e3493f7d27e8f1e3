#pragma once

#include <cstdint>
#include <vector>

#include "snspd/analysis.hpp"
#include "snspd/stimulus.hpp"

namespace snspd {

struct ObjectiveMetrics {
  double p_click = 0.0;
  double p_premature = 0.0;
  double p_extra = 0.0;
  double afterpulse_per_fake = 0.0;
  double p_blind_norm = 0.0;  // p_blind / 1 uW
  bool feasible = false;      // p_click == 1 and p_premature == 0
};

// Scalarized objective: determinism first, afterpulses second, power last.
double objective(const ObjectiveMetrics& m);

struct EvaluationOptions {
  int clicks_per_trial = 50;        // determinism attempts = trials (split into sims)
  int afterpulse_trials = 100;      // 0 disables the afterpulse term
  double afterpulse_blind = 10e-6;  // reference operating point [s]
  double afterpulse_rep = 100e-6;   // [s]
  Execution exec = default_execution();
};

// Scores one parameter point: fake-click determinism over `trials` attempts
// plus the afterpulse rate at the reference operating point. trials >= 100.
ObjectiveMetrics evaluate(const AttackParams& params, const DeviceParams& device,
                          const CircuitParams& circuit, int trials,
                          std::uint64_t seed,
                          const EvaluationOptions& opts = {});

struct ParameterBounds {
  double p_blind_lo = 0.1e-6, p_blind_hi = 100e-6;
  double tau_off_lo = 1e-9, tau_off_hi = 50e-9;
  double tau_rearm_lo = 1e-9, tau_rearm_hi = 50e-9;
};

struct SearchLogEntry {
  AttackParams params;
  ObjectiveMetrics metrics;
  double j = 0.0;
  std::uint64_t eval_seed = 0;
};

struct OptimizerResult {
  AttackParams best;
  ObjectiveMetrics best_metrics;
  bool feasible_found = false;
  std::vector<SearchLogEntry> log;
};

// Coarse grid (>= 3 points per axis, log-spaced in power) followed by
// coordinate descent with geometric step shrink, stopping when the step
// falls below 1% of each range or the evaluation budget runs out.
// Deterministic given the seed; returns the best feasible point, or the best
// infeasible one with feasible_found == false. budget >= 27.
OptimizerResult optimize(const ParameterBounds& bounds, const DeviceParams& device,
                         const CircuitParams& circuit, int budget,
                         std::uint64_t seed, int trials_per_eval = 400,
                         const EvaluationOptions& opts = {});

}  // namespace snspd
