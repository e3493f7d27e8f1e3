#include "snspd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snspd {

double objective(const ObjectiveMetrics& m) {
  return 10.0 * (1.0 - m.p_click) + 10.0 * m.p_premature +
         m.afterpulse_per_fake + 0.1 * m.p_blind_norm;
}

ObjectiveMetrics evaluate(const AttackParams& params, const DeviceParams& device,
                          const CircuitParams& circuit, int trials,
                          std::uint64_t seed, const EvaluationOptions& opts) {
  if (trials < 100) throw std::invalid_argument("evaluate: trials must be >= 100");
  params.validate();

  ObjectiveMetrics m;
  m.p_blind_norm = params.p_blind / 1e-6;

  const int clicks = std::max(1, opts.clicks_per_trial);
  const int sims = std::max(1, (trials + clicks - 1) / clicks);
  DeterminismReport det;
  try {
    det = fake_click_determinism(device, circuit, params, clicks, sims,
                                 derive_seed(seed, 1), opts.exec);
  } catch (const std::invalid_argument&) {
    // Degenerate plans (e.g. clicks that can never fit the blind window)
    // score as total failures rather than propagate.
    m.p_click = 0.0;
    m.feasible = false;
    return m;
  }
  m.p_click = det.p_click;
  m.p_premature = det.p_premature;
  m.p_extra = det.p_extra;

  if (opts.afterpulse_trials >= 100) {
    const double p_ap = afterpulse_probability(
        device, circuit, params, opts.afterpulse_blind, opts.afterpulse_rep,
        opts.afterpulse_trials, derive_seed(seed, 2), opts.exec);
    const double fakes = std::max(
        1.0, std::floor(opts.afterpulse_blind / (params.tau_off + params.tau_rearm)));
    m.afterpulse_per_fake = p_ap / fakes;
  }

  m.feasible = m.p_click >= 1.0 && m.p_premature <= 0.0;
  return m;
}

namespace {

struct Point {
  double p_blind, tau_off, tau_rearm;
};

AttackParams to_params(const Point& x, const AttackParams& base) {
  AttackParams p = base;
  p.p_blind = x.p_blind;
  p.tau_off = x.tau_off;
  p.tau_rearm = x.tau_rearm;
  return p;
}

}  // namespace

OptimizerResult optimize(const ParameterBounds& b, const DeviceParams& device,
                         const CircuitParams& circuit, int budget,
                         std::uint64_t seed, int trials_per_eval,
                         const EvaluationOptions& opts) {
  if (budget < 27) throw std::invalid_argument("optimize: budget must be >= 27");
  if (!(b.p_blind_lo > 0.0 && b.p_blind_hi > b.p_blind_lo &&
        b.tau_off_hi > b.tau_off_lo && b.tau_rearm_hi > b.tau_rearm_lo &&
        std::isfinite(b.p_blind_hi + b.tau_off_hi + b.tau_rearm_hi)))
    throw std::invalid_argument("optimize: bounds must be finite and ordered");

  OptimizerResult res;
  int evals = 0;

  auto clamp_point = [&](Point x) {
    x.p_blind = std::clamp(x.p_blind, b.p_blind_lo, b.p_blind_hi);
    x.tau_off = std::clamp(x.tau_off, b.tau_off_lo, b.tau_off_hi);
    x.tau_rearm = std::clamp(x.tau_rearm, b.tau_rearm_lo, b.tau_rearm_hi);
    return x;
  };

  // Feasible points always beat infeasible ones; ties break on J.
  auto better = [](bool fa, double ja, bool fb, double jb) {
    if (fa != fb) return fa;
    return ja < jb;
  };

  bool have_best = false;
  Point best_x{};
  double best_j = 0.0;

  auto probe = [&](Point x) {
    x = clamp_point(x);
    const std::uint64_t eval_seed = derive_seed(seed, static_cast<std::uint64_t>(evals));
    const AttackParams params = to_params(x, AttackParams{});
    const ObjectiveMetrics m =
        evaluate(params, device, circuit, trials_per_eval, eval_seed, opts);
    const double j = objective(m);
    res.log.push_back({params, m, j, eval_seed});
    ++evals;
    if (!have_best || better(m.feasible, j, res.best_metrics.feasible, best_j)) {
      have_best = true;
      best_x = x;
      best_j = j;
      res.best = params;
      res.best_metrics = m;
    }
    return j;
  };

  // Phase 1: coarse grid, log-spaced in blinding power.
  const int grid_budget = std::max(27, budget / 2);
  const int n = std::max(3, static_cast<int>(std::cbrt(static_cast<double>(grid_budget))));
  auto lin = [](double lo, double hi, int i, int count) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  };
  auto geo = [](double lo, double hi, int i, int count) {
    return lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
  };
  for (int i = 0; i < n && evals < budget; ++i)
    for (int j = 0; j < n && evals < budget; ++j)
      for (int k = 0; k < n && evals < budget; ++k)
        probe({geo(b.p_blind_lo, b.p_blind_hi, i, n),
               lin(b.tau_off_lo, b.tau_off_hi, j, n),
               lin(b.tau_rearm_lo, b.tau_rearm_hi, k, n)});

  // Phase 2: coordinate descent with geometric shrink.
  double step_p = (b.p_blind_hi - b.p_blind_lo) / 4.0;
  double step_off = (b.tau_off_hi - b.tau_off_lo) / 4.0;
  double step_rearm = (b.tau_rearm_hi - b.tau_rearm_lo) / 4.0;
  const double min_p = 0.01 * (b.p_blind_hi - b.p_blind_lo);
  const double min_off = 0.01 * (b.tau_off_hi - b.tau_off_lo);
  const double min_rearm = 0.01 * (b.tau_rearm_hi - b.tau_rearm_lo);

  while (evals < budget &&
         (step_p >= min_p || step_off >= min_off || step_rearm >= min_rearm)) {
    bool improved = false;
    for (int axis = 0; axis < 3 && evals < budget; ++axis) {
      const double step = axis == 0 ? step_p : axis == 1 ? step_off : step_rearm;
      for (double dir : {+1.0, -1.0}) {
        if (evals >= budget) break;
        Point x = best_x;
        if (axis == 0) x.p_blind += dir * step;
        if (axis == 1) x.tau_off += dir * step;
        if (axis == 2) x.tau_rearm += dir * step;
        x = clamp_point(x);
        const bool was_feasible = res.best_metrics.feasible;
        const double j_before = best_j;
        probe(x);
        if (better(res.best_metrics.feasible, best_j, was_feasible, j_before)) {
          improved = true;
          break;  // keep walking this axis next sweep
        }
      }
    }
    if (!improved) {
      step_p *= 0.5;
      step_off *= 0.5;
      step_rearm *= 0.5;
    }
  }

  res.feasible_found = res.best_metrics.feasible;
  return res;
}

}  // namespace snspd
