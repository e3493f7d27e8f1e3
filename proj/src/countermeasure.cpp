#include "snspd/countermeasure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace snspd {

PulseFeatures extract_features(const AnalogTrace& trace, const Click& click,
                               double nominal_recovery) {
  PulseFeatures f;
  const auto n = trace.samples.size();
  if (n < 2) return f;
  const auto idx_of = [&](double t) {
    const auto i = static_cast<std::ptrdiff_t>((t - trace.t0) / trace.dt);
    return std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1);
  };
  const std::size_t i_cross = static_cast<std::size_t>(idx_of(click.t_cross));
  if (i_cross + 2 >= n) return f;

  // Peak within 50 ns of the crossing.
  const std::size_t i_stop =
      static_cast<std::size_t>(idx_of(click.t_cross + 50e-9));
  std::size_t i_peak = i_cross;
  for (std::size_t i = i_cross; i <= i_stop; ++i)
    if (trace.samples[i] > trace.samples[i_peak]) i_peak = i;
  f.peak_v = trace.samples[i_peak];
  if (!(f.peak_v > 0.0)) return f;

  // Leading edge: walk back from the peak to the last sub-10% sample, then
  // interpolate the 10% and 90% crossings.
  const double v10 = 0.1 * f.peak_v, v90 = 0.9 * f.peak_v;
  std::size_t i_base = i_cross;
  while (i_base > 0 && trace.samples[i_base] > v10) --i_base;
  double t10 = trace.time_of(i_base), t90 = trace.time_of(i_peak);
  for (std::size_t i = i_base; i < i_peak; ++i) {
    const double a = trace.samples[i], b = trace.samples[i + 1];
    if (a < v10 && b >= v10)
      t10 = trace.time_of(i) + (v10 - a) / (b - a) * trace.dt;
    if (a < v90 && b >= v90) {
      t90 = trace.time_of(i) + (v90 - a) / (b - a) * trace.dt;
      break;
    }
  }
  f.rise_10_90 = std::max(t90 - t10, trace.dt * 1e-3);

  // Area over [t_cross - 20 ns, t_cross + 100 ns].
  const std::size_t a0 = static_cast<std::size_t>(idx_of(click.t_cross - 20e-9));
  const std::size_t a1 = static_cast<std::size_t>(idx_of(click.t_cross + 100e-9));
  double area = 0.0;
  for (std::size_t i = a0; i < a1; ++i)
    area += 0.5 * (trace.samples[i] + trace.samples[i + 1]) * trace.dt;
  f.area = area;

  // Plateau: level continuously above half peak for > 5x nominal recovery.
  const double hold_needed = 5.0 * nominal_recovery;
  double held = 0.0;
  f.plateau_flag = false;
  for (std::size_t i = i_peak; i + 1 < n; ++i) {
    if (trace.samples[i] > 0.5 * f.peak_v) {
      held += trace.dt;
      if (held > hold_needed) {
        f.plateau_flag = true;
        break;
      }
    } else {
      break;
    }
  }

  // Exponential fit to the falling segment: log-linear least squares over
  // samples between the peak and the first drop below 5% of peak, capped at
  // 4x nominal recovery. A non-decaying segment yields a clamped large tau.
  const std::size_t f1 = std::min(
      n - 1, i_peak + static_cast<std::size_t>(4.0 * nominal_recovery / trace.dt));
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t i = i_peak; i <= f1; ++i) {
    const double v = trace.samples[i];
    if (v < 0.05 * f.peak_v) break;
    const double x = trace.time_of(i) - trace.time_of(i_peak);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) return f;  // recovery_tau stays invalid
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom <= 0.0) return f;
  const double slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
  constexpr double kTauClamp = 1e-5;
  f.recovery_tau = slope < -1.0 / kTauClamp ? -1.0 / slope : kTauClamp;
  f.valid = true;
  return f;
}

namespace {

std::array<double, 5> feature_vector(const PulseFeatures& f) {
  return {f.peak_v, f.rise_10_90, f.recovery_tau, f.area,
          f.plateau_flag ? 1.0 : 0.0};
}

}  // namespace

ShapeModel train_shape_model(const std::vector<PulseFeatures>& real,
                             const std::vector<PulseFeatures>& fake) {
  if (real.size() < 2 || fake.size() < 2)
    throw std::invalid_argument("shape model needs >= 2 pulses per class");
  ShapeModel m;
  std::array<double, 5> mu_r{}, mu_f{}, var{};
  std::size_t n_r = 0, n_f = 0;
  for (const auto& f : real) {
    if (!f.valid) continue;
    const auto v = feature_vector(f);
    for (int i = 0; i < 5; ++i) mu_r[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
    ++n_r;
  }
  for (const auto& f : fake) {
    if (!f.valid) continue;
    const auto v = feature_vector(f);
    for (int i = 0; i < 5; ++i) mu_f[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
    ++n_f;
  }
  if (n_r < 2 || n_f < 2)
    throw std::invalid_argument("shape model needs >= 2 valid pulses per class");
  for (auto& x : mu_r) x /= static_cast<double>(n_r);
  for (auto& x : mu_f) x /= static_cast<double>(n_f);
  for (std::size_t i = 0; i < 5; ++i) m.mean[i] = 0.5 * (mu_r[i] + mu_f[i]);

  auto accumulate_var = [&](const std::vector<PulseFeatures>& fs,
                            const std::array<double, 5>& mu) {
    for (const auto& f : fs) {
      if (!f.valid) continue;
      const auto v = feature_vector(f);
      for (std::size_t i = 0; i < 5; ++i)
        var[i] += (v[i] - mu[i]) * (v[i] - mu[i]);
    }
  };
  accumulate_var(real, mu_r);
  accumulate_var(fake, mu_f);
  for (std::size_t i = 0; i < 5; ++i) {
    m.scale[i] = std::sqrt(var[i] / static_cast<double>(n_r + n_f - 2));
    if (!(m.scale[i] > 0.0)) m.scale[i] = 1.0;
    m.weight[i] = (mu_f[i] - mu_r[i]) / m.scale[i];
  }
  m.bias = 0.0;  // scores are centered on the class midpoint
  return m;
}

std::pair<PulseLabel, double> classify(const PulseFeatures& f, const ShapeModel& m) {
  if (!f.valid) return {PulseLabel::Abstain, 0.0};
  const auto v = feature_vector(f);
  double score = m.bias;
  for (std::size_t i = 0; i < 5; ++i)
    score += m.weight[i] * (v[i] - m.mean[i]) / m.scale[i];
  return {score > 0.0 ? PulseLabel::Fake : PulseLabel::Real, score};
}

double auc_from_scores(const std::vector<double>& real_scores,
                       const std::vector<double>& fake_scores) {
  if (real_scores.empty() || fake_scores.empty())
    throw std::invalid_argument("auc needs scores from both classes");
  double wins = 0.0;
  for (double f : fake_scores)
    for (double r : real_scores) {
      if (f > r)
        wins += 1.0;
      else if (f == r)
        wins += 0.5;
    }
  return wins / (static_cast<double>(real_scores.size()) *
                 static_cast<double>(fake_scores.size()));
}

std::vector<RocPoint> roc_curve(const std::vector<double>& real_scores,
                                const std::vector<double>& fake_scores) {
  std::vector<double> thresholds;
  thresholds.reserve(real_scores.size() + fake_scores.size() + 2);
  thresholds.insert(thresholds.end(), real_scores.begin(), real_scores.end());
  thresholds.insert(thresholds.end(), fake_scores.begin(), fake_scores.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  std::vector<RocPoint> roc;
  roc.reserve(thresholds.size() + 1);
  auto rate_above = [](const std::vector<double>& xs, double thr) {
    std::size_t k = 0;
    for (double x : xs)
      if (x >= thr) ++k;
    return static_cast<double>(k) / static_cast<double>(xs.size());
  };
  for (double thr : thresholds)
    roc.push_back({thr, rate_above(fake_scores, thr), rate_above(real_scores, thr)});
  return roc;
}

PulseCorpus collect_pulse_corpus(const DeviceParams& device,
                                 const CircuitParams& circuit,
                                 const AttackParams& attack, int n_real,
                                 int n_fake, std::uint64_t seed, Execution exec) {
  const double threshold = 0.5 * single_photon_pulse_height(device, circuit);
  const double nominal_recovery =
      circuit.shunted() ? device.l_k / *circuit.r_shunt : device.l_k / 50.0;
  PulseCorpus corpus;

  // Real pulses: high-rate Poisson illumination, a few windows in parallel.
  {
    const double window = 60e-6;
    const double rate = 4e6 / device.eta;  // ~4 MHz detected
    const int per_window = 60;
    const int windows = (n_real + per_window - 1) / per_window;
    auto batches = run_trials<std::vector<PulseFeatures>>(
        static_cast<std::size_t>(windows), exec, [&](std::size_t w) {
          Rng rng(derive_seed(seed, 0x100 + w));
          const OpticalWaveform train = photon_train(rate, window, 1550e-9, rng);
          EngineOptions eng;
          eng.dt = 25e-12;
          eng.record_state_log = false;
          eng.seed = derive_seed(seed, 0x200 + w);
          const SimulationRecord rec =
              simulate(device, circuit, train, 0.0, window, eng);
          const ClickStream cs = discriminate(rec.trace, threshold);
          std::vector<PulseFeatures> fs;
          for (const auto& c : cs.clicks) {
            if (c.t_cross + 150e-9 > window) break;
            fs.push_back(extract_features(rec.trace, c, nominal_recovery));
          }
          return fs;
        });
    for (auto& b : batches)
      for (auto& f : b) {
        if (static_cast<int>(corpus.real.size()) >= n_real) break;
        corpus.real.push_back(f);
      }
  }

  // Fake pulses: standard carve-outs at a relaxed 500 ns spacing so the
  // post-pulse window is unobstructed.
  {
    const int per_sim = 10;
    const int sims = (n_fake + per_sim - 1) / per_sim;
    const double spacing = 500e-9;
    std::vector<double> plan(per_sim);
    for (int k = 0; k < per_sim; ++k)
      plan[static_cast<std::size_t>(k)] = attack.settle + spacing * (k + 1);
    const double blind_end = plan.back() + spacing;
    const ControlDiagram diagram =
        build_control_diagram(attack, plan, 0.0, blind_end);
    auto batches = run_trials<std::vector<PulseFeatures>>(
        static_cast<std::size_t>(sims), exec, [&](std::size_t w) {
          EngineOptions eng;
          eng.dt = 25e-12;
          eng.record_state_log = false;
          eng.seed = derive_seed(seed, 0x300 + w);
          const SimulationRecord rec =
              simulate(device, circuit, diagram.target, 0.0, blind_end, eng);
          const ClickStream cs = discriminate(rec.trace, threshold);
          std::vector<PulseFeatures> fs;
          for (double ref : plan)
            for (const auto& c : cs.clicks)
              if (std::abs(c.t_cross - ref) <= 2e-9) {
                fs.push_back(extract_features(rec.trace, c, nominal_recovery));
                break;
              }
          return fs;
        });
    for (auto& b : batches)
      for (auto& f : b) {
        if (static_cast<int>(corpus.fake.size()) >= n_fake) break;
        corpus.fake.push_back(f);
      }
  }
  return corpus;
}

namespace {

double v2_one_window(const DeviceParams& device, const CircuitParams& circuit,
                     const OpticalWaveform& input, double lead, double rep,
                     double quiescent_offset_v, std::uint64_t seed) {
  EngineOptions eng;
  eng.dt = 25e-12;
  eng.record_traces = false;
  eng.log_interval = 1e-9;
  eng.seed = seed;
  const SimulationRecord rec =
      simulate(device, circuit, input, 0.0, lead + rep, eng);
  return dc_monitor(rec.state_log, circuit, rep, quiescent_offset_v);
}

}  // namespace

V2Sweep v2_sweep(const DeviceParams& device, const CircuitParams& circuit,
                 const std::vector<double>& duty_grid, const AttackParams& attack,
                 std::uint64_t seed, double quiescent_offset_v, Execution exec) {
  for (double d : duty_grid)
    if (!(d >= 0.0 && d <= 0.5))
      throw std::invalid_argument("duty grid must lie in [0, 0.5]");
  const double rep = 100e-6;  // 10 kHz repetition
  const double lead = 100e-9;

  auto v2s = run_trials<double>(
      duty_grid.size(), exec, [&](std::size_t i) {
        const double duty = duty_grid[i];
        OpticalWaveform w;
        if (duty > 0.0)
          w.segments.push_back({lead, lead + duty * rep, attack.p_blind});
        return v2_one_window(device, circuit, w, lead, rep, quiescent_offset_v,
                             derive_seed(seed, i));
      });

  V2Sweep sweep;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  const auto n = static_cast<double>(duty_grid.size());
  for (std::size_t i = 0; i < duty_grid.size(); ++i) {
    sweep.points.push_back({duty_grid[i], v2s[i]});
    sx += duty_grid[i];
    sy += v2s[i];
    sxx += duty_grid[i] * duty_grid[i];
    sxy += duty_grid[i] * v2s[i];
    syy += v2s[i] * v2s[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom > 0.0 && duty_grid.size() >= 2) {
    sweep.slope_mv = (n * sxy - sx * sy) / denom;
    sweep.intercept_mv = (sy - sweep.slope_mv * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& pt : sweep.points) {
      const double fit = sweep.intercept_mv + sweep.slope_mv * pt.duty;
      ss_res += (pt.v2_mv - fit) * (pt.v2_mv - fit);
    }
    sweep.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return sweep;
}

EvasionResult v2_evasion(const DeviceParams& device, const CircuitParams& circuit,
                         const AttackParams& attack, double duty,
                         double honest_rate_hz, int n_windows, std::uint64_t seed,
                         double alarm_threshold_mv, Execution exec) {
  if (!(duty > 0.0 && duty <= 0.5))
    throw std::invalid_argument("evasion duty must be in (0, 0.5]");
  const double rep = 100e-6;
  const double lead = 100e-9;
  const double blind = duty * rep;

  // Normal operation: honest traffic only, n_windows independent windows.
  auto normals = run_trials<double>(
      static_cast<std::size_t>(n_windows), exec, [&](std::size_t w) {
        Rng rng(derive_seed(seed, 0x400 + w));
        const OpticalWaveform train =
            photon_train(honest_rate_hz, lead + rep, 1550e-9, rng);
        return v2_one_window(device, circuit, train, lead, rep, 0.0,
                             derive_seed(seed, 0x500 + w));
      });
  double mean = std::accumulate(normals.begin(), normals.end(), 0.0) /
                static_cast<double>(normals.size());
  double var = 0.0;
  for (double v : normals) var += (v - mean) * (v - mean);
  var /= static_cast<double>(normals.size() - 1);

  // Attack window: same traffic plus the blinding burst with carve-outs at
  // the maximum legal rate.
  const double period = attack.tau_off + attack.tau_rearm;
  std::vector<double> plan;
  for (double t = lead + attack.settle + period; t < lead + blind - period;
       t += period)
    plan.push_back(t);
  const ControlDiagram diagram =
      build_control_diagram(attack, plan, lead, lead + blind);
  OpticalWaveform input = diagram.target;
  Rng rng(derive_seed(seed, 0x600));
  const OpticalWaveform train = photon_train(honest_rate_hz, lead + rep, 1550e-9, rng);
  input.photons = train.photons;

  EvasionResult res;
  res.duty = duty;
  res.alarm_threshold_mv = alarm_threshold_mv;
  res.fake_rate_hz = static_cast<double>(plan.size()) / rep;
  res.v2_attack_mv =
      v2_one_window(device, circuit, input, lead, rep, 0.0, derive_seed(seed, 0x601));
  res.v2_normal_mean_mv = mean;
  res.v2_normal_sigma_mv = std::sqrt(var);
  res.within_band =
      std::abs(res.v2_attack_mv - mean) <= 3.0 * res.v2_normal_sigma_mv;
  res.under_alarm = res.v2_attack_mv < alarm_threshold_mv;
  return res;
}

}  // namespace snspd
