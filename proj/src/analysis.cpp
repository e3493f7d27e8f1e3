#include "snspd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "snspd/units.hpp"

namespace snspd {

ClickStream discriminate(const AnalogTrace& trace, double threshold,
                         double holdoff) {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
  ClickStream out;
  out.threshold = threshold;
  out.holdoff = holdoff;
  const auto& v = trace.samples;
  double last_click = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i] < threshold && v[i + 1] >= threshold)) continue;
    const double frac = (threshold - v[i]) / (v[i + 1] - v[i]);
    const double t_cross = trace.time_of(i) + frac * trace.dt;
    if (t_cross - last_click < holdoff) continue;
    last_click = t_cross;
    // Peak: local maximum until the signal falls back below threshold.
    double peak = v[i + 1];
    for (std::size_t j = i + 1; j < v.size() && v[j] >= threshold; ++j)
      peak = std::max(peak, v[j]);
    out.clicks.push_back({t_cross, peak});
  }
  return out;
}

namespace {

// Least-squares Gaussian via Gauss-Newton on (amplitude, mean, sigma).
GaussianFit fit_gaussian(const std::vector<double>& centers,
                         const std::vector<std::uint64_t>& counts,
                         double a0, double m0, double s0) {
  GaussianFit fit{a0, m0, s0, false};
  if (centers.size() < 3 || !(s0 > 0.0) || !(a0 > 0.0)) return fit;
  double a = a0, m = m0, s = s0;
  for (int iter = 0; iter < 200; ++iter) {
    double jtj[3][3] = {};
    double jtr[3] = {};
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double x = (centers[i] - m) / s;
      const double g = std::exp(-0.5 * x * x);
      const double f = a * g;
      const double r = static_cast<double>(counts[i]) - f;
      const double j[3] = {g, f * x / s, f * x * x / s};
      for (int p = 0; p < 3; ++p) {
        jtr[p] += j[p] * r;
        for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
      }
    }
    for (int p = 0; p < 3; ++p) jtj[p][p] *= 1.0 + 1e-9;
    // Solve the 3x3 normal equations by Gaussian elimination.
    double A[3][4];
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) A[p][q] = jtj[p][q];
      A[p][3] = jtr[p];
    }
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int row = col + 1; row < 3; ++row)
        if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
      if (std::abs(A[piv][col]) < 1e-300) return fit;
      std::swap(A[piv], A[col]);
      for (int row = 0; row < 3; ++row) {
        if (row == col) continue;
        const double fct = A[row][col] / A[col][col];
        for (int q = col; q < 4; ++q) A[row][q] -= fct * A[col][q];
      }
    }
    const double da = A[0][3] / A[0][0];
    const double dm = A[1][3] / A[1][1];
    const double ds = A[2][3] / A[2][2];
    a += da;
    m += dm;
    s += ds;
    if (!(a > 0.0) || !(s > 0.0) || !std::isfinite(a + m + s)) return fit;
    if (std::abs(dm) < 1e-4 * s && std::abs(ds) < 1e-4 * s &&
        std::abs(da) < 1e-4 * a)
      break;
  }
  fit = {a, m, s, true};
  return fit;
}

}  // namespace

JitterReport jitter_from_deltas(std::vector<double> deltas, double bin_width,
                                std::uint64_t n_missing) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be > 0");
  JitterReport rep;
  rep.n_missing = n_missing;
  rep.n_used = deltas.size();
  if (deltas.empty()) return rep;

  const auto [mn_it, mx_it] = std::minmax_element(deltas.begin(), deltas.end());
  const double lo = std::floor(*mn_it / bin_width) * bin_width;
  const double hi = std::ceil((*mx_it + 0.5 * bin_width) / bin_width) * bin_width;
  const auto n_bins = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(1, std::llround((hi - lo) / bin_width)));
  rep.counts.assign(n_bins, 0);
  rep.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    rep.bin_edges[i] = lo + static_cast<double>(i) * bin_width;
  for (double d : deltas) {
    auto k = static_cast<std::size_t>((d - lo) / bin_width);
    if (k >= n_bins) k = n_bins - 1;
    ++rep.counts[k];
  }

  // FWHM by linear interpolation at half the peak-bin height.
  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(rep.counts.begin(), rep.counts.end()) -
                               rep.counts.begin());
  const double half = static_cast<double>(rep.counts[peak]) / 2.0;
  auto center = [&](std::size_t i) { return lo + (static_cast<double>(i) + 0.5) * bin_width; };
  double left = center(peak) - 0.5 * bin_width;
  for (std::size_t i = peak; i-- > 0;) {
    if (static_cast<double>(rep.counts[i]) <= half) {
      const double c0 = static_cast<double>(rep.counts[i]);
      const double c1 = static_cast<double>(rep.counts[i + 1]);
      left = center(i) + (half - c0) / (c1 - c0) * bin_width;
      break;
    }
    left = center(i) - 0.5 * bin_width;
  }
  double right = center(peak) + 0.5 * bin_width;
  for (std::size_t i = peak + 1; i < n_bins; ++i) {
    if (static_cast<double>(rep.counts[i]) <= half) {
      const double c0 = static_cast<double>(rep.counts[i - 1]);
      const double c1 = static_cast<double>(rep.counts[i]);
      right = center(i - 1) + (c0 - half) / (c0 - c1) * bin_width;
      break;
    }
    right = center(i) + 0.5 * bin_width;
  }
  rep.fwhm = std::max(right - left, 0.0);
  if (rep.counts.size() < 2) rep.fwhm = std::min(rep.fwhm, bin_width);

  // Moments as the fit seed.
  const double mean0 =
      std::accumulate(deltas.begin(), deltas.end(), 0.0) / static_cast<double>(deltas.size());
  double var0 = 0.0;
  for (double d : deltas) var0 += (d - mean0) * (d - mean0);
  var0 /= static_cast<double>(deltas.size());
  std::vector<double> centers(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) centers[i] = center(i);
  rep.fit = fit_gaussian(centers, rep.counts,
                         static_cast<double>(rep.counts[peak]), center(peak),
                         std::max(std::sqrt(var0), bin_width / 4.0));

  if (rep.fit.valid) {
    const double cut = rep.fit.mean + 3.0 * rep.fit.sigma;
    std::uint64_t late = 0;
    for (double d : deltas)
      if (d > cut) ++late;
    rep.tail_fraction = static_cast<double>(late) / static_cast<double>(deltas.size());
  }
  return rep;
}

JitterReport jitter(const std::vector<SimulationRecord>& records,
                    const std::vector<double>& reference_times,
                    double threshold, double bin_width) {
  if (records.size() != reference_times.size())
    throw std::invalid_argument("one reference time per record required");
  std::vector<double> deltas;
  deltas.reserve(records.size());
  std::uint64_t missing = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ClickStream cs = discriminate(records[i].trace, threshold);
    const double ref = reference_times[i];
    bool found = false;
    for (const auto& c : cs.clicks) {
      if (std::abs(c.t_cross - ref) <= 5e-9) {
        deltas.push_back(c.t_cross - ref);
        found = true;
        break;
      }
    }
    if (!found) ++missing;
  }
  return jitter_from_deltas(std::move(deltas), bin_width, missing);
}

double single_photon_pulse_height(const DeviceParams& device,
                                  const CircuitParams& circuit) {
  DeviceParams dev = device;
  dev.eta = 1.0;
  dev.avalanche_prob = 0.0;
  CircuitParams cir = circuit;
  cir.noise_rms = 0.0;
  OpticalWaveform w;
  w.photons.push_back({40e-9, units::photon_energy(1550e-9)});
  EngineOptions opts;
  opts.record_state_log = false;
  const SimulationRecord rec = simulate(dev, cir, w, 0.0, 150e-9, opts);
  return *std::max_element(rec.trace.samples.begin(), rec.trace.samples.end());
}

JitterReport single_photon_jitter(const DeviceParams& device,
                                  const CircuitParams& circuit,
                                  const JitterExperimentOptions& opts) {
  const double threshold =
      opts.threshold > 0.0 ? opts.threshold
                           : 0.5 * single_photon_pulse_height(device, circuit);
  const double spacing = 200e-9;
  const double t_end = spacing * (opts.clicks_per_trial + 1);

  struct TrialOut {
    std::vector<double> deltas;
    std::uint64_t missing = 0;
  };
  auto outs = run_trials<TrialOut>(
      static_cast<std::size_t>(opts.trials), opts.exec, [&](std::size_t trial) {
        OpticalWaveform w;
        for (int k = 0; k < opts.clicks_per_trial; ++k)
          w.photons.push_back({spacing * (k + 1), units::photon_energy(1550e-9)});
        EngineOptions eng;
        eng.record_state_log = false;
        eng.seed = derive_seed(opts.seed, trial);
        const SimulationRecord rec = simulate(device, circuit, w, 0.0, t_end, eng);
        const ClickStream cs = discriminate(rec.trace, threshold);
        TrialOut out;
        std::size_t cursor = 0;
        for (const auto& ph : w.photons) {
          bool detected = false;
          for (const auto& ev : rec.events)
            if (ev.kind == EventKind::PhotonDetected && std::abs(ev.t - ph.t) < 1e-12) {
              detected = true;
              break;
            }
          if (!detected) continue;  // Bernoulli miss: no click expected
          bool found = false;
          while (cursor < cs.clicks.size()) {
            const double d = cs.clicks[cursor].t_cross - ph.t;
            if (d < -5e-9) {
              ++cursor;
              continue;
            }
            if (d <= 5e-9) {
              out.deltas.push_back(d);
              ++cursor;
              found = true;
            }
            break;
          }
          if (!found) ++out.missing;
        }
        return out;
      });

  std::vector<double> deltas;
  std::uint64_t missing = 0;
  for (auto& o : outs) {
    deltas.insert(deltas.end(), o.deltas.begin(), o.deltas.end());
    missing += o.missing;
  }
  return jitter_from_deltas(std::move(deltas), opts.bin_width, missing);
}

JitterReport fake_pulse_jitter(const DeviceParams& device,
                               const CircuitParams& circuit,
                               const AttackParams& attack,
                               const JitterExperimentOptions& opts) {
  const double threshold =
      opts.threshold > 0.0 ? opts.threshold
                           : 0.5 * single_photon_pulse_height(device, circuit);
  const double period = attack.tau_off + attack.tau_rearm;
  std::vector<double> plan(static_cast<std::size_t>(opts.clicks_per_trial));
  for (std::size_t k = 0; k < plan.size(); ++k)
    plan[k] = attack.settle + period * static_cast<double>(k + 1);
  const double blind_end = plan.back() + 3.0 * attack.tau_rearm;
  const ControlDiagram diagram =
      build_control_diagram(attack, plan, 0.0, blind_end);

  struct TrialOut {
    std::vector<double> deltas;
    std::uint64_t missing = 0;
  };
  auto outs = run_trials<TrialOut>(
      static_cast<std::size_t>(opts.trials), opts.exec, [&](std::size_t trial) {
        EngineOptions eng;
        eng.record_state_log = false;
        eng.seed = derive_seed(opts.seed, trial);
        const SimulationRecord rec =
            simulate(device, circuit, diagram.target, 0.0, blind_end + 20e-9, eng);
        const ClickStream cs = discriminate(rec.trace, threshold);
        TrialOut out;
        for (double ref : plan) {
          bool found = false;
          for (const auto& c : cs.clicks) {
            if (std::abs(c.t_cross - ref) <= 5e-9) {
              out.deltas.push_back(c.t_cross - ref);
              found = true;
              break;
            }
          }
          if (!found) ++out.missing;
        }
        return out;
      });

  std::vector<double> deltas;
  std::uint64_t missing = 0;
  for (auto& o : outs) {
    deltas.insert(deltas.end(), o.deltas.begin(), o.deltas.end());
    missing += o.missing;
  }
  return jitter_from_deltas(std::move(deltas), opts.bin_width, missing);
}

double afterpulse_probability(const DeviceParams& device,
                              const CircuitParams& circuit,
                              const AttackParams& attack, double blind_duration,
                              double rep_period, int trials, std::uint64_t seed,
                              Execution exec) {
  if (!(blind_duration > 0.0 && blind_duration < rep_period))
    throw std::invalid_argument("require 0 < blind_duration < rep_period");
  if (trials < 100) throw std::invalid_argument("afterpulse trials must be >= 100");

  const double lead = 100e-9;  // superconducting settle before blinding
  OpticalWaveform blinding;
  blinding.segments.push_back({lead, lead + blind_duration, attack.p_blind});
  const double blind_end = lead + blind_duration;
  const double t_end = lead + rep_period;

  auto hits = run_trials<std::uint8_t>(
      static_cast<std::size_t>(trials), exec, [&](std::size_t trial) {
        EngineOptions eng;
        eng.dt = 25e-12;
        eng.record_traces = false;
        eng.record_state_log = false;
        eng.stop_when_inert = true;
        eng.seed = derive_seed(seed, trial);
        const SimulationRecord rec =
            simulate(device, circuit, blinding, 0.0, t_end, eng);
        for (const auto& ev : rec.events)
          if (ev.kind == EventKind::PhotonDetected && ev.t > blind_end)
            return std::uint8_t{1};
        return std::uint8_t{0};
      });
  const auto total = std::accumulate(hits.begin(), hits.end(), 0ull);
  return static_cast<double>(total) / static_cast<double>(trials);
}

DeterminismReport fake_click_determinism(const DeviceParams& device,
                                         const CircuitParams& circuit,
                                         const AttackParams& attack,
                                         int n_clicks, int trials,
                                         std::uint64_t seed, Execution exec) {
  if (n_clicks < 1 || trials < 1)
    throw std::invalid_argument("n_clicks and trials must be >= 1");
  const double threshold = 0.5 * single_photon_pulse_height(device, circuit);
  const double period = attack.tau_off + attack.tau_rearm;
  std::vector<double> plan(static_cast<std::size_t>(n_clicks));
  for (std::size_t k = 0; k < plan.size(); ++k)
    plan[k] = attack.settle + period * static_cast<double>(k + 1);
  const double blind_end = plan.back() + 3.0 * attack.tau_rearm;
  const ControlDiagram diagram = build_control_diagram(attack, plan, 0.0, blind_end);
  const double onset_margin = 20e-9;

  struct TrialOut {
    std::uint64_t hits = 0, premature = 0, extra = 0, onset = 0;
  };
  auto outs = run_trials<TrialOut>(
      static_cast<std::size_t>(trials), exec, [&](std::size_t trial) {
        EngineOptions eng;
        eng.record_state_log = false;
        eng.seed = derive_seed(seed, trial);
        const SimulationRecord rec =
            simulate(device, circuit, diagram.target, 0.0, blind_end + 20e-9, eng);
        const ClickStream cs = discriminate(rec.trace, threshold);
        TrialOut out;
        std::vector<bool> matched(cs.clicks.size(), false);
        for (double ref : plan) {
          for (std::size_t i = 0; i < cs.clicks.size(); ++i) {
            if (matched[i]) continue;
            if (std::abs(cs.clicks[i].t_cross - ref) <= 2e-9) {
              matched[i] = true;
              ++out.hits;
              break;
            }
          }
        }
        for (std::size_t i = 0; i < cs.clicks.size(); ++i) {
          if (matched[i]) continue;
          const double t = cs.clicks[i].t_cross;
          if (t <= onset_margin) {
            ++out.onset;
            continue;
          }
          if (t > blind_end) continue;
          bool in_carve = false;
          for (double ref : plan)
            if (t >= ref - attack.tau_off && t < ref - 2e-9) {
              in_carve = true;
              break;
            }
          if (in_carve)
            ++out.premature;
          else
            ++out.extra;
        }
        return out;
      });

  DeterminismReport rep;
  rep.n_attempts = static_cast<std::uint64_t>(trials) * static_cast<std::uint64_t>(n_clicks);
  std::uint64_t hits = 0, premature = 0, extra = 0;
  for (const auto& o : outs) {
    hits += o.hits;
    premature += o.premature;
    extra += o.extra;
    rep.onset_clicks += o.onset;
  }
  const auto attempts = static_cast<double>(rep.n_attempts);
  rep.p_click = static_cast<double>(hits) / attempts;
  rep.p_premature = static_cast<double>(premature) / attempts;
  rep.p_extra = static_cast<double>(extra) / attempts;
  return rep;
}

}  // namespace snspd
