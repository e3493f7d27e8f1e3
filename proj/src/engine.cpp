#include "snspd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace snspd {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::PhotonDetected: return "PHOTON_DETECTED";
    case EventKind::PhotonIgnored: return "PHOTON_IGNORED";
    case EventKind::BlindOnset: return "BLIND_ONSET";
    case EventKind::FakeEdge: return "FAKE_EDGE";
    case EventKind::ScRecovered: return "SC_RECOVERED";
    case EventKind::Latched: return "LATCHED";
  }
  return "?";
}

namespace {

// Hazard probabilities below this per step are treated as zero. Keeps the
// inert-tail early exit exact: once the substrate heat has decayed this far
// nothing can fire any more.
constexpr double kHazardFloor = 1e-16;

// Frozen per-step vector field; phase and hotspot kind change only at step
// boundaries.
struct StepField {
  double i_bias, r_shunt, inv_l_k, r_per_joule, r_cap;
  double inv_tau_th, inv_tau_sub, eta_abs;
  bool normal, current_source;

  void eval(double i, double e, double sub, double p, double& di, double& de,
            double& dsub) const {
    const double r = normal ? std::min(r_cap, r_per_joule * e) : 0.0;
    di = current_source ? 0.0 : ((i_bias - i) * r_shunt - i * r) * inv_l_k;
    const double cooling = e * inv_tau_th;
    de = i * i * r + eta_abs * p - cooling;
    dsub = cooling - sub * inv_tau_sub;
  }
};

}  // namespace

SimulationRecord simulate(const DeviceParams& device, const CircuitParams& circuit,
                          const OpticalWaveform& input, double t_begin,
                          double t_end, const EngineOptions& options) {
  device.validate();
  circuit.validate();
  input.validate();
  if (!(options.dt > 0.0 && options.dt <= 25e-12 + 1e-18))
    throw std::invalid_argument("engine dt must be in (0, 25 ps]");
  if (!(t_end > t_begin) || !std::isfinite(t_begin) || !std::isfinite(t_end))
    throw std::invalid_argument("t_span must be finite with t_end > t_begin");

  const double dt = options.dt;
  const auto n_steps = static_cast<std::size_t>(std::ceil((t_end - t_begin) / dt - 1e-9));
  const auto trace_every = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(options.trace_interval / dt)));
  const auto log_every = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(options.log_interval / dt)));

  Rng rng_physics(derive_seed(options.seed, 0x706879));
  Rng rng_noise(derive_seed(options.seed, 0x6e6f69));

  const double i_bias = circuit.i_bias();
  const bool current_source = !circuit.shunted();
  const double r_shunt = current_source ? 0.0 : *circuit.r_shunt;
  const double full_recovery = current_source ? 0.0 : 3.0 * device.l_k / r_shunt;

  SimulationRecord rec;
  if (options.record_traces) {
    rec.raw_trace.t0 = t_begin;
    rec.raw_trace.dt = dt * static_cast<double>(trace_every);
    rec.raw_trace.samples.reserve(n_steps / trace_every + 2);
  }
  if (options.record_state_log)
    rec.state_log.reserve(n_steps / log_every + 2);

  ElectroThermalState s;
  s.t = t_begin;
  s.i_d = i_bias;
  PowerCursor power(input);

  // Photon arrivals and scheduled hotspot onsets, in step-boundary indices.
  std::size_t photon_idx = 0;
  std::deque<std::size_t> pending_onsets;
  auto snap = [&](double t) {
    const double k = std::llround((t - t_begin) / dt);
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n_steps)));
  };

  // Bookkeeping for event classification.
  bool was_normal_ever = false;
  double t_last_sc_entry = -std::numeric_limits<double>::infinity();
  double t_normal_dark_start = 0.0;  // start of the lightless NORMAL stretch
  bool latched_emitted = false;

  const double inert_e_sub =
      device.ap_gain > 0.0 ? kHazardFloor / (device.ap_gain * dt)
                           : std::numeric_limits<double>::infinity();

  for (std::size_t n = 0;; ++n) {
    const double t = t_begin + static_cast<double>(n) * dt;
    const double p_opt = power.at(t);

    // Scheduled hotspot onsets (delayed cascades) land at this boundary.
    bool force_onset = false;
    while (!pending_onsets.empty() && pending_onsets.front() <= n) {
      pending_onsets.pop_front();
      force_onset = true;
    }

    // Photon arrivals snapped to this boundary.
    while (photon_idx < input.photons.size() &&
           snap(input.photons[photon_idx].t) <= n) {
      const double t_ph = input.photons[photon_idx].t;
      ++photon_idx;
      if (is_photosensitive(s, device) && rng_physics.bernoulli(device.eta)) {
        rec.events.push_back({t_ph, EventKind::PhotonDetected});
        std::size_t delay_steps = 0;
        if (device.avalanche_prob > 0.0 &&
            rng_physics.bernoulli(device.avalanche_prob))
          delay_steps = static_cast<std::size_t>(
              std::llround(rng_physics.exponential(device.avalanche_tau) / dt));
        if (delay_steps == 0)
          force_onset = true;
        else
          pending_onsets.push_back(n + delay_steps);
      } else {
        rec.events.push_back({t_ph, EventKind::PhotonIgnored});
      }
    }

    // Dark-count hazard while sensitive, driven by residual substrate heat.
    if (device.ap_gain > 0.0 && is_photosensitive(s, device)) {
      const double p_fire = device.ap_gain * s.e_sub * dt;
      if (p_fire >= kHazardFloor && rng_physics.bernoulli(p_fire)) {
        rec.events.push_back({t, EventKind::PhotonDetected});
        std::size_t delay_steps = 0;
        if (device.avalanche_prob > 0.0 &&
            rng_physics.bernoulli(device.avalanche_prob))
          delay_steps = static_cast<std::size_t>(
              std::llround(rng_physics.exponential(device.avalanche_tau) / dt));
        if (delay_steps == 0)
          force_onset = true;
        else
          pending_onsets.push_back(n + delay_steps);
      }
    }

    // Phase machine.
    const Phase before = s.phase;
    s = apply_transitions(s, device, p_opt, force_onset);
    if (before == Phase::Superconducting && s.phase == Phase::Normal) {
      was_normal_ever = true;
      t_normal_dark_start = t;
      if (!force_onset && s.hotspot == HotspotKind::Bright) {
        // Optically driven: a full-recovery transition is a blinding onset,
        // a partial-recovery one is a controlled fake edge.
        const bool full = !std::isfinite(t_last_sc_entry) ||
                          (t - t_last_sc_entry) > full_recovery;
        rec.events.push_back({t, full ? EventKind::BlindOnset : EventKind::FakeEdge});
      }
    } else if (before == Phase::Normal && s.phase == Phase::Superconducting) {
      t_last_sc_entry = t;
      latched_emitted = false;
      rec.events.push_back({t, EventKind::ScRecovered});
    }

    if (s.phase == Phase::Normal) {
      if (p_opt > 0.0) t_normal_dark_start = t;
      if (!latched_emitted && t - t_normal_dark_start > 100.0 * device.tau_th) {
        // Electrically self-sustained: stationary e_hs with no light.
        const double cooling = s.e_hs / device.tau_th;
        const double joule = s.i_d * s.i_d * s.r_hs;
        if (std::abs(joule - cooling) < 0.01 * cooling) {
          rec.events.push_back({t, EventKind::Latched});
          latched_emitted = true;
        }
      }
    }

    if (options.record_traces && n % trace_every == 0)
      rec.raw_trace.samples.push_back(raw_readout_voltage(s, circuit));
    if (options.record_state_log && n % log_every == 0) {
      s.t = t;
      rec.state_log.push_back(s);
    }

    if (n == n_steps) break;

    // Early exit for event-only runs: quiescent superconducting state, all
    // inputs consumed, hazard below per-step resolution for good.
    if (options.stop_when_inert && !options.record_traces &&
        !options.record_state_log && s.phase == Phase::Superconducting &&
        photon_idx >= input.photons.size() && pending_onsets.empty() &&
        power.exhausted(t) && s.e_sub < inert_e_sub &&
        std::abs(s.i_d - i_bias) < 1e-7 * i_bias && s.i_d < device.i_c) {
      const double remaining = t_end - t;
      s.e_hs *= std::exp(-remaining / device.tau_th);
      s.e_sub *= std::exp(-remaining / device.tau_sub);
      if (!current_source)
        s.i_d = i_bias + (s.i_d - i_bias) * std::exp(-remaining * r_shunt / device.l_k);
      break;
    }

    // RK4 over [t, t + dt] with the phase frozen.
    StepField f;
    f.i_bias = i_bias;
    f.r_shunt = r_shunt;
    f.inv_l_k = 1.0 / device.l_k;
    f.r_per_joule =
        (s.hotspot == HotspotKind::Bright ? device.r_max : device.r_spot) / device.e_sat;
    f.r_cap = s.hotspot == HotspotKind::Bright ? device.r_max : device.r_spot;
    f.inv_tau_th = 1.0 / device.tau_th;
    f.inv_tau_sub = 1.0 / device.tau_sub;
    f.eta_abs = device.eta_abs;
    f.normal = s.phase == Phase::Normal;
    f.current_source = current_source;

    const double p_half = power.at(t + 0.5 * dt);
    const double p_full = power.at(t + dt);

    double k1i, k1e, k1s, k2i, k2e, k2s, k3i, k3e, k3s, k4i, k4e, k4s;
    f.eval(s.i_d, s.e_hs, s.e_sub, p_opt, k1i, k1e, k1s);
    f.eval(s.i_d + 0.5 * dt * k1i, s.e_hs + 0.5 * dt * k1e,
           s.e_sub + 0.5 * dt * k1s, p_half, k2i, k2e, k2s);
    f.eval(s.i_d + 0.5 * dt * k2i, s.e_hs + 0.5 * dt * k2e,
           s.e_sub + 0.5 * dt * k2s, p_half, k3i, k3e, k3s);
    f.eval(s.i_d + dt * k3i, s.e_hs + dt * k3e, s.e_sub + dt * k3s, p_full,
           k4i, k4e, k4s);

    s.i_d += dt / 6.0 * (k1i + 2.0 * (k2i + k3i) + k4i);
    s.e_hs += dt / 6.0 * (k1e + 2.0 * (k2e + k3e) + k4e);
    s.e_sub += dt / 6.0 * (k1s + 2.0 * (k2s + k3s) + k4s);
    if (s.e_hs < 0.0) s.e_hs = 0.0;
    if (s.e_sub < 0.0) s.e_sub = 0.0;
    s.r_hs = hotspot_resistance(s, device);

    if (!std::isfinite(s.i_d) || !std::isfinite(s.e_hs) || !std::isfinite(s.e_sub))
      throw std::runtime_error("integration failure: non-finite state at t = " +
                               std::to_string(t + dt) + " s");
  }

  s.t = t_end;
  rec.final_state = s;

  if (options.record_traces) {
    if (circuit.line_delay > 0.0 && circuit.shunted() && *circuit.r_shunt != 50.0) {
      const AnalogTrace echo = reflection_inject(rec.raw_trace, circuit);
      for (std::size_t i = 0; i < rec.raw_trace.samples.size(); ++i)
        rec.raw_trace.samples[i] += echo.samples[i];
    }
    rec.trace = amplify(rec.raw_trace, circuit, rng_noise);
  }
  return rec;
}

std::array<SimulationRecord, 2> simulate_pair(
    const std::array<DeviceParams, 2>& devices,
    const std::array<CircuitParams, 2>& circuits,
    const std::array<OpticalWaveform, 2>& inputs, double t_begin, double t_end,
    const EngineOptions& options, bool split_seed) {
  std::array<SimulationRecord, 2> out;
  for (int k = 0; k < 2; ++k) {
    EngineOptions opts = options;
    if (split_seed) opts.seed = derive_seed(options.seed, 0x700 + static_cast<std::uint64_t>(k));
    out[static_cast<std::size_t>(k)] =
        simulate(devices[static_cast<std::size_t>(k)], circuits[static_cast<std::size_t>(k)],
                 inputs[static_cast<std::size_t>(k)], t_begin, t_end, opts);
  }
  return out;
}

}  // namespace snspd
