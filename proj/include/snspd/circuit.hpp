#pragma once

#include <optional>
#include <vector>

#include "snspd/device.hpp"
#include "snspd/rng.hpp"

namespace snspd {

// Electrical environment around the nanowire. r_shunt == nullopt selects the
// bare current-source configuration (no shunt; used to demonstrate latching).
// f_hp == nullopt selects DC-coupled amplifiers.
struct CircuitParams {
  double r_bias = 1e5;   // bias source series resistance [ohm]
  double v_bias = 1.0;   // bias source voltage [V]; i_bias = v_bias / r_bias
  std::optional<double> r_shunt = 50.0;  // [ohm]
  double line_delay = 5e-9;  // one-way coax delay [s]; 0 disables reflections
  double gain_db = 56.0;
  std::optional<double> f_hp = 1e7;  // low-frequency cutoff [Hz]
  int hp_stages = 3;  // cascaded first-order high-pass sections (amps + DC block)
  double f_lp = 5.8e8;   // high-frequency cutoff [Hz]
  double noise_rms = 9.6e-3;  // additive output noise RMS [V]

  double i_bias() const { return v_bias / r_bias; }
  bool shunted() const { return r_shunt.has_value(); }
  bool dc_coupled() const { return !f_hp.has_value(); }

  void validate() const;
};

// Uniformly sampled voltage sequence.
struct AnalogTrace {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> samples;

  double time_of(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

// Readout pickoff before amplification. Shunted mode senses the diverted
// current, (i_bias - i_d) * r_shunt; the bare configuration senses the
// voltage developed across the hotspot itself.
double raw_readout_voltage(const ElectroThermalState& state,
                           const CircuitParams& circuit);

// Amplifier chain: hp_stages cascaded first-order high-pass sections at f_hp
// (skipped when DC-coupled), one first-order low-pass at f_lp, linear gain
// 10^(gain_db/20), then additive white Gaussian noise of RMS noise_rms.
// Throws std::invalid_argument when the input is undersampled
// (dt > 1/(10 f_lp)).
AnalogTrace amplify(const AnalogTrace& raw, const CircuitParams& circuit, Rng& rng);

// Additive term from the impedance-mismatch reflection: a copy of the device
// trace delayed by the round trip 2*line_delay and scaled by
// gamma = (r_shunt - 50) / (r_shunt + 50). Zero when matched or when
// line_delay == 0.
AnalogTrace reflection_inject(const AnalogTrace& trace_at_device,
                              const CircuitParams& circuit);

// Time-averaged DC-port voltage over [t_end - window, t_end] of the state
// log: mean of (i_bias - i_d) * r_shunt plus a quiescent offset standing in
// for unsimulated normal-rate counting. Returns millivolts. Throws on an
// empty or too-short log.
double dc_monitor(const std::vector<ElectroThermalState>& state_log,
                  const CircuitParams& circuit, double window,
                  double quiescent_offset_v = 0.0);

// Filter primitives, exposed for tests and feature extraction.
void apply_highpass(std::vector<double>& samples, double dt, double f_hp, int stages);
void apply_lowpass(std::vector<double>& samples, double dt, double f_lp);

}  // namespace snspd
