#pragma once

#include <cstdint>
#include <vector>

#include "snspd/engine.hpp"
#include "snspd/montecarlo.hpp"
#include "snspd/stimulus.hpp"

namespace snspd {

struct Click {
  double t_cross = 0.0;  // s, threshold crossing (sub-sample interpolated)
  double peak_v = 0.0;   // V, local maximum following the crossing
};

struct ClickStream {
  std::vector<Click> clicks;
  double threshold = 0.0;
  double holdoff = 5e-9;
};

// Rising-edge threshold crossings with linear interpolation between samples;
// holdoff suppresses re-triggers.
ClickStream discriminate(const AnalogTrace& trace, double threshold,
                         double holdoff = 5e-9);

struct GaussianFit {
  double amplitude = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
  bool valid = false;
};

struct JitterReport {
  std::vector<double> bin_edges;       // counts.size() + 1 edges
  std::vector<std::uint64_t> counts;
  double fwhm = 0.0;                   // from max-bin half-height interpolation
  GaussianFit fit;                     // least-squares Gaussian
  double tail_fraction = 0.0;          // counts beyond fit.mean + 3 fit.sigma
  std::uint64_t n_used = 0;
  std::uint64_t n_missing = 0;         // expected clicks that never crossed
};

// Histogram/fit of crossing-time offsets. Core entry point used by the
// record-level overload and the bulk experiment drivers.
JitterReport jitter_from_deltas(std::vector<double> deltas, double bin_width,
                                std::uint64_t n_missing = 0);

// One reference time per record; each record is expected to produce one
// click within +/-5 ns of its reference.
JitterReport jitter(const std::vector<SimulationRecord>& records,
                    const std::vector<double>& reference_times,
                    double threshold, double bin_width);

// Amplified pulse height of one clean (noise-free, detected) single-photon
// event at the operating point; anchors the discriminator level.
double single_photon_pulse_height(const DeviceParams& device,
                                  const CircuitParams& circuit);

struct JitterExperimentOptions {
  int trials = 150;
  int clicks_per_trial = 20;
  double bin_width = 10e-12;
  double threshold = 0.0;  // 0: use 50% of the single-photon height
  std::uint64_t seed = 1;
  Execution exec = default_execution();
};

// Timing scatter of real detections relative to photon arrival.
JitterReport single_photon_jitter(const DeviceParams& device,
                                  const CircuitParams& circuit,
                                  const JitterExperimentOptions& opts);

// Timing scatter of controlled fake pulses relative to their planned times.
JitterReport fake_pulse_jitter(const DeviceParams& device,
                               const CircuitParams& circuit,
                               const AttackParams& attack,
                               const JitterExperimentOptions& opts);

// Fraction of trials with at least one detection event in
// (blind_end, blind_end + rep_period - blind_duration) after a plain
// blinding pulse of the given duration. trials >= 100.
double afterpulse_probability(const DeviceParams& device,
                              const CircuitParams& circuit,
                              const AttackParams& attack, double blind_duration,
                              double rep_period, int trials, std::uint64_t seed,
                              Execution exec = default_execution());

struct DeterminismReport {
  double p_click = 0.0;      // planned carve-outs that clicked within +/-2 ns
  double p_premature = 0.0;  // clicks during a carve-out before re-illumination
  double p_extra = 0.0;      // other unplanned clicks during blinding
  std::uint64_t n_attempts = 0;
  std::uint64_t onset_clicks = 0;  // blinding-onset artifacts, scored apart
};

// Runs trials of an n_clicks plan at the minimum legal period and scores
// observed against planned clicks.
DeterminismReport fake_click_determinism(const DeviceParams& device,
                                         const CircuitParams& circuit,
                                         const AttackParams& attack,
                                         int n_clicks, int trials,
                                         std::uint64_t seed,
                                         Execution exec = default_execution());

}  // namespace snspd
