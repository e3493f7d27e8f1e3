#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snspd/analysis.hpp"
#include "snspd/engine.hpp"
#include "snspd/stimulus.hpp"

namespace snspd {

// Measurement-scheme category under attack. Only passive schemes, where the
// adversary can redistribute power between detectors by polarization or
// phase choice, are implemented.
enum class SchemeCategory { PassiveSplit };

struct AttackScenario {
  SchemeCategory scheme = SchemeCategory::PassiveSplit;
  std::vector<double> target_clicks_det0;
  std::vector<double> target_clicks_det1;
  AttackParams params;
  double blind_start = 0.0;
  double blind_end = 0.0;
};

struct DetectorScore {
  ClickStream clicks;
  double p_click = 0.0;
  double p_premature = 0.0;
  double p_extra = 0.0;
  std::uint64_t planned = 0;
  std::uint64_t onset_clicks = 0;
  double dc_monitor_mv = 0.0;
};

struct AttackReport {
  std::array<DetectorScore, 2> detectors;
  double achieved_rate = 0.0;  // Hz, registered planned clicks over the span
  double max_rate = 0.0;       // Hz, 1/(tau_off + tau_rearm)
};

// Ceiling on the fake-click repetition rate for the given knobs.
double max_fake_rate(const AttackParams& params);

// Compiles the two-detector diagrams (drops at the owner's clicks, surges on
// the other detector over the same windows; overlapping windows compose in
// dB), simulates both detectors, discriminates, and scores planned against
// observed clicks within +/-2 ns. Throws std::invalid_argument for illegal
// plans, naming the violated constraint.
AttackReport run_scenario(const AttackScenario& scenario,
                          const std::array<DeviceParams, 2>& devices,
                          const std::array<CircuitParams, 2>& circuits,
                          std::uint64_t seed,
                          std::array<SimulationRecord, 2>* records_out = nullptr);

// The per-detector optical timelines a scenario compiles to.
std::array<OpticalWaveform, 2> compile_scenario(const AttackScenario& scenario);

}  // namespace snspd
