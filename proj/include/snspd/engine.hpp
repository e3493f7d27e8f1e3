#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snspd/circuit.hpp"
#include "snspd/device.hpp"
#include "snspd/stimulus.hpp"

namespace snspd {

enum class EventKind {
  PhotonDetected,  // single-shot detection event (photon or dark count)
  PhotonIgnored,
  BlindOnset,
  FakeEdge,
  ScRecovered,
  Latched,
};

const char* to_string(EventKind k);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::PhotonDetected;
};

struct SimulationRecord {
  AnalogTrace trace;      // amplified output
  AnalogTrace raw_trace;  // device-node voltage before amplification
  std::vector<ElectroThermalState> state_log;
  std::vector<Event> events;
  ElectroThermalState final_state;
};

struct EngineOptions {
  double dt = 10e-12;              // integration step [s]; must be <= 25 ps
  double trace_interval = 25e-12;  // snapped down to an integer step multiple
  double log_interval = 1e-9;
  bool record_traces = true;
  bool record_state_log = true;
  // Event-only runs may stop once no further event is possible (quiescent
  // superconducting state, hazard below resolution, no pending input).
  bool stop_when_inert = false;
  std::uint64_t seed = 0;
};

// Advances the coupled device+circuit system over [t_begin, t_end] under the
// optical waveform: fixed-step fourth-order Runge-Kutta on (i_d, e_hs, e_sub)
// with phase transitions applied once per step and photon events snapped to
// the nearest step boundary. Deterministic given the seed. Throws
// std::runtime_error naming the time of blow-up if the state goes non-finite.
SimulationRecord simulate(const DeviceParams& device, const CircuitParams& circuit,
                          const OpticalWaveform& input, double t_begin,
                          double t_end, const EngineOptions& options);

// Two detectors advanced independently on a shared clock. With
// split_seed == true (default) each detector gets a derived RNG stream;
// with false both use the same seed, so identical inputs give identical
// records.
std::array<SimulationRecord, 2> simulate_pair(
    const std::array<DeviceParams, 2>& devices,
    const std::array<CircuitParams, 2>& circuits,
    const std::array<OpticalWaveform, 2>& inputs, double t_begin, double t_end,
    const EngineOptions& options, bool split_seed = true);

}  // namespace snspd
