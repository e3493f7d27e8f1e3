#pragma once

#include <cstddef>
#include <vector>

#include "snspd/rng.hpp"

namespace snspd {

struct PowerSegment {
  double t_start = 0.0;  // s, inclusive
  double t_end = 0.0;    // s, exclusive
  double power = 0.0;    // W
};

struct PhotonEvent {
  double t = 0.0;       // s
  double energy = 0.0;  // J
};

// Optical input to one detector: piecewise-constant power plus discrete
// single-photon events. Segments are sorted and disjoint; gaps mean zero
// power. Half-open [t_start, t_end) convention, so a lookup exactly on a
// boundary returns the later segment.
struct OpticalWaveform {
  std::vector<PowerSegment> segments;
  std::vector<PhotonEvent> photons;

  void validate() const;  // throws std::invalid_argument on violation
};

double power_at(const OpticalWaveform& w, double t);

// Stateful lookup for monotone time sweeps; O(1) amortized.
class PowerCursor {
 public:
  explicit PowerCursor(const OpticalWaveform& w) : w_(&w) {}
  double at(double t);

  // True when no nonzero-power segment remains at or after t.
  bool exhausted(double t) const;

 private:
  const OpticalWaveform* w_;
  std::size_t idx_ = 0;
};

// Attacker knobs for the two-level control diagram.
struct AttackParams {
  double p_blind = 10e-6;    // W, steady blinding power at the target
  double drop_db = 20.0;     // carve-out attenuation
  double surge_db = 3.0;     // companion-detector surge
  double tau_off = 20e-9;    // s, carve-out duration
  double tau_rearm = 10e-9;  // s, minimum bright time between carve-outs
  double settle = 200e-9;    // s, blinding lead time before the first usable click

  void validate() const;
};

struct ControlDiagram {
  OpticalWaveform target;     // blinding with drops around each click
  OpticalWaveform companion;  // blinding with surges over the same windows
};

// Poisson train of single photons of energy hc/wavelength.
OpticalWaveform photon_train(double rate_hz, double duration_s,
                             double wavelength_m, Rng& rng);

// Compiles a click plan into the two-detector optical timelines. Each carve
// ends exactly at its click time (the fake pulse fires on re-illumination).
// Throws std::invalid_argument when clicks violate spacing or window
// constraints, naming the violated constraint.
ControlDiagram build_control_diagram(const AttackParams& params,
                                     const std::vector<double>& click_times,
                                     double blind_start, double blind_end);

}  // namespace snspd
