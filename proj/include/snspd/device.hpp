#pragma once

#include <utility>

#include "snspd/rng.hpp"

namespace snspd {

enum class DeviceClass { Snap, Meander, CavityMeander };

// Static physical parameters of one nanowire chip. The model is lumped:
// one hotspot energy e_hs with a saturating-linear resistance closure,
//
//   r_hs = scale * min(1, e_hs / e_sat),   scale = r_spot or r_max
//
// where the scale depends on how the hotspot formed (single absorption
// event vs. optically flooded wire), plus a slow substrate heat reservoir
// e_sub that feeds the dark-count hazard during recovery.
struct DeviceParams {
  double i_c = 11.1e-6;    // critical current [A]
  double l_k = 1e-6;       // kinetic inductance [H]
  double r_max = 100e3;    // hotspot resistance ceiling, bright-driven [ohm]
  double r_spot = 1e3;     // hotspot resistance scale, photon-driven [ohm]
  double eta = 0.25;       // detection probability per photon when sensitive
  double eta_abs = 6e-4;   // optical power fraction absorbed by the wire
  double e_sat = 2.5e-19;  // hotspot energy at resistance saturation [J]
  double e_on = 2.0e-19;   // optically driven SC->NORMAL threshold [J]
  double e_off = 1.5e-19;  // NORMAL->SC permitted below this energy [J]
  double tau_th = 0.25e-9; // hotspot rethermalisation time [s]
  double tau_sub = 1.08e-6;  // substrate heat relaxation time [s]
  double ap_gain = 2.49e19;  // dark-count hazard per joule of substrate heat [Hz/J]
  double i_retrap = 2e-6;  // NORMAL->SC permitted below this current [A]
  double beta_sens = 0.7;  // photosensitive when i_d >= beta_sens * i_c
  double avalanche_prob = 0.0;  // chance of a delayed cascade on photon events
  double avalanche_tau = 150e-12;  // mean cascade delay [s]
  DeviceClass device_class = DeviceClass::Meander;

  void validate() const;  // throws std::invalid_argument

  // Lowest bias current at which a photon-seeded hotspot can sustain itself
  // by Joule heating; below it the hotspot cools faster than it heats.
  double self_heating_current() const;
};

enum class Phase { Superconducting, Normal };

// How the current hotspot formed; selects the resistance scale.
enum class HotspotKind { None, Photon, Bright };

struct ElectroThermalState {
  double t = 0.0;      // s
  double i_d = 0.0;    // current through the nanowire [A]
  double e_hs = 0.0;   // hotspot energy [J], >= 0
  double e_sub = 0.0;  // substrate reservoir energy [J], >= 0
  double r_hs = 0.0;   // derived hotspot resistance [ohm]; 0 when SC
  Phase phase = Phase::Superconducting;
  HotspotKind hotspot = HotspotKind::None;
};

// 0 when superconducting; saturating-linear in e_hs otherwise.
double hotspot_resistance(const ElectroThermalState& state, const DeviceParams& p);

struct StateDerivatives {
  double di_dt = 0.0;    // A/s
  double de_dt = 0.0;    // W (hotspot)
  double dsub_dt = 0.0;  // W (substrate reservoir)
};

// Instantaneous derivatives under incident power p_opt with the shunted bias
// network (series source i_bias, shunt r_shunt). Pure; throws on non-finite
// input.
//
//   di/dt   = ((i_bias - i_d) r_shunt - i_d r_hs) / l_k
//   de/dt   = i_d^2 r_hs + eta_abs p_opt - e_hs / tau_th
//   dsub/dt = e_hs / tau_th - e_sub / tau_sub
StateDerivatives derivatives(const ElectroThermalState& state,
                             const DeviceParams& p, double p_opt,
                             double i_bias, double r_shunt);

// Phase machine, applied once per integration step after the energy update.
// SC->NORMAL on photon absorption (seeds e_hs = e_on, photon scale), on
// e_hs >= e_on (optically driven, bright scale), or on i_d >= i_c
// (overcurrent, photon scale). NORMAL->SC iff e_hs < e_off and
// i_d < i_retrap. A hotspot keeps its formation kind until it resets.
ElectroThermalState apply_transitions(const ElectroThermalState& state,
                                      const DeviceParams& p, double p_opt,
                                      bool photon_absorbed);

// True iff superconducting with enough current returned to respond to light.
bool is_photosensitive(const ElectroThermalState& state, const DeviceParams& p);

// Photon arrival at state.t: Bernoulli(eta) detection when photosensitive,
// transitioning to the photon-driven normal state on success.
std::pair<ElectroThermalState, bool> absorb_photon(
    const ElectroThermalState& state, const DeviceParams& p, Rng& rng);

// Time for the recovering detector to regain photosensitivity after full
// current expulsion, from the closed-form RL solution.
double recovery_time(const DeviceParams& p, double i_bias, double r_shunt);

}  // namespace snspd
