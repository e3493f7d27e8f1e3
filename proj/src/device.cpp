#include "snspd/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snspd {

void DeviceParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(i_c) || !positive(l_k) || !positive(r_max) || !positive(r_spot) ||
      !positive(e_sat) || !positive(e_on) || !positive(e_off) ||
      !positive(tau_th) || !positive(tau_sub) || !positive(i_retrap))
    throw std::invalid_argument("device parameters must be finite and > 0");
  if (!(i_retrap < i_c)) throw std::invalid_argument("require 0 < i_retrap < i_c");
  if (!(e_off < e_on && e_on <= e_sat))
    throw std::invalid_argument("require 0 < e_off < e_on <= e_sat");
  auto unit_interval = [](double v) { return std::isfinite(v) && v > 0.0 && v <= 1.0; };
  if (!unit_interval(eta) || !unit_interval(eta_abs) || !unit_interval(beta_sens))
    throw std::invalid_argument("eta, eta_abs, beta_sens must be in (0, 1]");
  if (!(avalanche_prob >= 0.0 && avalanche_prob <= 1.0) || !(avalanche_tau > 0.0))
    throw std::invalid_argument("avalanche_prob in [0,1], avalanche_tau > 0");
  if (!(ap_gain >= 0.0)) throw std::invalid_argument("ap_gain must be >= 0");
}

double DeviceParams::self_heating_current() const {
  return std::sqrt(e_sat / (tau_th * r_spot));
}

double hotspot_resistance(const ElectroThermalState& state, const DeviceParams& p) {
  if (state.phase == Phase::Superconducting) return 0.0;
  const double scale = state.hotspot == HotspotKind::Bright ? p.r_max : p.r_spot;
  return scale * std::min(1.0, state.e_hs / p.e_sat);
}

StateDerivatives derivatives(const ElectroThermalState& state,
                             const DeviceParams& p, double p_opt,
                             double i_bias, double r_shunt) {
  if (!std::isfinite(state.i_d) || !std::isfinite(state.e_hs) ||
      !std::isfinite(state.e_sub) || !std::isfinite(p_opt) ||
      !std::isfinite(i_bias) || !std::isfinite(r_shunt))
    throw std::domain_error("non-finite input to device derivatives");
  const double r_hs = hotspot_resistance(state, p);
  StateDerivatives d;
  d.di_dt = ((i_bias - state.i_d) * r_shunt - state.i_d * r_hs) / p.l_k;
  const double dissipation = state.e_hs / p.tau_th;
  d.de_dt = state.i_d * state.i_d * r_hs + p.eta_abs * p_opt - dissipation;
  d.dsub_dt = dissipation - state.e_sub / p.tau_sub;
  return d;
}

ElectroThermalState apply_transitions(const ElectroThermalState& state,
                                      const DeviceParams& p, double /*p_opt*/,
                                      bool photon_absorbed) {
  ElectroThermalState s = state;
  if (s.phase == Phase::Superconducting) {
    if (photon_absorbed) {
      s.phase = Phase::Normal;
      s.hotspot = HotspotKind::Photon;
      s.e_hs = std::max(s.e_hs, p.e_on);
    } else if (s.e_hs >= p.e_on) {
      // Only absorbed light can raise e_hs while superconducting.
      s.phase = Phase::Normal;
      s.hotspot = HotspotKind::Bright;
    } else if (s.i_d >= p.i_c) {
      s.phase = Phase::Normal;
      s.hotspot = HotspotKind::Photon;
      s.e_hs = std::max(s.e_hs, p.e_on);
    }
  } else if (s.e_hs < p.e_off && s.i_d < p.i_retrap) {
    s.phase = Phase::Superconducting;
    s.hotspot = HotspotKind::None;
  }
  s.r_hs = hotspot_resistance(s, p);
  return s;
}

bool is_photosensitive(const ElectroThermalState& state, const DeviceParams& p) {
  return state.phase == Phase::Superconducting &&
         state.i_d >= p.beta_sens * p.i_c;
}

std::pair<ElectroThermalState, bool> absorb_photon(
    const ElectroThermalState& state, const DeviceParams& p, Rng& rng) {
  if (!is_photosensitive(state, p)) return {state, false};
  if (!rng.bernoulli(p.eta)) return {state, false};
  return {apply_transitions(state, p, 0.0, true), true};
}

double recovery_time(const DeviceParams& p, double i_bias, double r_shunt) {
  const double fraction = p.beta_sens * p.i_c / i_bias;
  if (fraction >= 1.0) return std::numeric_limits<double>::infinity();
  return -(p.l_k / r_shunt) * std::log(1.0 - fraction);
}

}  // namespace snspd
