#include "snspd/presets.hpp"

#include <stdexcept>

namespace snspd {

const char* to_string(ValueOrigin o) {
  switch (o) {
    case ValueOrigin::Nominal: return "nominal";
    case ValueOrigin::Calibrated: return "calibrated";
    case ValueOrigin::Assumed: return "assumed";
  }
  return "?";
}

namespace {

CircuitParams operating_circuit(const DeviceParams& d) {
  CircuitParams c;
  c.v_bias = 0.9 * d.i_c * c.r_bias;  // bias at 0.9 of critical current
  return c;
}

std::vector<PresetField> provenance_for(const DeviceParams& d) {
  auto fmt = [](double v, const char* unit) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g %s", v, unit);
    return std::string(buf);
  };
  using V = ValueOrigin;
  return {
      {"i_c", fmt(d.i_c * 1e6, "uA"), V::Nominal},
      {"l_k", fmt(d.l_k * 1e6, "uH"), V::Nominal},
      {"r_max", fmt(d.r_max * 1e-3, "kohm"), V::Assumed},
      {"r_spot", fmt(d.r_spot * 1e-3, "kohm"), V::Nominal},
      {"eta", fmt(d.eta, ""), V::Assumed},
      {"eta_abs", fmt(d.eta_abs, ""), V::Calibrated},
      {"e_sat", fmt(d.e_sat * 1e18, "aJ"), V::Calibrated},
      {"e_on", fmt(d.e_on * 1e18, "aJ"), V::Calibrated},
      {"e_off", fmt(d.e_off * 1e18, "aJ"), V::Calibrated},
      {"tau_th", fmt(d.tau_th * 1e9, "ns"), V::Calibrated},
      {"tau_sub", fmt(d.tau_sub * 1e6, "us"), V::Calibrated},
      {"ap_gain", fmt(d.ap_gain, "Hz/J"), V::Calibrated},
      {"i_retrap", fmt(d.i_retrap * 1e6, "uA"), V::Assumed},
      {"beta_sens", fmt(d.beta_sens, ""), V::Assumed},
      {"avalanche_prob", fmt(d.avalanche_prob, ""), V::Calibrated},
      {"avalanche_tau", fmt(d.avalanche_tau * 1e12, "ps"), V::Calibrated},
      {"min_hold_power",
       fmt(d.e_off / (d.tau_th * d.eta_abs) * 1e6, "uW"), V::Calibrated},
  };
}

std::vector<DevicePreset> build_presets() {
  std::vector<DevicePreset> out;

  // device1: avalanche-type chip, the primary characterization target.
  {
    DeviceParams d;
    d.i_c = 11.1e-6;
    d.device_class = DeviceClass::Snap;
    d.avalanche_prob = 0.15;
    d.avalanche_tau = 150e-12;
    DevicePreset p{"device1", d, operating_circuit(d), provenance_for(d)};
    out.push_back(std::move(p));
  }
  // device2: smaller avalanche-type chip; weaker coupling.
  {
    DeviceParams d;
    d.i_c = 8.5e-6;
    d.eta = 0.15;
    d.eta_abs = 3e-4;
    d.i_retrap = 1.6e-6;
    d.device_class = DeviceClass::Snap;
    d.avalanche_prob = 0.15;
    d.avalanche_tau = 150e-12;
    DevicePreset p{"device2", d, operating_circuit(d), provenance_for(d)};
    out.push_back(std::move(p));
  }
  // device3: meander on oxidized silicon.
  {
    DeviceParams d;
    d.i_c = 12e-6;
    d.eta = 0.10;
    d.eta_abs = 1.2e-4;
    d.i_retrap = 2.2e-6;
    d.device_class = DeviceClass::Meander;
    DevicePreset p{"device3", d, operating_circuit(d), provenance_for(d)};
    out.push_back(std::move(p));
  }
  // device4: cavity-enhanced meander; strong absorption.
  {
    DeviceParams d;
    d.i_c = 15e-6;
    d.eta = 0.55;
    d.eta_abs = 5e-4;
    d.i_retrap = 2.8e-6;
    d.device_class = DeviceClass::CavityMeander;
    DevicePreset p{"device4", d, operating_circuit(d), provenance_for(d)};
    out.push_back(std::move(p));
  }
  // device5: cavity-enhanced meander, higher critical current.
  {
    DeviceParams d;
    d.i_c = 14e-6;
    d.eta = 0.60;
    d.eta_abs = 4e-4;
    d.i_retrap = 2.6e-6;
    d.device_class = DeviceClass::CavityMeander;
    DevicePreset p{"device5", d, operating_circuit(d), provenance_for(d)};
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

const std::vector<DevicePreset>& device_presets() {
  static const std::vector<DevicePreset> presets = build_presets();
  return presets;
}

const DevicePreset& find_preset(const std::string& name) {
  for (const auto& p : device_presets())
    if (p.name == name) return p;
  std::string names;
  for (const auto& p : device_presets()) {
    if (!names.empty()) names += ", ";
    names += p.name;
  }
  throw std::invalid_argument("unknown preset '" + name +
                              "'; available presets: " + names);
}

}  // namespace snspd
