#pragma once

#include <string>
#include <vector>

#include "snspd/circuit.hpp"
#include "snspd/device.hpp"

namespace snspd {

// Where a preset number comes from: an order-of-magnitude nominal value, a
// constant calibrated against the reference observables, or a modelling
// assumption with no independent anchor.
enum class ValueOrigin { Nominal, Calibrated, Assumed };

const char* to_string(ValueOrigin o);

struct PresetField {
  std::string name;
  std::string value;  // formatted with unit
  ValueOrigin origin = ValueOrigin::Assumed;
};

struct DevicePreset {
  std::string name;
  DeviceParams device;
  CircuitParams circuit;  // recommended operating circuit (bias at ~0.9 i_c)
  std::vector<PresetField> provenance;
};

// Five chips: two avalanche-type, one meander, two cavity-enhanced meanders.
const std::vector<DevicePreset>& device_presets();

// Throws std::invalid_argument listing the available names when unknown.
const DevicePreset& find_preset(const std::string& name);

}  // namespace snspd
