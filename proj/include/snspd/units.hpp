#pragma once

#include <string>
#include <string_view>

namespace snspd::units {

// Physical dimension of a configuration quantity. Dimensioned values must
// carry an explicit unit suffix ("20ns", "1uW"); bare numbers are accepted
// only for Dimensionless and Decibel.
enum class Dim {
  Dimensionless,
  Time,        // s
  Power,       // W
  Current,     // A
  Voltage,     // V
  Resistance,  // ohm
  Inductance,  // H
  Frequency,   // Hz
  Energy,      // J
  Decibel,     // dB (stored as plain dB value)
};

// Parses "20ns" -> 2e-8, "1uW" -> 1e-6, "50ohm" -> 50. Throws
// std::invalid_argument on a malformed number, an unknown or
// wrong-dimension suffix, or a missing suffix on a dimensioned quantity.
double parse_quantity(std::string_view text, Dim dim);

// Canonical suffix for a dimension ("s", "W", ...); empty for dimensionless.
std::string_view base_suffix(Dim dim);

constexpr double kPlanck = 6.62607015e-34;      // J s
constexpr double kSpeedOfLight = 299792458.0;   // m/s

inline double photon_energy(double wavelength_m) {
  return kPlanck * kSpeedOfLight / wavelength_m;
}

inline double db_to_power_ratio(double db) { return std::pow(10.0, db / 10.0); }
inline double db_to_amplitude_ratio(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace snspd::units
