#include "snspd/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace snspd::units {
namespace {

struct Suffix {
  Dim dim;
  double scale;
};

const std::map<std::string, Suffix, std::less<>>& suffix_table() {
  static const std::map<std::string, Suffix, std::less<>> table = {
      {"s", {Dim::Time, 1.0}},
      {"ms", {Dim::Time, 1e-3}},
      {"us", {Dim::Time, 1e-6}},
      {"ns", {Dim::Time, 1e-9}},
      {"ps", {Dim::Time, 1e-12}},
      {"W", {Dim::Power, 1.0}},
      {"mW", {Dim::Power, 1e-3}},
      {"uW", {Dim::Power, 1e-6}},
      {"nW", {Dim::Power, 1e-9}},
      {"pW", {Dim::Power, 1e-12}},
      {"A", {Dim::Current, 1.0}},
      {"mA", {Dim::Current, 1e-3}},
      {"uA", {Dim::Current, 1e-6}},
      {"nA", {Dim::Current, 1e-9}},
      {"V", {Dim::Voltage, 1.0}},
      {"mV", {Dim::Voltage, 1e-3}},
      {"uV", {Dim::Voltage, 1e-6}},
      {"ohm", {Dim::Resistance, 1.0}},
      {"kohm", {Dim::Resistance, 1e3}},
      {"Mohm", {Dim::Resistance, 1e6}},
      {"H", {Dim::Inductance, 1.0}},
      {"mH", {Dim::Inductance, 1e-3}},
      {"uH", {Dim::Inductance, 1e-6}},
      {"nH", {Dim::Inductance, 1e-9}},
      {"Hz", {Dim::Frequency, 1.0}},
      {"kHz", {Dim::Frequency, 1e3}},
      {"MHz", {Dim::Frequency, 1e6}},
      {"GHz", {Dim::Frequency, 1e9}},
      {"J", {Dim::Energy, 1.0}},
      {"mJ", {Dim::Energy, 1e-3}},
      {"uJ", {Dim::Energy, 1e-6}},
      {"nJ", {Dim::Energy, 1e-9}},
      {"pJ", {Dim::Energy, 1e-12}},
      {"fJ", {Dim::Energy, 1e-15}},
      {"aJ", {Dim::Energy, 1e-18}},
      {"dB", {Dim::Decibel, 1.0}},
  };
  return table;
}

}  // namespace

std::string_view base_suffix(Dim dim) {
  switch (dim) {
    case Dim::Dimensionless: return "";
    case Dim::Time: return "s";
    case Dim::Power: return "W";
    case Dim::Current: return "A";
    case Dim::Voltage: return "V";
    case Dim::Resistance: return "ohm";
    case Dim::Inductance: return "H";
    case Dim::Frequency: return "Hz";
    case Dim::Energy: return "J";
    case Dim::Decibel: return "dB";
  }
  return "";
}

double parse_quantity(std::string_view text, Dim dim) {
  // Trim surrounding whitespace.
  size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  const std::string s(text.substr(b, e - b));
  if (s.empty()) throw std::invalid_argument("empty quantity");

  const char* begin = s.c_str();
  char* num_end = nullptr;
  const double value = std::strtod(begin, &num_end);
  if (num_end == begin) throw std::invalid_argument("not a number: '" + s + "'");

  std::string suffix(num_end);
  // Allow a single space between number and suffix.
  while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.front())))
    suffix.erase(suffix.begin());

  if (suffix.empty()) {
    if (dim == Dim::Dimensionless || dim == Dim::Decibel) return value;
    throw std::invalid_argument("quantity '" + s + "' needs a unit suffix (e.g. " +
                                std::string(base_suffix(dim)) + ")");
  }
  if (dim == Dim::Dimensionless)
    throw std::invalid_argument("dimensionless value '" + s + "' must not carry a unit");

  auto it = suffix_table().find(suffix);
  if (it == suffix_table().end())
    throw std::invalid_argument("unknown unit '" + suffix + "' in '" + s + "'");
  if (it->second.dim != dim)
    throw std::invalid_argument("unit '" + suffix + "' does not measure " +
                                std::string(base_suffix(dim)));
  return value * it->second.scale;
}

}  // namespace snspd::units
