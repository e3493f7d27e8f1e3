#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snspd/units.hpp"

namespace snspd {

// Sectioned key-value text configuration. '#' starts a comment; keys live
// under the most recent [section]. Insertion order is preserved so that a
// serialized manifest is byte-stable.
class Config {
 public:
  struct Entry {
    std::string key;
    std::string value;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };

  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  std::string serialize() const;
  void save(const std::string& path) const;

  bool has(const std::string& section, const std::string& key) const;
  // Throws std::invalid_argument naming section.key when missing.
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_quantity(const std::string& section, const std::string& key,
                      units::Dim dim) const;
  double get_quantity_or(const std::string& section, const std::string& key,
                         units::Dim dim, double fallback) const;

  void set(const std::string& section, const std::string& key, std::string value);
  void set_quantity(const std::string& section, const std::string& key,
                    double value, const std::string& suffix);

  const std::vector<Section>& sections() const { return sections_; }

 private:
  const std::string* find(const std::string& section, const std::string& key) const;
  std::vector<Section> sections_;
};

}  // namespace snspd
