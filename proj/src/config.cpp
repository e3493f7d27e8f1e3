#include "snspd/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace snspd {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  std::string current;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                    ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                    ": empty section name");
      cfg.set(current, "", "");  // ensure the section exists even when empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": empty key");
    if (current.empty())
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": key outside any [section]");
    cfg.set(current, key, value);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& s : sections_) {
    out += "[" + s.name + "]\n";
    for (const auto& e : s.entries) out += e.key + " = " + e.value + "\n";
    out += "\n";
  }
  return out;
}

void Config::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write config: " + path);
  f << serialize();
}

const std::string* Config::find(const std::string& section,
                                const std::string& key) const {
  for (const auto& s : sections_) {
    if (s.name != section) continue;
    for (const auto& e : s.entries)
      if (e.key == key) return &e.value;
  }
  return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get(const std::string& section, const std::string& key) const {
  const auto* v = find(section, key);
  if (!v)
    throw std::invalid_argument("missing configuration value " + section + "." + key);
  return *v;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  const auto* v = find(section, key);
  return v ? *v : fallback;
}

double Config::get_quantity(const std::string& section, const std::string& key,
                            units::Dim dim) const {
  try {
    return units::parse_quantity(get(section, key), dim);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(section + "." + key + ": " + e.what());
  }
}

double Config::get_quantity_or(const std::string& section, const std::string& key,
                               units::Dim dim, double fallback) const {
  if (!has(section, key)) return fallback;
  return get_quantity(section, key, dim);
}

void Config::set(const std::string& section, const std::string& key,
                 std::string value) {
  Section* target = nullptr;
  for (auto& s : sections_)
    if (s.name == section) target = &s;
  if (!target) {
    sections_.push_back({section, {}});
    target = &sections_.back();
  }
  if (key.empty()) return;
  for (auto& e : target->entries) {
    if (e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  target->entries.push_back({key, std::move(value)});
}

void Config::set_quantity(const std::string& section, const std::string& key,
                          double value, const std::string& suffix) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  set(section, key, std::string(buf) + (suffix.empty() ? "" : suffix));
}

}  // namespace snspd
