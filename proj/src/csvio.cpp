#include "snspd/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace snspd {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return f;
}

std::vector<double> split_doubles(const std::string& line, std::size_t expect,
                                  const std::string& path) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  if (out.size() != expect)
    throw std::runtime_error(path + ": expected " + std::to_string(expect) +
                             " columns, got " + std::to_string(out.size()));
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path, const AnalogTrace& trace) {
  auto f = open_out(path);
  f << "time_s,voltage_V\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i)
    f << format_double(trace.time_of(i)) << ',' << format_double(trace.samples[i])
      << '\n';
}

AnalogTrace read_trace_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || line != "time_s,voltage_V")
    throw std::runtime_error(path + ": missing trace header");
  AnalogTrace t;
  std::vector<double> times;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto row = split_doubles(line, 2, path);
    times.push_back(row[0]);
    t.samples.push_back(row[1]);
  }
  if (times.size() >= 2) {
    t.t0 = times.front();
    t.dt = times[1] - times[0];
  } else if (times.size() == 1) {
    t.t0 = times.front();
    t.dt = 1.0;
  }
  return t;
}

void write_waveform_csv(const std::string& segments_path,
                        const std::string& photons_path,
                        const OpticalWaveform& w) {
  {
    auto f = open_out(segments_path);
    f << "t_start_s,t_end_s,power_W\n";
    for (const auto& s : w.segments)
      f << format_double(s.t_start) << ',' << format_double(s.t_end) << ','
        << format_double(s.power) << '\n';
  }
  {
    auto f = open_out(photons_path);
    f << "t_s,energy_J\n";
    for (const auto& p : w.photons)
      f << format_double(p.t) << ',' << format_double(p.energy) << '\n';
  }
}

OpticalWaveform read_waveform_csv(const std::string& segments_path,
                                  const std::string& photons_path) {
  OpticalWaveform w;
  {
    auto f = open_in(segments_path);
    std::string line;
    if (!std::getline(f, line) || line != "t_start_s,t_end_s,power_W")
      throw std::runtime_error(segments_path + ": missing segments header");
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      const auto row = split_doubles(line, 3, segments_path);
      w.segments.push_back({row[0], row[1], row[2]});
    }
  }
  {
    auto f = open_in(photons_path);
    std::string line;
    if (!std::getline(f, line) || line != "t_s,energy_J")
      throw std::runtime_error(photons_path + ": missing photons header");
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      const auto row = split_doubles(line, 2, photons_path);
      w.photons.push_back({row[0], row[1]});
    }
  }
  w.validate();
  return w;
}

void write_events_csv(const std::string& path, const std::vector<Event>& events) {
  auto f = open_out(path);
  f << "t_s,kind\n";
  for (const auto& e : events)
    f << format_double(e.t) << ',' << to_string(e.kind) << '\n';
}

void write_clicks_csv(const std::string& path, const ClickStream& clicks) {
  auto f = open_out(path);
  f << "t_cross_s,peak_V\n";
  for (const auto& c : clicks.clicks)
    f << format_double(c.t_cross) << ',' << format_double(c.peak_v) << '\n';
}

void write_jitter_csv(const std::string& path, const JitterReport& report) {
  auto f = open_out(path);
  f << "bin_lo_s,bin_hi_s,count\n";
  for (std::size_t i = 0; i < report.counts.size(); ++i)
    f << format_double(report.bin_edges[i]) << ','
      << format_double(report.bin_edges[i + 1]) << ',' << report.counts[i] << '\n';
}

}  // namespace snspd
