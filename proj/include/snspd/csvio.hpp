#pragma once

#include <string>
#include <vector>

#include "snspd/analysis.hpp"
#include "snspd/circuit.hpp"
#include "snspd/engine.hpp"
#include "snspd/stimulus.hpp"

namespace snspd {

// All CSV exports print doubles with 17 significant digits so that import
// reproduces the exact bit pattern.
std::string format_double(double v);

void write_trace_csv(const std::string& path, const AnalogTrace& trace);
AnalogTrace read_trace_csv(const std::string& path);

void write_waveform_csv(const std::string& segments_path,
                        const std::string& photons_path,
                        const OpticalWaveform& w);
OpticalWaveform read_waveform_csv(const std::string& segments_path,
                                  const std::string& photons_path);

void write_events_csv(const std::string& path, const std::vector<Event>& events);
void write_clicks_csv(const std::string& path, const ClickStream& clicks);
void write_jitter_csv(const std::string& path, const JitterReport& report);

}  // namespace snspd
