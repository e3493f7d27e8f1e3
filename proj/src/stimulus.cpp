#include "snspd/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "snspd/units.hpp"

namespace snspd {

void OpticalWaveform::validate() const {
  double prev_end = -std::numeric_limits<double>::infinity();
  for (const auto& s : segments) {
    if (!(std::isfinite(s.power) && s.power >= 0.0))
      throw std::invalid_argument("segment power must be finite and >= 0");
    if (!(s.t_end > s.t_start))
      throw std::invalid_argument("segment must have t_end > t_start");
    if (s.t_start < prev_end)
      throw std::invalid_argument("segments must be sorted and disjoint");
    prev_end = s.t_end;
  }
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const auto& p : photons) {
    if (p.t < prev_t) throw std::invalid_argument("photon times must be sorted");
    prev_t = p.t;
  }
}

double power_at(const OpticalWaveform& w, double t) {
  // First segment with t_end > t; it covers t iff t_start <= t.
  auto it = std::upper_bound(
      w.segments.begin(), w.segments.end(), t,
      [](double value, const PowerSegment& s) { return value < s.t_end; });
  if (it != w.segments.end() && it->t_start <= t) return it->power;
  return 0.0;
}

double PowerCursor::at(double t) {
  const auto& segs = w_->segments;
  while (idx_ < segs.size() && t >= segs[idx_].t_end) ++idx_;
  if (idx_ < segs.size() && t >= segs[idx_].t_start) return segs[idx_].power;
  return 0.0;
}

bool PowerCursor::exhausted(double t) const {
  const auto& segs = w_->segments;
  for (std::size_t i = idx_; i < segs.size(); ++i)
    if (segs[i].power > 0.0 && segs[i].t_end > t) return false;
  return true;
}

void AttackParams::validate() const {
  if (!(p_blind > 0.0)) throw std::invalid_argument("p_blind must be > 0");
  if (!(tau_off > 0.0)) throw std::invalid_argument("tau_off must be > 0");
  if (!(tau_rearm > 0.0)) throw std::invalid_argument("tau_rearm must be > 0");
  if (!(drop_db > 0.0)) throw std::invalid_argument("drop_db must be > 0");
  if (!(settle >= 0.0)) throw std::invalid_argument("settle must be >= 0");
}

OpticalWaveform photon_train(double rate_hz, double duration_s,
                             double wavelength_m, Rng& rng) {
  if (rate_hz < 0.0) throw std::invalid_argument("photon rate must be >= 0");
  OpticalWaveform w;
  if (rate_hz == 0.0 || duration_s <= 0.0) return w;
  const double energy = units::photon_energy(wavelength_m);
  double t = 0.0;
  for (;;) {
    t += rng.exponential(1.0 / rate_hz);
    if (t >= duration_s) break;
    w.photons.push_back({t, energy});
  }
  return w;
}

namespace {

// Constant power with multiplicative dB offsets over the given windows.
// Windows must be sorted and non-overlapping within one diagram.
std::vector<PowerSegment> compile_level_diagram(
    double base_power, double blind_start, double blind_end,
    const std::vector<std::pair<double, double>>& windows, double offset_db) {
  const double offset = units::db_to_power_ratio(offset_db);
  std::vector<PowerSegment> segs;
  double cursor = blind_start;
  for (const auto& [w0, w1] : windows) {
    if (w0 > cursor) segs.push_back({cursor, w0, base_power});
    segs.push_back({w0, w1, base_power * offset});
    cursor = w1;
  }
  if (cursor < blind_end) segs.push_back({cursor, blind_end, base_power});
  return segs;
}

}  // namespace

ControlDiagram build_control_diagram(const AttackParams& params,
                                     const std::vector<double>& click_times,
                                     double blind_start, double blind_end) {
  params.validate();
  if (!(blind_end > blind_start))
    throw std::invalid_argument("blind window must have blind_end > blind_start");

  std::vector<std::pair<double, double>> windows;
  windows.reserve(click_times.size());
  double prev_click = -std::numeric_limits<double>::infinity();
  for (double click : click_times) {
    if (click < prev_click)
      throw std::invalid_argument("click plan rejected: click times must be sorted");
    if (click - prev_click < params.tau_off + params.tau_rearm)
      throw std::invalid_argument(
          "click plan rejected: spacing " + std::to_string(click - prev_click) +
          " s is below tau_off + tau_rearm = " +
          std::to_string(params.tau_off + params.tau_rearm) +
          " s (requested rate exceeds 1/(tau_off + tau_rearm))");
    if (click <= blind_start + params.settle || click >= blind_end)
      throw std::invalid_argument(
          "click plan rejected: click at " + std::to_string(click) +
          " s outside (blind_start + settle, blind_end)");
    if (click - params.tau_off <= blind_start)
      throw std::invalid_argument(
          "click plan rejected: carve-out would start before blinding onset");
    windows.emplace_back(click - params.tau_off, click);
    prev_click = click;
  }

  ControlDiagram d;
  d.target.segments = compile_level_diagram(params.p_blind, blind_start,
                                            blind_end, windows, -params.drop_db);
  d.companion.segments = compile_level_diagram(params.p_blind, blind_start,
                                               blind_end, windows, params.surge_db);
  d.target.validate();
  d.companion.validate();
  return d;
}

}  // namespace snspd
