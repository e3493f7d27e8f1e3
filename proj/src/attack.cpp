#include "snspd/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "snspd/units.hpp"

namespace snspd {

double max_fake_rate(const AttackParams& params) {
  params.validate();
  return 1.0 / (params.tau_off + params.tau_rearm);
}

namespace {

void check_plan(const AttackParams& p, const std::vector<double>& clicks,
                double blind_start, double blind_end, const char* who) {
  double prev = -std::numeric_limits<double>::infinity();
  for (double c : clicks) {
    if (c < prev)
      throw std::invalid_argument(std::string(who) + ": click times must be sorted");
    if (c - prev < p.tau_off + p.tau_rearm)
      throw std::invalid_argument(std::string(who) +
                                  ": click spacing below tau_off + tau_rearm");
    if (c <= blind_start + p.settle || c >= blind_end)
      throw std::invalid_argument(std::string(who) +
                                  ": click outside (blind_start + settle, blind_end)");
    prev = c;
  }
}

// dB offsets over windows, composed additively in dB where windows overlap.
std::vector<PowerSegment> compile_detector(
    double p_blind, double blind_start, double blind_end,
    const std::vector<std::pair<double, double>>& drop_windows, double drop_db,
    const std::vector<std::pair<double, double>>& surge_windows, double surge_db) {
  std::vector<double> edges{blind_start, blind_end};
  for (const auto& [a, b] : drop_windows) {
    edges.push_back(a);
    edges.push_back(b);
  }
  for (const auto& [a, b] : surge_windows) {
    edges.push_back(a);
    edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<PowerSegment> segs;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    if (a < blind_start || b > blind_end) continue;
    double db = 0.0;
    const double mid = 0.5 * (a + b);
    for (const auto& [w0, w1] : drop_windows)
      if (mid >= w0 && mid < w1) db -= drop_db;
    for (const auto& [w0, w1] : surge_windows)
      if (mid >= w0 && mid < w1) db += surge_db;
    const double power = p_blind * units::db_to_power_ratio(db);
    if (!segs.empty() && segs.back().t_end == a && segs.back().power == power)
      segs.back().t_end = b;  // merge equal-power neighbours
    else
      segs.push_back({a, b, power});
  }
  return segs;
}

std::vector<std::pair<double, double>> carve_windows(
    const std::vector<double>& clicks, double tau_off) {
  std::vector<std::pair<double, double>> w;
  w.reserve(clicks.size());
  for (double c : clicks) w.emplace_back(c - tau_off, c);
  return w;
}

DetectorScore score_detector(const ClickStream& cs,
                             const std::vector<double>& plan,
                             const AttackScenario& sc) {
  DetectorScore out;
  out.clicks = cs;
  out.planned = plan.size();
  const double onset_margin = 20e-9;
  std::vector<bool> matched(cs.clicks.size(), false);
  std::uint64_t hits = 0, premature = 0, extra = 0;
  for (double ref : plan) {
    for (std::size_t i = 0; i < cs.clicks.size(); ++i) {
      if (matched[i]) continue;
      if (std::abs(cs.clicks[i].t_cross - ref) <= 2e-9) {
        matched[i] = true;
        ++hits;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < cs.clicks.size(); ++i) {
    if (matched[i]) continue;
    const double t = cs.clicks[i].t_cross;
    if (t < sc.blind_start || t > sc.blind_end) continue;
    if (t <= sc.blind_start + onset_margin) {
      ++out.onset_clicks;
      continue;
    }
    bool in_carve = false;
    for (double ref : plan)
      if (t >= ref - sc.params.tau_off && t < ref - 2e-9) {
        in_carve = true;
        break;
      }
    if (in_carve)
      ++premature;
    else
      ++extra;
  }
  const double denom = plan.empty() ? 1.0 : static_cast<double>(plan.size());
  out.p_click = static_cast<double>(hits) / denom;
  out.p_premature = static_cast<double>(premature) / denom;
  out.p_extra = static_cast<double>(extra) / denom;
  return out;
}

}  // namespace

std::array<OpticalWaveform, 2> compile_scenario(const AttackScenario& sc) {
  sc.params.validate();
  if (!(sc.blind_end > sc.blind_start))
    throw std::invalid_argument("scenario: blind_end must exceed blind_start");
  check_plan(sc.params, sc.target_clicks_det0, sc.blind_start, sc.blind_end,
             "detector 0 plan");
  check_plan(sc.params, sc.target_clicks_det1, sc.blind_start, sc.blind_end,
             "detector 1 plan");

  const auto drops0 = carve_windows(sc.target_clicks_det0, sc.params.tau_off);
  const auto drops1 = carve_windows(sc.target_clicks_det1, sc.params.tau_off);

  std::array<OpticalWaveform, 2> out;
  out[0].segments = compile_detector(sc.params.p_blind, sc.blind_start, sc.blind_end,
                                     drops0, sc.params.drop_db, drops1,
                                     sc.params.surge_db);
  out[1].segments = compile_detector(sc.params.p_blind, sc.blind_start, sc.blind_end,
                                     drops1, sc.params.drop_db, drops0,
                                     sc.params.surge_db);
  out[0].validate();
  out[1].validate();
  return out;
}

AttackReport run_scenario(const AttackScenario& scenario,
                          const std::array<DeviceParams, 2>& devices,
                          const std::array<CircuitParams, 2>& circuits,
                          std::uint64_t seed,
                          std::array<SimulationRecord, 2>* records_out) {
  const auto inputs = compile_scenario(scenario);
  EngineOptions opts;
  opts.seed = seed;
  opts.log_interval = 1e-9;
  const double t_end = scenario.blind_end + 50e-9;
  const auto records =
      simulate_pair(devices, circuits, inputs, scenario.blind_start - 20e-9,
                    t_end, opts);

  AttackReport rep;
  rep.max_rate = max_fake_rate(scenario.params);
  const std::array<const std::vector<double>*, 2> plans{
      &scenario.target_clicks_det0, &scenario.target_clicks_det1};
  std::uint64_t registered = 0;
  for (std::size_t k = 0; k < 2; ++k) {
    const double threshold =
        0.5 * single_photon_pulse_height(devices[k], circuits[k]);
    const ClickStream cs = discriminate(records[k].trace, threshold);
    rep.detectors[k] = score_detector(cs, *plans[k], scenario);
    registered += static_cast<std::uint64_t>(
        std::llround(rep.detectors[k].p_click * static_cast<double>(plans[k]->size())));
    rep.detectors[k].dc_monitor_mv =
        dc_monitor(records[k].state_log, circuits[k],
                   scenario.blind_end - scenario.blind_start);
  }
  rep.achieved_rate = static_cast<double>(registered) /
                      (scenario.blind_end - scenario.blind_start);
  if (records_out) *records_out = records;
  return rep;
}

}  // namespace snspd
