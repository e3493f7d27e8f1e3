#include "snspd/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "snspd/units.hpp"

namespace snspd {

void CircuitParams::validate() const {
  if (!(r_bias > 0.0)) throw std::invalid_argument("r_bias must be > 0");
  if (shunted() && !(*r_shunt > 0.0))
    throw std::invalid_argument("r_shunt must be > 0 when present");
  if (!(gain_db >= 0.0)) throw std::invalid_argument("gain_db must be >= 0");
  if (!(noise_rms >= 0.0)) throw std::invalid_argument("noise_rms must be >= 0");
  if (!(f_lp > 0.0)) throw std::invalid_argument("f_lp must be > 0");
  if (!dc_coupled()) {
    if (!(*f_hp > 0.0)) throw std::invalid_argument("f_hp must be > 0");
    if (!(f_lp > *f_hp))
      throw std::invalid_argument("require f_lp > f_hp when AC-coupled");
    if (hp_stages < 1) throw std::invalid_argument("hp_stages must be >= 1");
  }
  if (!(line_delay >= 0.0)) throw std::invalid_argument("line_delay must be >= 0");
}

double raw_readout_voltage(const ElectroThermalState& state,
                           const CircuitParams& circuit) {
  if (circuit.shunted())
    return (circuit.i_bias() - state.i_d) * *circuit.r_shunt;
  return state.i_d * state.r_hs;
}

void apply_highpass(std::vector<double>& samples, double dt, double f_hp, int stages) {
  const double a = std::exp(-dt * 2.0 * M_PI * f_hp);
  for (int s = 0; s < stages; ++s) {
    double prev_x = samples.empty() ? 0.0 : samples.front();
    double prev_y = 0.0;  // input assumed settled before t0
    for (double& x : samples) {
      const double y = a * (prev_y + x - prev_x);
      prev_x = x;
      prev_y = y;
      x = y;
    }
  }
}

void apply_lowpass(std::vector<double>& samples, double dt, double f_lp) {
  const double a = 1.0 - std::exp(-dt * 2.0 * M_PI * f_lp);
  double y = samples.empty() ? 0.0 : samples.front();
  for (double& x : samples) {
    y += a * (x - y);
    x = y;
  }
}

AnalogTrace amplify(const AnalogTrace& raw, const CircuitParams& circuit, Rng& rng) {
  circuit.validate();
  if (!(raw.dt > 0.0)) throw std::invalid_argument("trace dt must be > 0");
  if (raw.dt > 1.0 / (10.0 * circuit.f_lp))
    throw std::invalid_argument("trace undersampled for f_lp: need dt <= 1/(10 f_lp)");

  AnalogTrace out = raw;
  if (!circuit.dc_coupled())
    apply_highpass(out.samples, out.dt, *circuit.f_hp, circuit.hp_stages);
  apply_lowpass(out.samples, out.dt, circuit.f_lp);
  const double gain = units::db_to_amplitude_ratio(circuit.gain_db);
  for (double& x : out.samples) x *= gain;
  if (circuit.noise_rms > 0.0)
    for (double& x : out.samples) x += circuit.noise_rms * rng.normal();
  return out;
}

AnalogTrace reflection_inject(const AnalogTrace& trace_at_device,
                              const CircuitParams& circuit) {
  AnalogTrace add;
  add.t0 = trace_at_device.t0;
  add.dt = trace_at_device.dt;
  add.samples.assign(trace_at_device.samples.size(), 0.0);
  if (circuit.line_delay <= 0.0 || !circuit.shunted()) return add;
  const double gamma = (*circuit.r_shunt - 50.0) / (*circuit.r_shunt + 50.0);
  if (gamma == 0.0) return add;
  const double round_trip = 2.0 * circuit.line_delay;
  const auto shift = static_cast<std::ptrdiff_t>(std::llround(round_trip / add.dt));
  for (std::size_t i = 0; i < add.samples.size(); ++i) {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) - shift;
    if (j >= 0) add.samples[i] = gamma * trace_at_device.samples[static_cast<std::size_t>(j)];
  }
  return add;
}

double dc_monitor(const std::vector<ElectroThermalState>& state_log,
                  const CircuitParams& circuit, double window,
                  double quiescent_offset_v) {
  if (state_log.empty()) throw std::invalid_argument("dc_monitor: empty state log");
  const double t_end = state_log.back().t;
  const double t_begin = t_end - window;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : state_log) {
    if (s.t < t_begin) continue;
    sum += raw_readout_voltage(s, circuit);
    ++n;
  }
  if (n == 0) throw std::invalid_argument("dc_monitor: window covers no samples");
  return (sum / static_cast<double>(n) + quiescent_offset_v) * 1e3;
}

}  // namespace snspd
