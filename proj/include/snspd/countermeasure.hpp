#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snspd/analysis.hpp"
#include "snspd/stimulus.hpp"

namespace snspd {

struct PulseFeatures {
  double peak_v = 0.0;        // V
  double rise_10_90 = 0.0;    // s
  double recovery_tau = 0.0;  // s, exponential fit to the falling segment
  double area = 0.0;          // V s
  bool plateau_flag = false;  // post-peak level held above 50% of peak
  bool valid = false;         // false: fit failure, exclude from scoring
};

// Windowed features around one discriminator click. nominal_recovery is the
// electrical recovery constant l_k / r_shunt; the plateau test requires the
// level to stay above half peak for more than 5x that.
PulseFeatures extract_features(const AnalogTrace& trace, const Click& click,
                               double nominal_recovery);

enum class PulseLabel { Real, Fake, Abstain };

// Linear score over normalized features; auditable by construction.
struct ShapeModel {
  std::array<double, 5> mean{};
  std::array<double, 5> scale{};
  std::array<double, 5> weight{};
  double bias = 0.0;
};

ShapeModel train_shape_model(const std::vector<PulseFeatures>& real,
                             const std::vector<PulseFeatures>& fake);

// Positive score means FAKE. Abstains on invalid features.
std::pair<PulseLabel, double> classify(const PulseFeatures& f, const ShapeModel& m);

// Rank statistic over the two score samples (probability a fake outscores a
// real; ties count half).
double auc_from_scores(const std::vector<double>& real_scores,
                       const std::vector<double>& fake_scores);

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;  // fakes flagged
  double fpr = 0.0;  // reals flagged
};

std::vector<RocPoint> roc_curve(const std::vector<double>& real_scores,
                                const std::vector<double>& fake_scores);

struct PulseCorpus {
  std::vector<PulseFeatures> real;
  std::vector<PulseFeatures> fake;
};

// Labeled pulses: real detections from high-rate photon illumination (pulse
// heights vary with recovery pile-up) and controlled fakes from the standard
// attack at a relaxed repetition rate.
PulseCorpus collect_pulse_corpus(const DeviceParams& device,
                                 const CircuitParams& circuit,
                                 const AttackParams& attack, int n_real,
                                 int n_fake, std::uint64_t seed,
                                 Execution exec = default_execution());

struct V2Point {
  double duty = 0.0;
  double v2_mv = 0.0;
};

struct V2Sweep {
  std::vector<V2Point> points;
  double slope_mv = 0.0;      // per unit duty
  double intercept_mv = 0.0;
  double r2 = 0.0;
};

// DC-port average voltage against blinding duty cycle at 10 kHz repetition.
// quiescent_offset_v stands in for the counting floor of normal high-rate
// operation.
V2Sweep v2_sweep(const DeviceParams& device, const CircuitParams& circuit,
                 const std::vector<double>& duty_grid, const AttackParams& attack,
                 std::uint64_t seed, double quiescent_offset_v = 0.2e-3,
                 Execution exec = default_execution());

struct EvasionResult {
  double duty = 0.0;
  double fake_rate_hz = 0.0;
  double v2_attack_mv = 0.0;
  double v2_normal_mean_mv = 0.0;
  double v2_normal_sigma_mv = 0.0;
  double alarm_threshold_mv = 0.35;
  bool within_band = false;  // attack V2 within 3 sigma of normal operation
  bool under_alarm = false;
};

// Compares V2 under a low-duty fake-injecting attack against the
// distribution of V2 in normal operation at the given honest photon rate.
// Both sides carry the same photon traffic, so the comparison is
// like-for-like.
EvasionResult v2_evasion(const DeviceParams& device, const CircuitParams& circuit,
                         const AttackParams& attack, double duty,
                         double honest_rate_hz, int n_windows, std::uint64_t seed,
                         double alarm_threshold_mv = 0.35,
                         Execution exec = default_execution());

}  // namespace snspd
