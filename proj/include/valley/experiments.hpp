/* Copyright 2026 The Valley Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Synthesis experiments on formant spacing: objective critical distance
// sweeps, the formant-level and F0 experiments, and the per-vowel table.

#ifndef VALLEY_EXPERIMENTS_HPP_
#define VALLEY_EXPERIMENTS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valley/envelope.hpp"
#include "valley/errors.hpp"
#include "valley/types.hpp"

namespace valley {

struct SweepPoint {
  int step = 0;
  double f_low = 0.0;
  double f_high = 0.0;
  double spacing_bark = 0.0;
  double v_db = 0.0;
};

/// Band of subjective critical distances reported in perceptual studies.
inline constexpr double kCriticalDistanceLowBark = 3.1;
inline constexpr double kCriticalDistanceHighBark = 4.3;

struct OcdResult {
  double ocd_bark = 0.0;
  std::vector<SweepPoint> sweep;
  bool crossing_interpolated = false;
};

class NoCrossingError : public Error {
 public:
  NoCrossingError(const std::string& what, std::vector<SweepPoint> trace)
      : Error(ErrorCode::kNoCrossing, what), trace_(std::move(trace)) {}
  const std::vector<SweepPoint>& trace() const noexcept { return trace_; }

 private:
  std::vector<SweepPoint> trace_;
};

enum class SweepMode {
  kSymmetric,  // lower formant up, upper formant down, same step
  kLowerUp,    // only the lower formant moves
};

struct SweepConfig {
  std::vector<FormantSpec> formants;
  int lower_index = 0;  // 0-based; the pair is (lower_index, lower_index + 1)
  double step_hz = 25.0;
  double sample_rate = 8000.0;
  SweepMode mode = SweepMode::kSymmetric;
  int n_points = 4096;
  double window_hz = 200.0;
  MeanKind mean_kind = MeanKind::kPower;
  /// When the starting spacing is already below the OCD, first move the
  /// pair outward (mirror of the inward step) until the valley is below
  /// the mean, then sweep inward from there.
  bool widen_if_needed = false;
};

/// Steps the pair inward, measuring RLSV on the analytic cascade spectrum
/// at each step, and interpolates the bark spacing where it reaches 0 dB.
/// Throws precondition-violation if the starting RLSV is <= 0 (and widening
/// is off or fails), NoCrossingError when the pair would collide first.
OcdResult OcdSweep(const SweepConfig& cfg);

/// RLSV of the pair (lower_index, lower_index + 1) for the given formants.
double MeasurePairRlsv(std::span<const FormantSpec> formants, int lower_index,
                       double sample_rate, int n_points = 4096,
                       double window_hz = 200.0,
                       MeanKind mean_kind = MeanKind::kPower);

/// Default rate of the two-formant experiment; its Nyquist frequency is the
/// 2 kHz span of the two-formant spectra.
inline constexpr double kTwoFormantRate = 4000.0;

/// One RLSV point per F1 with F2, B1, B2 fixed. Requires every F1 < F2.
std::vector<SweepPoint> TwoFormantCurve(std::span<const double> f1_values,
                                        double f2, double b1, double b2,
                                        double sample_rate = kTwoFormantRate);

/// Two-formant OCD: F1 swept upward from f1_start toward a fixed F2 (F1
/// is first lowered if the start is already past the crossing).
OcdResult TwoFormantOcd(double f2 = 1400.0, double b1 = 100.0,
                        double b2 = 200.0,
                        double sample_rate = kTwoFormantRate,
                        double f1_start = 750.0, double step_hz = 25.0);

/// Uniform-tube formants 500/1500/2500/3500 Hz, all bandwidths 100 Hz.
std::vector<FormantSpec> UniformTubeFormants(double bandwidth = 100.0);

struct LevelCell {
  double b1 = 0.0;
  double b2 = 0.0;
  double l1_minus_l2 = 0.0;
  double v_db = 0.0;
  /// Set when the F1 and F2 peaks could not be resolved separately; the
  /// numeric fields other than b1, b2 are then NaN.
  bool flagged = false;
  std::string note;
};

struct LevelExperimentConfig {
  double f1 = 400.0;
  double f2 = 700.0;
  double f3 = 2500.0;
  double f4 = 3500.0;
  double b34 = 100.0;
  double sample_rate = 8000.0;
  int n_points = 4096;
  double window_hz = 200.0;
};

/// Grid over (B1, B2). L1 and L2 are the nearest local maxima to F1 and F2;
/// V12 is measured between those two peaks.
std::vector<LevelCell> LevelInfluenceExperiment(
    const LevelExperimentConfig& cfg, std::span<const double> b1_values,
    std::span<const double> b2_values);

/// Summary over unflagged cells.
struct LevelSummary {
  double v_min = 0.0;
  double v_max = 0.0;
  double level_diff_min = 0.0;
  double level_diff_max = 0.0;
  int cells = 0;
  int flagged = 0;
};
LevelSummary SummarizeLevels(std::span<const LevelCell> cells);

/// B1 100..250 and B2 50..400 in 25 Hz steps.
std::vector<double> DefaultB1Grid();
std::vector<double> DefaultB2Grid();

struct F0ExperimentConfig {
  std::vector<FormantSpec> formants;  // four formants, bandwidths 100 Hz
  double sample_rate = 8000.0;
  double duration_s = 0.5;
  double skip_s = 0.1;   // onset transient discarded before analysis
  int lp_order = 8;
  int n_points = 4096;
  double window_hz = 200.0;
};

struct F0Row {
  double f0 = 0.0;
  double v12_ref = 0.0;
  double v12_f0 = 0.0;
  double difference = 0.0;  // v12_ref - v12_f0
};

/// Case (a) 400/700 and case (b) 600/1300 with F3 = 2500, F4 = 3500.
F0ExperimentConfig F0CaseA();
F0ExperimentConfig F0CaseB();

/// v12_ref from the analytic spectrum, v12_f0 from the LP envelope of the
/// periodic response (Hamming window over the analyzed span, no
/// pre-emphasis).
std::vector<F0Row> F0InfluenceExperiment(const F0ExperimentConfig& cfg,
                                         std::span<const double> f0_values);

inline const std::vector<double> kTableF0Values = {100, 125, 150, 175,
                                                   200, 225, 250};

struct PbVowelMeans {
  std::string vowel;
  bool front = false;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
};

struct PbOcdRow {
  std::string vowel;  // "tube" for the uniform-tube rows
  std::string valley;  // "V12" or "V23"
  std::optional<OcdResult> result;
  std::string error;  // set when result is empty
  double published = 0.0;  // NaN when unknown
};

struct PbOcdConfig {
  bool female = false;
  double sample_rate = 8000.0;
  double f4 = 3500.0;
  double bandwidth = 100.0;
  double step_hz = 25.0;
  int n_points = 4096;
};

/// Male: 8 kHz, F4 3500. Female: 10 kHz, F4 4200.
PbOcdConfig PbOcdDefaults(bool female);

/// Back vowels: sweep (F1, F2), V12. Front vowels: sweep (F2, F3), V23.
/// The uniform tube is reported both ways at 8 kHz with F4 = 3500 Hz.
std::vector<PbOcdRow> PbOcdTable(std::span<const PbVowelMeans> means,
                                 const PbOcdConfig& cfg);

/// Published per-vowel OCD in bark, NaN when not tabulated.
double PublishedOcd(const std::string& vowel, const std::string& valley,
                    bool female);

}  // namespace valley

#endif  // VALLEY_EXPERIMENTS_HPP_
