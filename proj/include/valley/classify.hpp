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

// Frame-level valley features, segment decisions and scoring.

#ifndef VALLEY_CLASSIFY_HPP_
#define VALLEY_CLASSIFY_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "valley/corpus.hpp"
#include "valley/sigproc.hpp"
#include "valley/types.hpp"

namespace valley {

/// LP order used when FrameConfig::lp_order is 0: rate / 1000 + 2.
int DefaultLpOrder(double sample_rate);

struct FrameConfig {
  double frame_ms = 20.0;
  double overlap = 0.5;
  double preemphasis = 0.97;
  WindowKind window = WindowKind::kHamming;
  int lp_order = 0;  // 0: DefaultLpOrder(rate)
  int n_points = 1024;
  FormantGates gates;
  double peak_window_hz = 200.0;
  MeanKind mean_kind = MeanKind::kPower;
};

struct FrameFeatures {
  /// Valley levels relative to the mean spectral level (valley - mean).
  double v1_db = std::numeric_limits<double>::quiet_NaN();
  double v2_db = std::numeric_limits<double>::quiet_NaN();
  std::vector<FormantSpec> formants;  // first three root-derived formants
  bool valid = false;
};

/// Per frame: pre-emphasis, window, autocorrelation LP, envelope and
/// predictor roots. Peaks are searched around the first three root
/// frequencies. Frames with fewer than three formant candidates, silent
/// frames and frames with an undefined valley are returned invalid.
std::vector<FrameFeatures> FramePipeline(const SignalBuffer& segment,
                                         const FrameConfig& cfg = {});

struct SegmentDecision {
  double mean_v1 = 0.0;
  double mean_v2 = 0.0;
  double mean_diff = 0.0;  // mean_v1 - mean_v2
  /// Value compared with the threshold by the deciding rule.
  double statistic = 0.0;
  VowelClass predicted = VowelClass::kFront;
  int frames_used = 0;
  int frames_discarded = 0;
};

inline constexpr double kDefaultValleyThresholdDb = 5.0;

/// Back iff mean(V_I - V_II) over valid frames > threshold_db. Throws
/// no-decision when no frame is valid.
SegmentDecision DecideSegment(std::span<const FrameFeatures> features,
                              double threshold_db = kDefaultValleyThresholdDb);

enum class SpacingRule {
  kF3F2Bark,  // front iff mean(z(F3) - z(F2)) < threshold
  kF2F1Bark,  // front iff mean(z(F2) - z(F1)) < threshold
  kV1Only,    // back iff mean V_I > threshold
  kV2Only,    // back iff mean V_II < threshold
};

std::optional<SpacingRule> ParseSpacingRule(std::string_view name);
const char* SpacingRuleName(SpacingRule rule);
double DefaultRuleThreshold(SpacingRule rule);

SegmentDecision DecideByFormantSpacing(std::span<const FrameFeatures> features,
                                       SpacingRule rule, double threshold);

struct ClassificationReport {
  std::string feature;
  double threshold = 0.0;
  int front_n = 0;
  int back_n = 0;
  int front_correct = 0;
  int back_correct = 0;
  double front_acc = 0.0;  // percent
  double back_acc = 0.0;
  double overall = 0.0;
  /// confusion[truth][predicted], index 0 front, 1 back.
  int confusion[2][2] = {{0, 0}, {0, 0}};
};

/// Accuracy bookkeeping; truths must be front or back. Throws
/// invalid-argument for empty or mismatched input.
ClassificationReport Score(std::span<const VowelClass> predicted,
                           std::span<const VowelClass> truths,
                           const std::string& feature = "",
                           double threshold = 0.0);

struct HistogramBin {
  double center = 0.0;
  double frequency = 0.0;
};

struct Histogram {
  std::vector<HistogramBin> bins;
  int below = 0;  // values under lo
  int above = 0;  // values over hi
};

/// Bins [lo, lo + w), ... covering [lo, hi]; hi itself falls in the last
/// bin. Frequencies are normalized over in-range values.
Histogram NormalizedHistogram(std::span<const double> values, double bin_width,
                              double lo, double hi);

/// First bin center at which `rising` overtakes `falling` (same binning).
std::optional<double> HistogramCrossover(const Histogram& falling,
                                         const Histogram& rising);

/// Worker count: VALLEY_THREADS if set and positive, else the hardware
/// concurrency, capped by n.
unsigned WorkerCount(std::size_t n);

/// Calls fn(i) for i in [0, n) across WorkerCount(n) threads. Each index
/// is handled once; results must be written to per-index slots.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Features of one selected segment.
struct SegmentFeatures {
  std::string segment_id;
  std::string label;
  VowelClass truth = VowelClass::kFront;
  std::vector<FrameFeatures> frames;
};

/// Segment selection plus FramePipeline over a loaded corpus. When `noise`
/// is set every segment gets its own noise seed derived from
/// (noise->seed, utterance id, segment index).
std::vector<SegmentFeatures> ExtractCorpusFeatures(
    std::span<const CorpusUtterance> corpus, const SelectionConfig& selection,
    const FrameConfig& frame_cfg, const NoiseSpec* noise = nullptr,
    const SignalBuffer* babble = nullptr);

enum class Feature { kValley, kF3F2, kF2F1, kV1, kV2 };

std::optional<Feature> ParseFeature(std::string_view name);
const char* FeatureName(Feature f);
double DefaultThreshold(Feature f);

struct SegmentRow {
  std::string segment_id;
  std::string label;
  VowelClass truth = VowelClass::kFront;
  std::optional<SegmentDecision> decision;
};

struct Evaluation {
  std::vector<SegmentRow> rows;
  ClassificationReport report;
  int no_decision = 0;
  int central_skipped = 0;
};

/// Decides every segment and scores the decided ones. Central vowels are
/// skipped unless include_central, in which case they count as back.
Evaluation Evaluate(std::span<const SegmentFeatures> segments, Feature feature,
                    double threshold, bool include_central = false);

}  // namespace valley

#endif  // VALLEY_CLASSIFY_HPP_
