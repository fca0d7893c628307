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

#include "valley/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "valley/envelope.hpp"
#include "valley/errors.hpp"
#include "valley/scales.hpp"

namespace valley {

int DefaultLpOrder(double sample_rate) {
  return static_cast<int>(std::lround(sample_rate / 1000.0)) + 2;
}

std::vector<FrameFeatures> FramePipeline(const SignalBuffer& segment,
                                         const FrameConfig& cfg) {
  const int order = cfg.lp_order > 0 ? cfg.lp_order : DefaultLpOrder(segment.sample_rate);
  const auto frames = FrameSignal(segment, cfg.frame_ms, cfg.overlap);
  std::vector<FrameFeatures> out;
  out.reserve(frames.size());
  for (const auto& frame : frames) {
    FrameFeatures ff;
    try {
      const auto emphasized =
          Preemphasize(SignalBuffer{frame, segment.sample_rate}, cfg.preemphasis);
      const auto windowed = ApplyWindow(emphasized.samples, cfg.window);
      const auto model = LpcFromFrame(windowed, order, segment.sample_rate);
      const auto roots = PolynomialRoots(model.PredictorPolynomial());
      auto formants = RootsToFormants(roots, segment.sample_rate, cfg.gates);
      if (formants.size() < 3) {
        out.push_back(std::move(ff));
        continue;
      }
      formants.resize(3);
      const auto env = LpcEnvelope(model, cfg.n_points, cfg.mean_kind);
      const auto [v1, v2] = MeasureV1V2(env, formants, cfg.peak_window_hz);
      ff.v1_db = v1.relative_level_db();
      ff.v2_db = v2.relative_level_db();
      ff.formants = std::move(formants);
      ff.valid = true;
    } catch (const Error&) {
      ff = FrameFeatures{};
    }
    out.push_back(std::move(ff));
  }
  return out;
}

namespace {

struct FrameMeans {
  double v1 = 0.0;
  double v2 = 0.0;
  double z32 = 0.0;
  double z21 = 0.0;
  int used = 0;
  int discarded = 0;
};

FrameMeans Average(std::span<const FrameFeatures> features) {
  FrameMeans m;
  for (const auto& f : features) {
    if (!f.valid) {
      ++m.discarded;
      continue;
    }
    ++m.used;
    m.v1 += f.v1_db;
    m.v2 += f.v2_db;
    m.z32 += BarkSpacing(f.formants[1].frequency, f.formants[2].frequency);
    m.z21 += BarkSpacing(f.formants[0].frequency, f.formants[1].frequency);
  }
  if (m.used == 0) {
    throw Error(ErrorCode::kNoDecision, "segment has no valid frames");
  }
  m.v1 /= m.used;
  m.v2 /= m.used;
  m.z32 /= m.used;
  m.z21 /= m.used;
  return m;
}

SegmentDecision FromMeans(const FrameMeans& m) {
  SegmentDecision d;
  d.mean_v1 = m.v1;
  d.mean_v2 = m.v2;
  d.mean_diff = m.v1 - m.v2;
  d.frames_used = m.used;
  d.frames_discarded = m.discarded;
  return d;
}

}  // namespace

SegmentDecision DecideSegment(std::span<const FrameFeatures> features,
                              double threshold_db) {
  SegmentDecision d = FromMeans(Average(features));
  d.statistic = d.mean_diff;
  d.predicted = d.mean_diff > threshold_db ? VowelClass::kBack : VowelClass::kFront;
  return d;
}

std::optional<SpacingRule> ParseSpacingRule(std::string_view name) {
  if (name == "f3f2_3bark") return SpacingRule::kF3F2Bark;
  if (name == "f2f1_bark") return SpacingRule::kF2F1Bark;
  if (name == "v1_only") return SpacingRule::kV1Only;
  if (name == "v2_only") return SpacingRule::kV2Only;
  return std::nullopt;
}

const char* SpacingRuleName(SpacingRule rule) {
  switch (rule) {
    case SpacingRule::kF3F2Bark: return "f3f2_3bark";
    case SpacingRule::kF2F1Bark: return "f2f1_bark";
    case SpacingRule::kV1Only: return "v1_only";
    case SpacingRule::kV2Only: return "v2_only";
  }
  return "?";
}

double DefaultRuleThreshold(SpacingRule rule) {
  switch (rule) {
    case SpacingRule::kF3F2Bark:
    case SpacingRule::kF2F1Bark:
      return 3.0;
    case SpacingRule::kV1Only:
      return -5.0;
    case SpacingRule::kV2Only:
      return -15.0;
  }
  return 0.0;
}

SegmentDecision DecideByFormantSpacing(std::span<const FrameFeatures> features,
                                       SpacingRule rule, double threshold) {
  const FrameMeans m = Average(features);
  SegmentDecision d = FromMeans(m);
  bool back = false;
  switch (rule) {
    case SpacingRule::kF3F2Bark:
      d.statistic = m.z32;
      back = !(m.z32 < threshold);
      break;
    case SpacingRule::kF2F1Bark:
      d.statistic = m.z21;
      back = !(m.z21 < threshold);
      break;
    case SpacingRule::kV1Only:
      d.statistic = m.v1;
      back = m.v1 > threshold;
      break;
    case SpacingRule::kV2Only:
      d.statistic = m.v2;
      back = m.v2 < threshold;
      break;
  }
  d.predicted = back ? VowelClass::kBack : VowelClass::kFront;
  return d;
}

ClassificationReport Score(std::span<const VowelClass> predicted,
                           std::span<const VowelClass> truths,
                           const std::string& feature, double threshold) {
  if (predicted.empty()) ThrowInvalid("Score: no decisions");
  if (predicted.size() != truths.size()) ThrowInvalid("Score: length mismatch");
  ClassificationReport r;
  r.feature = feature;
  r.threshold = threshold;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] == VowelClass::kCentral || predicted[i] == VowelClass::kCentral) {
      ThrowInvalid("Score: central vowels must be excluded before scoring");
    }
    const int t = truths[i] == VowelClass::kBack ? 1 : 0;
    const int p = predicted[i] == VowelClass::kBack ? 1 : 0;
    ++r.confusion[t][p];
  }
  r.front_n = r.confusion[0][0] + r.confusion[0][1];
  r.back_n = r.confusion[1][0] + r.confusion[1][1];
  r.front_correct = r.confusion[0][0];
  r.back_correct = r.confusion[1][1];
  r.front_acc = r.front_n > 0 ? 100.0 * r.front_correct / r.front_n : 0.0;
  r.back_acc = r.back_n > 0 ? 100.0 * r.back_correct / r.back_n : 0.0;
  r.overall = 100.0 * (r.front_correct + r.back_correct) / (r.front_n + r.back_n);
  return r;
}

Histogram NormalizedHistogram(std::span<const double> values, double bin_width,
                              double lo, double hi) {
  if (values.empty()) ThrowInvalid("NormalizedHistogram: no values");
  if (!(bin_width > 0.0)) ThrowInvalid("NormalizedHistogram: bin width must be > 0");
  if (!(hi > lo)) ThrowInvalid("NormalizedHistogram: empty range");
  const double span = (hi - lo) / bin_width;
  auto n = static_cast<std::size_t>(std::ceil(span - 1e-9));
  n = std::max<std::size_t>(n, 1);
  Histogram h;
  std::vector<int> counts(n, 0);
  int in_range = 0;
  for (double v : values) {
    if (v < lo) {
      ++h.below;
    } else if (v > hi) {
      ++h.above;
    } else {
      auto idx = static_cast<std::size_t>(std::floor((v - lo) / bin_width));
      idx = std::min(idx, n - 1);
      ++counts[idx];
      ++in_range;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    h.bins.push_back({lo + (static_cast<double>(i) + 0.5) * bin_width,
                      in_range > 0 ? static_cast<double>(counts[i]) / in_range : 0.0});
  }
  return h;
}

std::optional<double> HistogramCrossover(const Histogram& falling,
                                         const Histogram& rising) {
  if (falling.bins.size() != rising.bins.size()) {
    ThrowInvalid("HistogramCrossover: histograms use different bins");
  }
  bool seen_falling = false;
  for (std::size_t i = 0; i < falling.bins.size(); ++i) {
    if (falling.bins[i].frequency > rising.bins[i].frequency) seen_falling = true;
    if (seen_falling && rising.bins[i].frequency > falling.bins[i].frequency) {
      return rising.bins[i].center;
    }
  }
  return std::nullopt;
}

unsigned WorkerCount(std::size_t n) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VALLEY_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) workers = static_cast<unsigned>(v);
  }
  if (n < workers) workers = static_cast<unsigned>(std::max<std::size_t>(n, 1));
  return workers;
}

void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = WorkerCount(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<SegmentFeatures> ExtractCorpusFeatures(
    std::span<const CorpusUtterance> corpus, const SelectionConfig& selection,
    const FrameConfig& frame_cfg, const NoiseSpec* noise,
    const SignalBuffer* babble) {
  struct Job {
    VowelSegment segment;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (const auto& utt : corpus) {
    auto segments = SelectVowelSegments(utt.labels, utt.audio, selection, utt.id);
    for (std::size_t i = 0; i < segments.size(); ++i) {
      jobs.push_back({std::move(segments[i]), i});
    }
  }
  std::vector<SegmentFeatures> out(jobs.size());
  ParallelFor(jobs.size(), [&](std::size_t j) {
    const auto& job = jobs[j];
    SegmentFeatures& sf = out[j];
    sf.segment_id = job.segment.utterance_id + ":" + std::to_string(job.index);
    sf.label = job.segment.phone_label;
    sf.truth = job.segment.fb_class;
    if (noise != nullptr) {
      NoiseSpec spec = *noise;
      spec.seed = SegmentSeed(noise->seed, job.segment.utterance_id, job.index);
      SignalBuffer noisy;
      try {
        noisy = MixNoise(job.segment.audio, spec, babble);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateInput) throw;
        noisy = job.segment.audio;
      }
      sf.frames = FramePipeline(noisy, frame_cfg);
    } else {
      sf.frames = FramePipeline(job.segment.audio, frame_cfg);
    }
  });
  return out;
}

std::optional<Feature> ParseFeature(std::string_view name) {
  if (name == "valley") return Feature::kValley;
  if (name == "f3f2_3bark" || name == "f3f2") return Feature::kF3F2;
  if (name == "f2f1_bark" || name == "f2f1") return Feature::kF2F1;
  if (name == "v1_only") return Feature::kV1;
  if (name == "v2_only") return Feature::kV2;
  return std::nullopt;
}

const char* FeatureName(Feature f) {
  switch (f) {
    case Feature::kValley: return "valley";
    case Feature::kF3F2: return "f3f2_3bark";
    case Feature::kF2F1: return "f2f1_bark";
    case Feature::kV1: return "v1_only";
    case Feature::kV2: return "v2_only";
  }
  return "?";
}

namespace {

SpacingRule RuleOf(Feature f) {
  switch (f) {
    case Feature::kF3F2: return SpacingRule::kF3F2Bark;
    case Feature::kF2F1: return SpacingRule::kF2F1Bark;
    case Feature::kV1: return SpacingRule::kV1Only;
    default: return SpacingRule::kV2Only;
  }
}

}  // namespace

double DefaultThreshold(Feature f) {
  if (f == Feature::kValley) return kDefaultValleyThresholdDb;
  return DefaultRuleThreshold(RuleOf(f));
}

Evaluation Evaluate(std::span<const SegmentFeatures> segments, Feature feature,
                    double threshold, bool include_central) {
  Evaluation ev;
  std::vector<VowelClass> predicted;
  std::vector<VowelClass> truths;
  for (const auto& seg : segments) {
    VowelClass truth = seg.truth;
    if (truth == VowelClass::kCentral) {
      if (!include_central) {
        ++ev.central_skipped;
        continue;
      }
      truth = VowelClass::kBack;
    }
    SegmentRow row{seg.segment_id, seg.label, truth, std::nullopt};
    try {
      row.decision = feature == Feature::kValley
                         ? DecideSegment(seg.frames, threshold)
                         : DecideByFormantSpacing(seg.frames, RuleOf(feature), threshold);
      predicted.push_back(row.decision->predicted);
      truths.push_back(truth);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoDecision) throw;
      ++ev.no_decision;
    }
    ev.rows.push_back(std::move(row));
  }
  if (predicted.empty()) {
    throw Error(ErrorCode::kNoDecision, "no segment could be decided");
  }
  ev.report = Score(predicted, truths, FeatureName(feature), threshold);
  return ev;
}

}  // namespace valley
