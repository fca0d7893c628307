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

#include "valley/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "valley/errors.hpp"

namespace valley {

Decibels MeanSpectralLevel(const SpectralEnvelope& env) {
  return {env.mean_level_db()};
}

std::string_view ValleyLabelName(ValleyLabel label) {
  switch (label) {
    case ValleyLabel::kV12: return "V12";
    case ValleyLabel::kV23: return "V23";
    case ValleyLabel::kVI: return "V_I";
    case ValleyLabel::kVII: return "V_II";
  }
  return "?";
}

namespace {

bool IsLocalMax(std::span<const double> levels, std::size_t i) {
  // Plateaus count once, at their right edge.
  return levels[i] >= levels[i - 1] && levels[i] > levels[i + 1];
}

Peak Refine(const SpectralEnvelope& env, std::size_t best) {
  const auto levels = env.levels_db();
  const double left = levels[best - 1];
  const double mid = levels[best];
  const double right = levels[best + 1];
  const double curvature = left - 2.0 * mid + right;
  double delta = 0.0;
  if (curvature < 0.0) delta = 0.5 * (left - right) / curvature;
  Peak peak;
  peak.bin = best;
  peak.freq_hz = (static_cast<double>(best) + delta) * env.bin_hz();
  peak.level_db = mid - 0.25 * (left - right) * delta;
  return peak;
}

// Interior bins whose frequency lies within +-window of nominal.
std::pair<std::size_t, std::size_t> SearchRange(const SpectralEnvelope& env,
                                                double nominal_hz,
                                                double window_hz) {
  if (!(window_hz > env.bin_hz())) {
    ThrowInvalid("peak search window must exceed the grid spacing");
  }
  const std::size_t n = env.size();
  const double lo_hz = std::max(0.0, nominal_hz - window_hz);
  const double hi_hz = nominal_hz + window_hz;
  auto first = static_cast<std::size_t>(std::ceil(lo_hz / env.bin_hz()));
  const double last_f = std::min(std::floor(hi_hz / env.bin_hz()),
                                 static_cast<double>(n - 2));
  first = std::max<std::size_t>(first, 1);
  if (last_f < static_cast<double>(first)) return {1, 0};
  return {first, static_cast<std::size_t>(last_f)};
}

}  // namespace

Peak LocatePeak(const SpectralEnvelope& env, double nominal_hz,
                double window_hz, int formant_index) {
  const auto levels = env.levels_db();
  const auto [first, last] = SearchRange(env, nominal_hz, window_hz);
  const std::size_t n = levels.size();
  std::size_t best = n;
  for (std::size_t i = first; i <= last; ++i) {
    if (IsLocalMax(levels, i) && (best == n || levels[i] > levels[best])) {
      best = i;
    }
  }
  if (best == n) throw PeakNotFoundError(formant_index, nominal_hz);
  return Refine(env, best);
}

Peak LocateNearestPeak(const SpectralEnvelope& env, double nominal_hz,
                       double window_hz, int formant_index) {
  const auto levels = env.levels_db();
  const auto [first, last] = SearchRange(env, nominal_hz, window_hz);
  const std::size_t n = levels.size();
  std::size_t best = n;
  double best_dist = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    if (!IsLocalMax(levels, i)) continue;
    const double dist = std::abs(env.freq(i) - nominal_hz);
    if (best == n || dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  if (best == n) throw PeakNotFoundError(formant_index, nominal_hz);
  return Refine(env, best);
}

ValleyMeasurement Rlsv(const SpectralEnvelope& env, double lower_peak_hz,
                       double upper_peak_hz, ValleyLabel label) {
  const double bin = env.bin_hz();
  if (!(upper_peak_hz - lower_peak_hz >= 2.0 * bin)) {
    throw Error(ErrorCode::kValleyUndefined,
                std::string(ValleyLabelName(label)) +
                    ": peaks are less than two grid bins apart");
  }
  const auto levels = env.levels_db();
  const auto first = static_cast<std::size_t>(std::floor(lower_peak_hz / bin)) + 1;
  const auto last = std::min(
      static_cast<std::size_t>(std::ceil(upper_peak_hz / bin)) - 1,
      levels.size() - 1);
  std::size_t arg = first;
  double valley = std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i <= last; ++i) {
    if (levels[i] < valley) {
      valley = levels[i];
      arg = i;
    }
  }
  ValleyMeasurement m;
  m.label = label;
  m.mean_level_db = env.mean_level_db();
  m.valley_level_db = valley;
  m.valley_freq = env.freq(arg);
  m.lower_peak_freq = lower_peak_hz;
  m.upper_peak_freq = upper_peak_hz;
  m.v_db = m.mean_level_db - valley;
  return m;
}

ValleyMeasurement MeasureValley(const SpectralEnvelope& env, double lower_hz,
                                double upper_hz, ValleyLabel label,
                                double window_hz, int lower_index) {
  if (!(upper_hz > lower_hz)) {
    ThrowInvalid("MeasureValley: formants must be ascending");
  }
  const double window = std::min(window_hz, 0.5 * (upper_hz - lower_hz));
  if (!(window > env.bin_hz())) {
    throw Error(ErrorCode::kValleyUndefined,
                std::string(ValleyLabelName(label)) +
                    ": formants closer than two grid bins");
  }
  const Peak lower = LocatePeak(env, lower_hz, window, lower_index);
  const Peak upper = LocatePeak(env, upper_hz, window, lower_index + 1);
  return Rlsv(env, lower.freq_hz, upper.freq_hz, label);
}

std::pair<ValleyMeasurement, ValleyMeasurement> MeasureV1V2(
    const SpectralEnvelope& env, std::span<const FormantSpec> formants,
    double window_hz) {
  if (formants.size() < 3) ThrowInvalid("MeasureV1V2: need three formants");
  if (!(formants[0].frequency < formants[1].frequency &&
        formants[1].frequency < formants[2].frequency)) {
    ThrowInvalid("MeasureV1V2: formants must be ascending");
  }
  auto first = MeasureValley(env, formants[0].frequency, formants[1].frequency,
                             ValleyLabel::kVI, window_hz, 1);
  auto second = MeasureValley(env, formants[1].frequency, formants[2].frequency,
                              ValleyLabel::kVII, window_hz, 2);
  return {first, second};
}

}  // namespace valley
