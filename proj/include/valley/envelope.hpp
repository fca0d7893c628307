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

// Peak and valley analysis of spectral envelopes.
//
// The relative level of a spectral valley (RLSV) between two formant peaks
// is mean_level - valley_level in dB: positive when the valley lies below
// the mean spectral level, zero when it touches it. The front/back
// features V_I and V_II use the opposite orientation (valley level relative
// to the mean, see ValleyMeasurement::relative_level_db), so that a shallow
// first valley makes V_I large.

#ifndef VALLEY_ENVELOPE_HPP_
#define VALLEY_ENVELOPE_HPP_

#include <span>
#include <string_view>
#include <utility>

#include "valley/scales.hpp"
#include "valley/types.hpp"

namespace valley {

Decibels MeanSpectralLevel(const SpectralEnvelope& env);

struct Peak {
  double freq_hz = 0.0;
  double level_db = 0.0;
  std::size_t bin = 0;
};

/// Highest local maximum within +-window_hz of nominal_hz, refined by a
/// parabola through the three surrounding bins. Throws PeakNotFoundError
/// (formant index `formant_index`) when the window holds no local maximum.
Peak LocatePeak(const SpectralEnvelope& env, double nominal_hz,
                double window_hz = 200.0, int formant_index = 0);

/// Local maximum closest in frequency to nominal_hz within +-window_hz,
/// with the same refinement and error as LocatePeak.
Peak LocateNearestPeak(const SpectralEnvelope& env, double nominal_hz,
                       double window_hz = 200.0, int formant_index = 0);

enum class ValleyLabel { kV12, kV23, kVI, kVII };

std::string_view ValleyLabelName(ValleyLabel label);

struct ValleyMeasurement {
  double v_db = 0.0;  // mean_level - valley_level
  double valley_freq = 0.0;
  double valley_level_db = 0.0;
  double mean_level_db = 0.0;
  double lower_peak_freq = 0.0;
  double upper_peak_freq = 0.0;
  ValleyLabel label = ValleyLabel::kV12;

  /// valley_level - mean_level, i.e. -v_db.
  double relative_level_db() const { return -v_db; }
};

/// Valley = minimum envelope sample strictly between the two peak
/// frequencies. Throws valley-undefined unless the peaks are at least two
/// grid bins apart.
ValleyMeasurement Rlsv(const SpectralEnvelope& env, double lower_peak_hz,
                       double upper_peak_hz, ValleyLabel label);

/// Locates both peaks around nominal frequencies and measures the valley.
/// The search window is min(window_hz, half the nominal spacing) so the two
/// searches never overlap. `lower_index` names the lower formant in errors.
ValleyMeasurement MeasureValley(const SpectralEnvelope& env, double lower_hz,
                                double upper_hz, ValleyLabel label,
                                double window_hz = 200.0, int lower_index = 1);

/// V_I from the (F1, F2) peaks and V_II from the (F2, F3) peaks of the
/// same envelope. Requires three ascending formants.
std::pair<ValleyMeasurement, ValleyMeasurement> MeasureV1V2(
    const SpectralEnvelope& env, std::span<const FormantSpec> formants,
    double window_hz = 200.0);

}  // namespace valley

#endif  // VALLEY_ENVELOPE_HPP_
