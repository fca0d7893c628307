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

// Cascade formant synthesizer.

#ifndef VALLEY_SYNTH_HPP_
#define VALLEY_SYNTH_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "valley/types.hpp"

namespace valley {

/// y[n] = gain x[n] - a1 y[n-1] - a2 y[n-2].
struct ResonatorCoefficients {
  double gain = 1.0;
  double a1 = 0.0;
  double a2 = 0.0;

  double pole_radius() const;
};

/// Poles at radius exp(-pi B / fs) and angle +-2 pi F / fs, unity gain at DC.
/// Throws invalid-argument unless 0 < F < fs / 2 and B > 0.
ResonatorCoefficients MakeResonator(const FormantSpec& formant,
                                    double sample_rate);

enum class ExcitationKind { kUnitImpulse, kImpulseTrain, kTiltedTrain };

struct Excitation {
  ExcitationKind kind = ExcitationKind::kUnitImpulse;
  double f0 = 0.0;                   // Hz, trains only
  double tilt_db_per_octave = 0.0;   // tilted train only
  double duration_s = 0.5;

  static Excitation UnitImpulse() { return {}; }
  static Excitation ImpulseTrain(double f0, double duration_s = 0.5) {
    return {ExcitationKind::kImpulseTrain, f0, 0.0, duration_s};
  }
  static Excitation TiltedTrain(double f0, double tilt_db_per_octave = -6.0,
                                double duration_s = 0.5) {
    return {ExcitationKind::kTiltedTrain, f0, tilt_db_per_octave, duration_s};
  }
};

/// Source signal for `exc`: a unit impulse at n = 0, or unit impulses at
/// round(k fs / f0). A tilted train is additionally passed through
/// ApplySourceTilt.
SignalBuffer MakeExcitation(const Excitation& exc, double sample_rate,
                            std::size_t n_samples);

/// Runs `n_samples` of the excitation through every resonator in order.
SignalBuffer Synthesize(std::span<const FormantSpec> formants,
                        const Excitation& exc, double sample_rate,
                        std::size_t n_samples);

/// Filters an arbitrary buffer through the cascade.
SignalBuffer FilterCascade(std::span<const FormantSpec> formants,
                           const SignalBuffer& x);

/// Corner of the one-pole lowpass realizing each -6 dB/octave of tilt.
inline constexpr double kTiltCornerHz = 50.0;

/// Glottal-source slope: one DC-normalized one-pole lowpass (corner
/// kTiltCornerHz) per -6 dB/octave. `db_per_octave` must be a non-positive
/// multiple of 6.
SignalBuffer ApplySourceTilt(const SignalBuffer& x, double db_per_octave);

/// Analytic dB response of the same tilt filter at `hz`.
double SourceTiltDb(double hz, double sample_rate, double db_per_octave);

/// Cascade spectrum with the source tilt added.
SpectralEnvelope SourceFilterSpectrum(std::span<const FormantSpec> formants,
                                      double tilt_db_per_octave,
                                      double sample_rate, int n_points = 4096);

struct FormantLevels {
  std::vector<double> levels_db;
};

/// L_i = level of the local maximum nearest F_i within +-window_hz. Throws
/// PeakNotFoundError with the formant index when there is none.
FormantLevels MeasureFormantLevels(const SpectralEnvelope& env,
                                   std::span<const FormantSpec> formants,
                                   double window_hz = 200.0);

struct CalibrationOptions {
  double reference_bandwidth_hz = 100.0;  // B1, held fixed
  double min_bandwidth_hz = 30.0;
  double max_bandwidth_hz = 600.0;
  double tolerance_db = 0.5;
  int max_rounds = 50;
  int bisection_steps = 40;
  int n_points = 1024;
  /// Formants above F3 included in the synthesis (bandwidths fixed).
  std::vector<FormantSpec> higher_formants;
};

struct CalibrationResult {
  std::vector<double> bandwidths;    // B1, B2, B3
  std::vector<double> residuals_db;  // measured - target, for L2 and L3
  int rounds = 0;
};

/// Finds B2, B3 so that L2 - L1 and L3 - L1 measured on the source-filter
/// spectrum match the same differences in `target_levels` within tolerance.
/// Each round bisects B2 then B3 in [min, max]; a vanished peak counts as
/// "bandwidth too large". Throws CalibrationError with the best bandwidths
/// and residuals if the targets are not met.
CalibrationResult CalibrateBandwidths(std::span<const double> formant_freqs,
                                      const FormantLevels& target_levels,
                                      const Excitation& exc,
                                      double sample_rate,
                                      const CalibrationOptions& options = {});

}  // namespace valley

#endif  // VALLEY_SYNTH_HPP_
