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

#include "valley/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "valley/envelope.hpp"
#include "valley/errors.hpp"
#include "valley/sigproc.hpp"

namespace valley {

double ResonatorCoefficients::pole_radius() const { return std::sqrt(a2); }

ResonatorCoefficients MakeResonator(const FormantSpec& formant,
                                    double sample_rate) {
  if (!(sample_rate > 0.0)) ThrowInvalid("MakeResonator: bad sample rate");
  if (!(formant.frequency > 0.0) || !(formant.frequency < 0.5 * sample_rate)) {
    ThrowInvalid("MakeResonator: formant frequency must lie in (0, fs/2)");
  }
  if (!(formant.bandwidth > 0.0)) ThrowInvalid("MakeResonator: bandwidth <= 0");
  const double r = std::exp(-std::numbers::pi * formant.bandwidth / sample_rate);
  const double theta = 2.0 * std::numbers::pi * formant.frequency / sample_rate;
  ResonatorCoefficients c;
  c.a1 = -2.0 * r * std::cos(theta);
  c.a2 = r * r;
  c.gain = 1.0 + c.a1 + c.a2;
  return c;
}

namespace {

int TiltStages(double db_per_octave) {
  if (!std::isfinite(db_per_octave) || db_per_octave > 0.0) {
    ThrowInvalid("source tilt must be <= 0 dB/octave");
  }
  const double stages = -db_per_octave / 6.0;
  const double rounded = std::round(stages);
  if (std::abs(stages - rounded) > 1e-9) {
    ThrowInvalid("source tilt must be a multiple of -6 dB/octave");
  }
  return static_cast<int>(rounded);
}

double TiltPole(double sample_rate) {
  return std::exp(-2.0 * std::numbers::pi * kTiltCornerHz / sample_rate);
}

}  // namespace

SignalBuffer MakeExcitation(const Excitation& exc, double sample_rate,
                            std::size_t n_samples) {
  if (!(sample_rate > 0.0)) ThrowInvalid("MakeExcitation: bad sample rate");
  SignalBuffer x{std::vector<double>(n_samples, 0.0), sample_rate};
  if (n_samples == 0) return x;
  if (exc.kind == ExcitationKind::kUnitImpulse) {
    x.samples[0] = 1.0;
    return x;
  }
  if (!(exc.f0 > 0.0)) ThrowInvalid("MakeExcitation: f0 must be > 0 for trains");
  const double period = sample_rate / exc.f0;
  if (static_cast<double>(n_samples) < period) {
    ThrowInvalid("MakeExcitation: buffer shorter than one period");
  }
  for (std::size_t k = 0;; ++k) {
    const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(k) * period));
    if (n >= n_samples) break;
    x.samples[n] = 1.0;
  }
  if (exc.kind == ExcitationKind::kTiltedTrain) {
    return ApplySourceTilt(x, exc.tilt_db_per_octave);
  }
  return x;
}

SignalBuffer FilterCascade(std::span<const FormantSpec> formants,
                           const SignalBuffer& x) {
  SignalBuffer y = x;
  for (const auto& f : formants) {
    const auto c = MakeResonator(f, x.sample_rate);
    double y1 = 0.0;
    double y2 = 0.0;
    for (double& s : y.samples) {
      const double out = c.gain * s - c.a1 * y1 - c.a2 * y2;
      y2 = y1;
      y1 = out;
      s = out;
    }
  }
  return y;
}

SignalBuffer Synthesize(std::span<const FormantSpec> formants,
                        const Excitation& exc, double sample_rate,
                        std::size_t n_samples) {
  if (n_samples == 0) ThrowInvalid("Synthesize: n_samples must be > 0");
  for (const auto& f : formants) MakeResonator(f, sample_rate);
  return FilterCascade(formants, MakeExcitation(exc, sample_rate, n_samples));
}

SignalBuffer ApplySourceTilt(const SignalBuffer& x, double db_per_octave) {
  const int stages = TiltStages(db_per_octave);
  SignalBuffer y = x;
  const double a = TiltPole(x.sample_rate);
  for (int s = 0; s < stages; ++s) {
    double prev = 0.0;
    for (double& v : y.samples) {
      prev = (1.0 - a) * v + a * prev;
      v = prev;
    }
  }
  return y;
}

double SourceTiltDb(double hz, double sample_rate, double db_per_octave) {
  const int stages = TiltStages(db_per_octave);
  if (stages == 0) return 0.0;
  const double a = TiltPole(sample_rate);
  const double w = 2.0 * std::numbers::pi * hz / sample_rate;
  const double mag = (1.0 - a) / std::abs(1.0 - a * std::polar(1.0, -w));
  return stages * 20.0 * std::log10(mag);
}

SpectralEnvelope SourceFilterSpectrum(std::span<const FormantSpec> formants,
                                      double tilt_db_per_octave,
                                      double sample_rate, int n_points) {
  const auto cascade = AnalyticCascadeSpectrum(formants, sample_rate, n_points);
  std::vector<double> levels(cascade.levels_db().begin(),
                             cascade.levels_db().end());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i] += SourceTiltDb(cascade.freq(i), sample_rate, tilt_db_per_octave);
  }
  return SpectralEnvelope(std::move(levels), sample_rate, cascade.mean_kind());
}

FormantLevels MeasureFormantLevels(const SpectralEnvelope& env,
                                   std::span<const FormantSpec> formants,
                                   double window_hz) {
  FormantLevels out;
  for (std::size_t k = 0; k < formants.size(); ++k) {
    out.levels_db.push_back(LocateNearestPeak(env, formants[k].frequency,
                                              window_hz,
                                              static_cast<int>(k) + 1)
                                .level_db);
  }
  return out;
}

namespace {

struct CalibrationProbe {
  std::span<const double> freqs;
  const CalibrationOptions* options;
  double tilt;
  double sample_rate;

  // Levels of F2 and F3 relative to F1, or nullopt if a peak vanished.
  std::optional<std::array<double, 2>> Measure(const std::array<double, 3>& bw) const {
    std::vector<FormantSpec> formants;
    for (std::size_t k = 0; k < 3; ++k) formants.push_back({freqs[k], bw[k]});
    const std::size_t lower_count = formants.size();
    formants.insert(formants.end(), options->higher_formants.begin(),
                    options->higher_formants.end());
    const auto env = SourceFilterSpectrum(formants, tilt, sample_rate,
                                          options->n_points);
    try {
      const auto levels = MeasureFormantLevels(
          env, std::span<const FormantSpec>(formants).first(lower_count));
      return std::array<double, 2>{levels.levels_db[1] - levels.levels_db[0],
                                   levels.levels_db[2] - levels.levels_db[0]};
    } catch (const PeakNotFoundError&) {
      return std::nullopt;
    }
  }
};

}  // namespace

CalibrationResult CalibrateBandwidths(std::span<const double> formant_freqs,
                                      const FormantLevels& target_levels,
                                      const Excitation& exc,
                                      double sample_rate,
                                      const CalibrationOptions& options) {
  if (formant_freqs.size() != 3 || target_levels.levels_db.size() != 3) {
    ThrowInvalid("CalibrateBandwidths: expects three formants and three levels");
  }
  if (!(formant_freqs[0] < formant_freqs[1] && formant_freqs[1] < formant_freqs[2])) {
    ThrowInvalid("CalibrateBandwidths: formants must be ascending");
  }
  const double tilt = exc.kind == ExcitationKind::kTiltedTrain
                          ? exc.tilt_db_per_octave
                          : 0.0;
  const CalibrationProbe probe{formant_freqs, &options, tilt, sample_rate};
  const std::array<double, 2> target{
      target_levels.levels_db[1] - target_levels.levels_db[0],
      target_levels.levels_db[2] - target_levels.levels_db[0]};

  std::array<double, 3> bw{options.reference_bandwidth_hz,
                           options.reference_bandwidth_hz,
                           options.reference_bandwidth_hz};
  std::array<double, 3> best_bw = bw;
  std::array<double, 2> best_res{std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::infinity()};
  auto score = [](const std::array<double, 2>& r) {
    return std::max(std::abs(r[0]), std::abs(r[1]));
  };

  for (int round = 1; round <= options.max_rounds; ++round) {
    const std::array<double, 3> previous = bw;
    for (std::size_t k = 1; k < 3; ++k) {
      double lo = options.min_bandwidth_hz;
      double hi = options.max_bandwidth_hz;
      double last_valid = lo;
      for (int step = 0; step < options.bisection_steps; ++step) {
        bw[k] = 0.5 * (lo + hi);
        const auto rel = probe.Measure(bw);
        if (!rel) {
          hi = bw[k];
          continue;
        }
        last_valid = bw[k];
        if ((*rel)[k - 1] > target[k - 1]) {
          lo = bw[k];
        } else {
          hi = bw[k];
        }
      }
      bw[k] = last_valid;
    }
    const auto rel = probe.Measure(bw);
    if (rel) {
      const std::array<double, 2> res{(*rel)[0] - target[0], (*rel)[1] - target[1]};
      if (score(res) < score(best_res)) {
        best_res = res;
        best_bw = bw;
      }
      if (score(res) <= options.tolerance_db) {
        return {{bw.begin(), bw.end()}, {res.begin(), res.end()}, round};
      }
    }
    // Each round is a deterministic function of the previous bandwidths.
    if (bw == previous) break;
  }
  throw CalibrationError({best_bw.begin(), best_bw.end()},
                         {best_res.begin(), best_res.end()});
}

}  // namespace valley
