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

// Value types shared across modules.

#ifndef VALLEY_TYPES_HPP_
#define VALLEY_TYPES_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace valley {

/// One formant: center frequency and bandwidth, both in Hz.
struct FormantSpec {
  double frequency = 0.0;
  double bandwidth = 0.0;

  friend bool operator==(const FormantSpec&, const FormantSpec&) = default;
};

/// Sampled real signal. Samples must be finite and the rate positive; see
/// Validate().
struct SignalBuffer {
  std::vector<double> samples;
  double sample_rate = 0.0;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  void Validate() const;
};

/// How the mean spectral level is formed from the dB samples.
///
/// kPower averages the power spectrum and converts back to dB, i.e. the dB
/// value of the mean of |H|^2 over the band. kArithmeticDb averages the dB
/// samples directly.
enum class MeanKind { kPower, kArithmeticDb };

/// Log-magnitude spectrum on a uniform grid covering [0, sample_rate / 2],
/// grid endpoints included.
class SpectralEnvelope {
 public:
  SpectralEnvelope() = default;
  /// Builds the grid for `levels_db.size()` points; throws invalid-argument
  /// for fewer than 2 points or non-finite levels.
  SpectralEnvelope(std::vector<double> levels_db, double sample_rate,
                   MeanKind mean_kind = MeanKind::kPower);

  std::span<const double> freqs() const { return freqs_; }
  std::span<const double> levels_db() const { return levels_db_; }
  double freq(std::size_t i) const { return freqs_[i]; }
  double level(std::size_t i) const { return levels_db_[i]; }
  std::size_t size() const { return levels_db_.size(); }
  double sample_rate() const { return sample_rate_; }
  double bin_hz() const { return bin_hz_; }
  double mean_level_db() const { return mean_level_db_; }
  MeanKind mean_kind() const { return mean_kind_; }

  /// Copy with `gain_db` added to every sample (mean shifts by the same).
  SpectralEnvelope Shifted(double gain_db) const;
  /// Index of the grid point closest to `hz` (clamped to the grid).
  std::size_t NearestBin(double hz) const;

 private:
  std::vector<double> freqs_;
  std::vector<double> levels_db_;
  double sample_rate_ = 0.0;
  double bin_hz_ = 0.0;
  double mean_level_db_ = 0.0;
  MeanKind mean_kind_ = MeanKind::kPower;
};

/// Mean level of a dB sequence under the given convention.
double MeanLevelDb(std::span<const double> levels_db, MeanKind kind);

}  // namespace valley

#endif  // VALLEY_TYPES_HPP_
