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

#include "valley/types.hpp"

#include <algorithm>
#include <cmath>

#include "valley/errors.hpp"

namespace valley {

void SignalBuffer::Validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    ThrowInvalid("SignalBuffer: sample rate must be positive");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) ThrowInvalid("SignalBuffer: non-finite sample");
  }
}

double MeanLevelDb(std::span<const double> levels_db, MeanKind kind) {
  if (levels_db.empty()) ThrowInvalid("MeanLevelDb: empty envelope");
  if (kind == MeanKind::kArithmeticDb) {
    double sum = 0.0;
    for (double l : levels_db) sum += l;
    return sum / static_cast<double>(levels_db.size());
  }
  // Factor out the maximum so the power sum cannot overflow.
  const double peak = *std::max_element(levels_db.begin(), levels_db.end());
  double sum = 0.0;
  for (double l : levels_db) sum += std::pow(10.0, (l - peak) / 10.0);
  return peak + 10.0 * std::log10(sum / static_cast<double>(levels_db.size()));
}

SpectralEnvelope::SpectralEnvelope(std::vector<double> levels_db,
                                   double sample_rate, MeanKind mean_kind)
    : levels_db_(std::move(levels_db)),
      sample_rate_(sample_rate),
      mean_kind_(mean_kind) {
  if (levels_db_.size() < 2) ThrowInvalid("SpectralEnvelope: need >= 2 points");
  if (!(sample_rate_ > 0.0)) ThrowInvalid("SpectralEnvelope: bad sample rate");
  for (double l : levels_db_) {
    if (!std::isfinite(l)) {
      throw Error(ErrorCode::kSingularEnvelope,
                  "SpectralEnvelope: non-finite level");
    }
  }
  const std::size_t n = levels_db_.size();
  bin_hz_ = 0.5 * sample_rate_ / static_cast<double>(n - 1);
  freqs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    freqs_[i] = bin_hz_ * static_cast<double>(i);
  }
  mean_level_db_ = MeanLevelDb(levels_db_, mean_kind_);
}

SpectralEnvelope SpectralEnvelope::Shifted(double gain_db) const {
  std::vector<double> shifted(levels_db_);
  for (double& l : shifted) l += gain_db;
  return SpectralEnvelope(std::move(shifted), sample_rate_, mean_kind_);
}

std::size_t SpectralEnvelope::NearestBin(double hz) const {
  const double idx = std::round(hz / bin_hz_);
  if (idx <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(idx), levels_db_.size() - 1);
}

}  // namespace valley
