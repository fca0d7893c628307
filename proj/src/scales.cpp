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

#include "valley/scales.hpp"

#include <cmath>

#include "valley/errors.hpp"

namespace valley {

Bark HzToBark(double hz) {
  if (!std::isfinite(hz) || hz < 0.0) {
    ThrowInvalid("HzToBark: frequency must be finite and non-negative");
  }
  const double r = hz / 7500.0;
  return {13.0 * std::atan(0.00076 * hz) + 3.5 * std::atan(r * r)};
}

double BarkToHz(Bark z, double max_hz) {
  if (!std::isfinite(z.z) || z.z < 0.0) {
    ThrowInvalid("BarkToHz: bark value must be finite and non-negative");
  }
  if (!(max_hz > 0.0) || z.z >= HzToBark(max_hz).z) {
    ThrowInvalid("BarkToHz: bark value outside the invertible range");
  }
  double lo = 0.0;
  double hi = max_hz;
  // 80 halvings of 24 kHz reach far below the 1e-6 bark target; stop early
  // once the bracket stops shrinking in floating point.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (HzToBark(mid).z < z.z) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double BarkSpacing(double lower_hz, double upper_hz) {
  return HzToBark(upper_hz).z - HzToBark(lower_hz).z;
}

Decibels MagnitudeToDb(double magnitude) {
  if (!(magnitude > 0.0) || !std::isfinite(magnitude)) {
    ThrowInvalid("MagnitudeToDb: magnitude must be finite and positive");
  }
  return {20.0 * std::log10(magnitude)};
}

}  // namespace valley
