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

#ifndef VALLEY_SCALES_HPP_
#define VALLEY_SCALES_HPP_

namespace valley {

/// Critical-band rate in bark.
struct Bark {
  double z = 0.0;
};

/// Level in dB (20 log10 of a magnitude).
struct Decibels {
  double value = 0.0;
};

// Zwicker-Terhardt arctangent form:
//   z = 13 atan(0.00076 f) + 3.5 atan((f / 7500)^2)
Bark HzToBark(double hz);

/// Inverse of HzToBark by bisection on [0, max_hz], accurate to 1e-6 bark
/// or better. Throws invalid-argument when z is negative or not below
/// HzToBark(max_hz).
double BarkToHz(Bark z, double max_hz = 24000.0);

/// HzToBark(upper) - HzToBark(lower).
double BarkSpacing(double lower_hz, double upper_hz);

/// 20 log10(magnitude); magnitude must be strictly positive.
Decibels MagnitudeToDb(double magnitude);

}  // namespace valley

#endif  // VALLEY_SCALES_HPP_
