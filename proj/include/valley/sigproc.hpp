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

// Framing, windowing, linear prediction, polynomial roots and spectrum
// evaluation.

#ifndef VALLEY_SIGPROC_HPP_
#define VALLEY_SIGPROC_HPP_

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "valley/types.hpp"

namespace valley {

// y[n] = x[n] - alpha x[n-1], y[0] = x[0]. Requires 0 <= alpha < 1.
SignalBuffer Preemphasize(const SignalBuffer& x, double alpha);

/// Splits `x` into frames of round(frame_ms * rate / 1000) samples with a
/// hop of round(frame_len * (1 - overlap_fraction)). The trailing partial
/// frame is dropped; a signal shorter than one frame yields no frames.
std::vector<std::vector<double>> FrameSignal(const SignalBuffer& x,
                                             double frame_ms,
                                             double overlap_fraction);

enum class WindowKind { kRectangular, kHamming, kHann };

/// Parses "rectangular" / "hamming" / "hann"; throws invalid-argument
/// otherwise.
WindowKind ParseWindowKind(std::string_view name);

/// Elementwise product of `frame` with the window. Hamming uses the
/// symmetric 0.54 - 0.46 cos(2 pi n / (N - 1)) form.
std::vector<double> ApplyWindow(std::span<const double> frame,
                                WindowKind kind = WindowKind::kHamming);

/// r[k] = sum_n x[n] x[n + k] for k = 0..max_lag.
std::vector<double> Autocorrelation(std::span<const double> x, int max_lag);

/// All-pole predictor x[n] ~ sum_k a_k x[n-k], i.e. A(z) = 1 - sum a_k z^-k.
struct LpcModel {
  int order = 0;
  std::vector<double> coefficients;  // a_1 .. a_p
  std::vector<double> reflection;    // k_1 .. k_p
  double gain = 0.0;                 // sqrt of the final prediction error
  double sample_rate = 0.0;

  /// Coefficients of A(z) in descending powers: [1, -a_1, ..., -a_p].
  std::vector<double> PredictorPolynomial() const;
};

/// Levinson-Durbin recursion on r[0..order]. Throws degenerate-input when
/// r[0] <= 0 and UnstableModelError (carrying the 1-based stage) when a
/// reflection coefficient leaves [-1, 1].
LpcModel Levinson(std::span<const double> r, int order, double sample_rate);

/// Convenience: window-free autocorrelation LP of an already prepared frame.
LpcModel LpcFromFrame(std::span<const double> frame, int order,
                      double sample_rate);

/// 20 log10(gain / |A(e^jw)|) on `n_points` frequencies in [0, fs/2].
/// Throws singular-envelope when A vanishes on the grid.
SpectralEnvelope LpcEnvelope(const LpcModel& model, int n_points = 1024,
                             MeanKind mean_kind = MeanKind::kPower);

using ComplexRootSet = std::vector<std::complex<double>>;

/// All roots of sum_i coeffs[i] z^(n-i) (leading coefficient first), from the
/// eigenvalues of the companion matrix.
ComplexRootSet PolynomialRoots(std::span<const double> coeffs);

/// Expands prod (z - r_i) scaled by `leading`; inverse of PolynomialRoots.
std::vector<double> PolynomialFromRoots(const ComplexRootSet& roots,
                                        double leading = 1.0);

/// Gates applied when turning predictor roots into formant candidates.
struct FormantGates {
  double min_frequency_hz = 150.0;
  double nyquist_margin_hz = 100.0;
  double max_bandwidth_hz = 500.0;
};

/// F = theta fs / (2 pi), B = -fs ln(r) / pi for each root with theta > 0
/// passing `gates`; sorted by frequency.
std::vector<FormantSpec> RootsToFormants(const ComplexRootSet& roots,
                                         double sample_rate,
                                         const FormantGates& gates = {});

/// Exact dB magnitude of a cascade of DC-normalized two-pole resonators on
/// `n_points` frequencies in [0, fs/2]. An empty cascade is flat at 0 dB.
SpectralEnvelope AnalyticCascadeSpectrum(std::span<const FormantSpec> formants,
                                         double sample_rate,
                                         int n_points = 4096,
                                         MeanKind mean_kind = MeanKind::kPower);

/// Magnitude of H(e^jw) for the same cascade at a single frequency.
double CascadeMagnitude(std::span<const FormantSpec> formants,
                        double sample_rate, double hz);

}  // namespace valley

#endif  // VALLEY_SIGPROC_HPP_
