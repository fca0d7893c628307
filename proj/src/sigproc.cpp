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

#include "valley/sigproc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "valley/errors.hpp"

namespace valley {

SignalBuffer Preemphasize(const SignalBuffer& x, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    ThrowInvalid("Preemphasize: alpha must lie in [0, 1)");
  }
  SignalBuffer y{std::vector<double>(x.samples.size()), x.sample_rate};
  if (x.samples.empty()) return y;
  y.samples[0] = x.samples[0];
  for (std::size_t n = 1; n < x.samples.size(); ++n) {
    y.samples[n] = x.samples[n] - alpha * x.samples[n - 1];
  }
  return y;
}

std::vector<std::vector<double>> FrameSignal(const SignalBuffer& x,
                                             double frame_ms,
                                             double overlap_fraction) {
  if (!(frame_ms > 0.0)) ThrowInvalid("FrameSignal: frame_ms must be > 0");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    ThrowInvalid("FrameSignal: overlap must lie in [0, 1)");
  }
  const auto frame_len =
      static_cast<std::size_t>(std::lround(frame_ms * x.sample_rate / 1000.0));
  if (frame_len == 0) ThrowInvalid("FrameSignal: frame shorter than a sample");
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(
             static_cast<double>(frame_len) * (1.0 - overlap_fraction))));
  std::vector<std::vector<double>> frames;
  for (std::size_t start = 0; start + frame_len <= x.samples.size();
       start += hop) {
    frames.emplace_back(x.samples.begin() + static_cast<std::ptrdiff_t>(start),
                        x.samples.begin() +
                            static_cast<std::ptrdiff_t>(start + frame_len));
  }
  return frames;
}

WindowKind ParseWindowKind(std::string_view name) {
  if (name == "rectangular" || name == "rect") return WindowKind::kRectangular;
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "hann" || name == "hanning") return WindowKind::kHann;
  ThrowInvalid("unknown window kind: " + std::string(name));
}

std::vector<double> ApplyWindow(std::span<const double> frame,
                                WindowKind kind) {
  if (frame.empty()) ThrowInvalid("ApplyWindow: empty frame");
  std::vector<double> out(frame.begin(), frame.end());
  const std::size_t n = out.size();
  if (kind == WindowKind::kRectangular || n == 1) return out;
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
    const double w = kind == WindowKind::kHamming ? 0.54 - 0.46 * c : 0.5 - 0.5 * c;
    out[i] *= w;
  }
  return out;
}

std::vector<double> Autocorrelation(std::span<const double> x, int max_lag) {
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= x.size()) {
    ThrowInvalid("Autocorrelation: max_lag must be below the frame length");
  }
  std::vector<double> r(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (std::size_t k = 0; k < r.size(); ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n + k < x.size(); ++n) acc += x[n] * x[n + k];
    r[k] = acc;
  }
  return r;
}

std::vector<double> LpcModel::PredictorPolynomial() const {
  std::vector<double> poly(coefficients.size() + 1);
  poly[0] = 1.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    poly[k + 1] = -coefficients[k];
  }
  return poly;
}

LpcModel Levinson(std::span<const double> r, int order, double sample_rate) {
  if (order < 1) ThrowInvalid("Levinson: order must be >= 1");
  if (r.size() < static_cast<std::size_t>(order) + 1) {
    ThrowInvalid("Levinson: need order + 1 autocorrelation lags");
  }
  if (!(r[0] > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "Levinson: r[0] must be > 0");
  }
  const auto p = static_cast<std::size_t>(order);
  std::vector<double> a(p + 1, 0.0);  // a[1..i] of the current stage
  std::vector<double> prev(p + 1, 0.0);
  std::vector<double> reflection;
  reflection.reserve(p);
  double err = r[0];
  for (std::size_t i = 1; i <= p; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / err;
    if (!std::isfinite(k) || std::abs(k) > 1.0) {
      throw UnstableModelError(static_cast<int>(i), k);
    }
    prev = a;
    a[i] = k;
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] - k * prev[i - j];
    err *= (1.0 - k * k);
    reflection.push_back(k);
  }
  LpcModel model;
  model.order = order;
  model.coefficients.assign(a.begin() + 1, a.end());
  model.reflection = std::move(reflection);
  model.gain = std::sqrt(std::max(err, 0.0));
  model.sample_rate = sample_rate;
  return model;
}

LpcModel LpcFromFrame(std::span<const double> frame, int order,
                      double sample_rate) {
  const auto r = Autocorrelation(frame, order);
  return Levinson(r, order, sample_rate);
}

SpectralEnvelope LpcEnvelope(const LpcModel& model, int n_points,
                             MeanKind mean_kind) {
  if (n_points < 64) ThrowInvalid("LpcEnvelope: need at least 64 points");
  if (!(model.sample_rate > 0.0)) ThrowInvalid("LpcEnvelope: bad sample rate");
  if (!(model.gain > 0.0)) {
    throw Error(ErrorCode::kSingularEnvelope, "LpcEnvelope: zero gain");
  }
  const auto n = static_cast<std::size_t>(n_points);
  std::vector<double> levels(n);
  const double gain_db = 20.0 * std::log10(model.gain);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::numbers::pi * static_cast<double>(i) /
                     static_cast<double>(n - 1);
    std::complex<double> a_sum(1.0, 0.0);
    for (std::size_t k = 0; k < model.coefficients.size(); ++k) {
      a_sum -= model.coefficients[k] *
               std::polar(1.0, -w * static_cast<double>(k + 1));
    }
    const double mag = std::abs(a_sum);
    if (!(mag > 0.0) || !std::isfinite(mag)) {
      throw Error(ErrorCode::kSingularEnvelope,
                  "LpcEnvelope: A(z) vanishes on the grid");
    }
    levels[i] = gain_db - 20.0 * std::log10(mag);
  }
  return SpectralEnvelope(std::move(levels), model.sample_rate, mean_kind);
}

ComplexRootSet PolynomialRoots(std::span<const double> coeffs) {
  if (coeffs.size() < 2) ThrowInvalid("PolynomialRoots: degree must be >= 1");
  if (coeffs[0] == 0.0) ThrowInvalid("PolynomialRoots: zero leading coefficient");
  for (double c : coeffs) {
    if (!std::isfinite(c)) ThrowInvalid("PolynomialRoots: non-finite coefficient");
  }
  const auto degree = static_cast<Eigen::Index>(coeffs.size() - 1);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index j = 0; j < degree; ++j) {
    companion(0, j) = -coeffs[static_cast<std::size_t>(j) + 1] / coeffs[0];
  }
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw NumericFailureError("PolynomialRoots: eigenvalue iteration failed",
                              static_cast<int>(solver.getMaxIterations()));
  }
  const auto& values = solver.eigenvalues();
  ComplexRootSet roots(static_cast<std::size_t>(degree));
  for (Eigen::Index i = 0; i < degree; ++i) {
    roots[static_cast<std::size_t>(i)] = values(i);
  }
  return roots;
}

std::vector<double> PolynomialFromRoots(const ComplexRootSet& roots,
                                        double leading) {
  std::vector<std::complex<double>> poly{1.0};
  for (const auto& root : roots) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= poly[i] * root;
    }
    poly = std::move(next);
  }
  std::vector<double> out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) out[i] = leading * poly[i].real();
  return out;
}

std::vector<FormantSpec> RootsToFormants(const ComplexRootSet& roots,
                                         double sample_rate,
                                         const FormantGates& gates) {
  std::vector<FormantSpec> formants;
  const double upper = 0.5 * sample_rate - gates.nyquist_margin_hz;
  for (const auto& root : roots) {
    const double theta = std::arg(root);
    const double radius = std::abs(root);
    if (!(theta > 0.0) || !(radius > 0.0)) continue;
    const double f = theta * sample_rate / (2.0 * std::numbers::pi);
    const double b = -sample_rate * std::log(radius) / std::numbers::pi;
    if (f < gates.min_frequency_hz || f > upper) continue;
    if (!(b < gates.max_bandwidth_hz)) continue;
    formants.push_back({f, b});
  }
  std::sort(formants.begin(), formants.end(),
            [](const FormantSpec& x, const FormantSpec& y) {
              return x.frequency < y.frequency;
            });
  return formants;
}

namespace {

void CheckFormant(const FormantSpec& f, double sample_rate) {
  if (!(f.frequency > 0.0) || !(f.frequency < 0.5 * sample_rate)) {
    ThrowInvalid("formant frequency must lie in (0, fs/2)");
  }
  if (!(f.bandwidth > 0.0)) ThrowInvalid("formant bandwidth must be > 0");
}

}  // namespace

double CascadeMagnitude(std::span<const FormantSpec> formants,
                        double sample_rate, double hz) {
  const double w = 2.0 * std::numbers::pi * hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  double mag = 1.0;
  for (const auto& f : formants) {
    const double r = std::exp(-std::numbers::pi * f.bandwidth / sample_rate);
    const double a1 = -2.0 * r * std::cos(2.0 * std::numbers::pi * f.frequency / sample_rate);
    const double a2 = r * r;
    mag *= (1.0 + a1 + a2) / std::abs(1.0 + a1 * z1 + a2 * z2);
  }
  return mag;
}

SpectralEnvelope AnalyticCascadeSpectrum(std::span<const FormantSpec> formants,
                                         double sample_rate, int n_points,
                                         MeanKind mean_kind) {
  if (!(sample_rate > 0.0)) ThrowInvalid("AnalyticCascadeSpectrum: bad rate");
  if (n_points < 2) ThrowInvalid("AnalyticCascadeSpectrum: need >= 2 points");
  for (const auto& f : formants) CheckFormant(f, sample_rate);
  const auto n = static_cast<std::size_t>(n_points);
  std::vector<double> levels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hz = 0.5 * sample_rate * static_cast<double>(i) /
                      static_cast<double>(n - 1);
    levels[i] = 20.0 * std::log10(CascadeMagnitude(formants, sample_rate, hz));
  }
  return SpectralEnvelope(std::move(levels), sample_rate, mean_kind);
}

}  // namespace valley
