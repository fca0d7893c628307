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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <fftw3.h>

#include "doctest.h"
#include "valley/errors.hpp"
#include "valley/sigproc.hpp"
#include "valley/synth.hpp"

using namespace valley;

namespace {

std::vector<double> NoiseFrame(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

}  // namespace

TEST_CASE("preemphasis is a first difference") {
  const SignalBuffer x{{1.0, 2.0, 4.0}, 8000.0};
  const auto y = Preemphasize(x, 0.5);
  CHECK(y.samples == std::vector<double>{1.0, 1.5, 3.0});
  CHECK_THROWS_AS(Preemphasize(x, 1.0), Error);
}

TEST_CASE("framing counts and hop") {
  const SignalBuffer x{std::vector<double>(1000, 0.0), 10000.0};
  // 20 ms = 200 samples, hop 100.
  const auto frames = FrameSignal(x, 20.0, 0.5);
  CHECK(frames.size() == 9);
  CHECK(frames.front().size() == 200);
  CHECK(FrameSignal(SignalBuffer{std::vector<double>(150, 0.0), 10000.0}, 20.0, 0.5)
            .empty());
}

TEST_CASE("hamming endpoints and peak") {
  const std::vector<double> ones(101, 1.0);
  const auto w = ApplyWindow(ones, WindowKind::kHamming);
  CHECK(w.front() == doctest::Approx(0.08));
  CHECK(w.back() == doctest::Approx(0.08));
  CHECK(w[50] == doctest::Approx(1.0));
  const auto h = ApplyWindow(ones, WindowKind::kHann);
  CHECK(h.front() == doctest::Approx(0.0));
  CHECK_THROWS_AS(ParseWindowKind("kaiser"), Error);
}

TEST_CASE("levinson on a two-lag sequence") {
  const std::vector<double> r = {1.0, 0.5};
  const auto m = Levinson(r, 1, 8000.0);
  CHECK(m.coefficients[0] == doctest::Approx(0.5));
  CHECK(m.gain == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("levinson reports the unstable stage") {
  const std::vector<double> r = {1.0, 2.0};
  try {
    Levinson(r, 1, 8000.0);
    FAIL("expected UnstableModelError");
  } catch (const UnstableModelError& e) {
    CHECK(e.stage() == 1);
    CHECK(e.reflection() == doctest::Approx(2.0));
  }
  const std::vector<double> zero = {0.0, 0.0};
  CHECK_THROWS_AS(Levinson(zero, 1, 8000.0), Error);
}

TEST_CASE("levinson matches a dense normal-equation solve") {
  for (int order : {4, 10, 18}) {
    const auto x = ApplyWindow(NoiseFrame(400, 7u + static_cast<unsigned>(order)),
                               WindowKind::kHamming);
    const auto r = Autocorrelation(x, order);
    const auto m = Levinson(r, order, 8000.0);
    Eigen::MatrixXd toeplitz(order, order);
    Eigen::VectorXd rhs(order);
    for (int i = 0; i < order; ++i) {
      rhs(i) = r[static_cast<std::size_t>(i) + 1];
      for (int j = 0; j < order; ++j) {
        toeplitz(i, j) = r[static_cast<std::size_t>(std::abs(i - j))];
      }
    }
    const Eigen::VectorXd a = toeplitz.ldlt().solve(rhs);
    double err = r[0];
    for (int i = 0; i < order; ++i) {
      CHECK(std::abs(a(i) - m.coefficients[static_cast<std::size_t>(i)]) < 1e-9);
      err -= a(i) * rhs(i);
    }
    CHECK(m.gain == doctest::Approx(std::sqrt(err)).epsilon(1e-9));
    for (double k : m.reflection) CHECK(std::abs(k) <= 1.0);
  }
}

TEST_CASE("lpc envelope of a single pole") {
  LpcModel m;
  m.order = 1;
  m.coefficients = {0.9};
  m.gain = 1.0;
  m.sample_rate = 8000.0;
  const auto env = LpcEnvelope(m, 256);
  // |1 - 0.9 e^{-jw}| at w = 0 and w = pi.
  CHECK(env.level(0) == doctest::Approx(-20.0 * std::log10(0.1)));
  CHECK(env.level(255) == doctest::Approx(-20.0 * std::log10(1.9)));
}

TEST_CASE("polynomial roots of a quadratic") {
  const std::vector<double> p = {1.0, -3.0, 2.0};
  auto roots = PolynomialRoots(p);
  REQUIRE(roots.size() == 2);
  double lo = std::min(roots[0].real(), roots[1].real());
  double hi = std::max(roots[0].real(), roots[1].real());
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(2.0));
  CHECK_THROWS_AS(PolynomialRoots(std::vector<double>{0.0, 1.0}), Error);
}

TEST_CASE("roots reconstruct the predictor polynomial") {
  const auto x = ApplyWindow(NoiseFrame(320, 11u), WindowKind::kHamming);
  const auto m = LpcFromFrame(x, 12, 8000.0);
  const auto poly = m.PredictorPolynomial();
  const auto rebuilt = PolynomialFromRoots(PolynomialRoots(poly), poly[0]);
  REQUIRE(rebuilt.size() == poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    CHECK(std::abs(rebuilt[i] - poly[i]) < 1e-8);
  }
}

TEST_CASE("roots to formants recovers known poles") {
  const double fs = 8000.0;
  const std::vector<FormantSpec> truth = {{500, 60}, {1500, 90}, {2500, 120}};
  ComplexRootSet roots;
  for (const auto& f : truth) {
    const double r = std::exp(-std::numbers::pi * f.bandwidth / fs);
    const double th = 2.0 * std::numbers::pi * f.frequency / fs;
    roots.push_back(std::polar(r, th));
    roots.push_back(std::polar(r, -th));
  }
  roots.push_back({0.5, 0.0});  // real pole, discarded
  const auto got = RootsToFormants(roots, fs, {});
  REQUIRE(got.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(got[i].frequency == doctest::Approx(truth[i].frequency));
    CHECK(got[i].bandwidth == doctest::Approx(truth[i].bandwidth));
  }
}

TEST_CASE("analytic cascade matches the FFT of the impulse response") {
  const double fs = 8000.0;
  // The two-formant geometry at the 3.9 bark spacing.
  const std::vector<FormantSpec> f = {{750, 100}, {1400, 200}};
  const std::size_t n = 32768;
  const auto h = Synthesize(f, Excitation::UnitImpulse(), fs, n);
  std::vector<double> in(h.samples);
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                        out.data(), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const auto env = AnalyticCascadeSpectrum(f, fs, static_cast<int>(n / 2 + 1));
  double worst = 0.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double mag = std::hypot(out[k][0], out[k][1]);
    worst = std::max(worst, std::abs(20.0 * std::log10(mag) - env.level(k)));
  }
  CHECK(worst < 0.1);
}

TEST_CASE("autocorrelation peaks at lag zero") {
  const auto x = NoiseFrame(257, 3u);
  const auto r = Autocorrelation(x, 40);
  for (std::size_t k = 0; k < r.size(); ++k) {
    double brute = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j == i + k) brute += x[i] * x[j];
      }
    }
    CHECK(r[k] == doctest::Approx(brute).epsilon(1e-12));
    CHECK(r[0] >= std::abs(r[k]));
  }
}

TEST_CASE("levinson recovers an AR(10) process from its exact autocorrelation") {
  // Stable AR(10) built from five pole pairs.
  ComplexRootSet poles;
  const std::vector<std::pair<double, double>> rt = {
      {0.9, 0.3}, {0.85, 0.9}, {0.8, 1.5}, {0.75, 2.1}, {0.7, 2.7}};
  for (const auto& [r, th] : rt) {
    poles.push_back(std::polar(r, th));
    poles.push_back(std::polar(r, -th));
  }
  const auto poly = PolynomialFromRoots(poles);  // 1, -a1, ..., -a10
  // Impulse response of 1 / A(z), long enough that the tail is negligible.
  const std::size_t n = 4000;
  std::vector<double> h(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = i == 0 ? 1.0 : 0.0;
    for (std::size_t k = 1; k < poly.size() && k <= i; ++k) acc -= poly[k] * h[i - k];
    h[i] = acc;
  }
  std::vector<double> r(11, 0.0);
  for (std::size_t k = 0; k < r.size(); ++k) {
    for (std::size_t i = 0; i + k < n; ++i) r[k] += h[i] * h[i + k];
  }
  const auto m = Levinson(r, 10, 8000.0);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(std::abs(m.coefficients[k] + poly[k + 1]) < 1e-6);
  }
  CHECK(m.gain == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("second-order fit to a resonator peaks at the resonator") {
  const double fs = 8000.0;
  const std::vector<FormantSpec> f = {{1400.0, 200.0}};
  const auto h = Synthesize(f, Excitation::UnitImpulse(), fs, 2000);
  const auto m = LpcFromFrame(h.samples, 2, fs);
  const auto env = LpcEnvelope(m, 1024);
  const auto ref = AnalyticCascadeSpectrum(f, fs, 1024);
  auto argmax = [](const SpectralEnvelope& e) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (e.level(i) > e.level(best)) best = i;
    }
    return best;
  };
  const auto a = static_cast<long>(argmax(env));
  const auto b = static_cast<long>(argmax(ref));
  CHECK(std::abs(a - b) <= 1);
}

TEST_CASE("lp roots of a synthetic vowel give its formants") {
  const double fs = 8000.0;
  const std::vector<FormantSpec> f = {{500, 100}, {1500, 100}, {2500, 100}, {3500, 100}};
  const auto x = Synthesize(f, Excitation::UnitImpulse(), fs, 4000);
  const auto m = LpcFromFrame(x.samples, 10, fs);
  const auto got = RootsToFormants(PolynomialRoots(m.PredictorPolynomial()), fs, {});
  REQUIRE(got.size() >= 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(got[i].frequency - f[i].frequency) <= 30.0);
  }
}

TEST_CASE("roots of a random degree-18 polynomial") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> p(19);
  for (auto& c : p) c = u(rng);
  p[0] = 1.0;
  const auto back = PolynomialFromRoots(PolynomialRoots(p), p[0]);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(back[i] - p[i]) < 1e-8);
}

TEST_CASE("cascade order does not change the spectrum") {
  std::vector<FormantSpec> f = {{500, 60}, {1500, 90}, {2500, 150}};
  const auto a = AnalyticCascadeSpectrum(f, 8000.0, 512);
  std::swap(f[0], f[2]);
  const auto b = AnalyticCascadeSpectrum(f, 8000.0, 512);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.level(i) == doctest::Approx(b.level(i)));
  const auto ha = Synthesize(f, Excitation::UnitImpulse(), 8000.0, 256);
  std::swap(f[0], f[1]);
  const auto hb = Synthesize(f, Excitation::UnitImpulse(), 8000.0, 256);
  for (std::size_t i = 0; i < ha.size(); ++i) {
    CHECK(std::abs(ha.samples[i] - hb.samples[i]) < 1e-9);
  }
}
