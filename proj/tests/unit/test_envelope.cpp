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
#include <vector>

#include "doctest.h"
#include "valley/envelope.hpp"
#include "valley/errors.hpp"
#include "valley/sigproc.hpp"

using namespace valley;

namespace {

// Flat 0 dB floor with a triangle bump of `height` around each peak.
SpectralEnvelope Bumps(const std::vector<std::pair<double, double>>& peaks,
                       double fs = 8000.0, std::size_t n = 401) {
  std::vector<double> lv(n, 0.0);
  const double bin = 0.5 * fs / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double hz = static_cast<double>(i) * bin;
    for (const auto& [f, h] : peaks) {
      lv[i] = std::max(lv[i], h - std::abs(hz - f) / 20.0);
    }
  }
  return SpectralEnvelope(std::move(lv), fs, MeanKind::kArithmeticDb);
}

std::vector<FormantSpec> UniformFormants() {
  return {{500, 100}, {1500, 100}, {2500, 100}, {3500, 100}};
}

}  // namespace

TEST_CASE("peak location refines to the bump centre") {
  const auto env = Bumps({{500.0, 20.0}, {1500.0, 10.0}});
  const auto p = LocatePeak(env, 520.0);
  CHECK(p.freq_hz == doctest::Approx(500.0).epsilon(1e-3));
  CHECK(p.level_db == doctest::Approx(20.0));
  CHECK_THROWS_AS(LocatePeak(env, 3000.0, 100.0, 3), PeakNotFoundError);
}

TEST_CASE("nearest peak prefers proximity over height") {
  const auto env = Bumps({{1000.0, 20.0}, {1300.0, 15.0}});
  CHECK(LocatePeak(env, 1250.0, 400.0).freq_hz == doctest::Approx(1000.0).epsilon(1e-3));
  CHECK(LocateNearestPeak(env, 1250.0, 400.0).freq_hz ==
        doctest::Approx(1300.0).epsilon(1e-3));
}

TEST_CASE("rlsv by hand") {
  // Levels 0..: mean (arithmetic) of {0, 10, 2, 8, 0} = 4; valley 2 at bin 2.
  const SpectralEnvelope env({0.0, 10.0, 2.0, 8.0, 0.0}, 8.0, MeanKind::kArithmeticDb);
  const auto v = Rlsv(env, env.freq(1), env.freq(3), ValleyLabel::kV12);
  CHECK(v.mean_level_db == doctest::Approx(4.0));
  CHECK(v.valley_level_db == doctest::Approx(2.0));
  CHECK(v.v_db == doctest::Approx(2.0));
  CHECK(v.relative_level_db() == doctest::Approx(-2.0));
  CHECK_THROWS_AS(Rlsv(env, env.freq(1), env.freq(2), ValleyLabel::kV12), Error);
}

TEST_CASE("rlsv is invariant to overall gain") {
  const std::vector<FormantSpec> f = {{500, 60}, {1500, 90}, {2500, 120}};
  for (auto kind : {MeanKind::kPower, MeanKind::kArithmeticDb}) {
    const auto env = AnalyticCascadeSpectrum(f, 8000.0, 2048, kind);
    const auto a = MeasureValley(env, 500.0, 1500.0, ValleyLabel::kV12);
    const auto b = MeasureValley(env.Shifted(17.5), 500.0, 1500.0, ValleyLabel::kV12);
    CHECK(a.v_db == doctest::Approx(b.v_db).epsilon(1e-12));
  }
}

TEST_CASE("v1 and v2 come from adjacent pairs") {
  const std::vector<FormantSpec> f = {{500, 60}, {1500, 90}, {2500, 120}};
  const auto env = AnalyticCascadeSpectrum(f, 8000.0, 2048);
  const auto [v1, v2] = MeasureV1V2(env, f);
  CHECK(v1.label == ValleyLabel::kVI);
  CHECK(v2.label == ValleyLabel::kVII);
  CHECK(v1.valley_freq > 500.0);
  CHECK(v1.valley_freq < 1500.0);
  CHECK(v2.valley_freq > 1500.0);
  CHECK(v2.valley_freq < 2500.0);
  CHECK(ValleyLabelName(ValleyLabel::kV23) == "V23");
}

TEST_CASE("window narrower than a bin is rejected") {
  const std::vector<FormantSpec> f = {{500, 60}, {520, 60}};
  const auto env = AnalyticCascadeSpectrum(f, 8000.0, 128);
  CHECK_THROWS_AS(MeasureValley(env, 500.0, 520.0, ValleyLabel::kV12), Error);
}

TEST_CASE("mean level equals an independent summation") {
  const auto p = AnalyticCascadeSpectrum(
      std::vector<FormantSpec>{{500, 100}, {1500, 100}, {2500, 100}, {3500, 100}}, 8000.0, 1000,
      MeanKind::kArithmeticDb);
  double sum = 0.0, power = 0.0;
  for (double v : p.levels_db()) {
    sum += v;
    power += std::pow(10.0, v / 10.0);
  }
  CHECK(std::abs(p.mean_level_db() - sum / 1000.0) < 1e-12);
  CHECK(MeanSpectralLevel(p).value == doctest::Approx(sum / 1000.0));
  const SpectralEnvelope q(std::vector<double>(p.levels_db().begin(), p.levels_db().end()),
                           8000.0, MeanKind::kPower);
  CHECK(q.mean_level_db() == doctest::Approx(10.0 * std::log10(power / 1000.0)).epsilon(1e-12));
  const SpectralEnvelope flat(std::vector<double>(50, -3.0), 8000.0);
  CHECK(flat.mean_level_db() == doctest::Approx(-3.0));
  CHECK(flat.Shifted(4.0).mean_level_db() == doctest::Approx(1.0));
}

TEST_CASE("parabolic refinement of an off-grid peak") {
  // y = 10 - (x - 20.3)^2 sampled at integer bins, bin = 1 Hz.
  std::vector<double> lv(41);
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const double d = static_cast<double>(i) - 20.3;
    lv[i] = 10.0 - d * d;
  }
  const SpectralEnvelope env(std::move(lv), 80.0);
  const auto p = LocatePeak(env, 20.0, 5.0);
  CHECK(std::abs(p.freq_hz - 20.3) < 0.1);
  CHECK(p.level_db == doctest::Approx(10.0));
}

TEST_CASE("valley sign at spacings around the crossing") {
  const auto near_ocd = AnalyticCascadeSpectrum(
      std::vector<FormantSpec>{{725, 100}, {1275, 100}, {2500, 100}, {3500, 100}}, 8000.0, 4096);
  CHECK(std::abs(MeasureValley(near_ocd, 725, 1275, ValleyLabel::kV12).v_db) <= 0.5);
  const auto inside = AnalyticCascadeSpectrum(
      std::vector<FormantSpec>{{800, 100}, {1200, 100}, {2500, 100}, {3500, 100}}, 8000.0, 4096);
  CHECK(MeasureValley(inside, 800, 1200, ValleyLabel::kV12).v_db < 0.0);
  const auto two = AnalyticCascadeSpectrum(std::vector<FormantSpec>{{750, 100}, {1400, 200}},
                                           4000.0, 4096);
  CHECK(MeasureValley(two, 750, 1400, ValleyLabel::kV12).v_db > 0.0);
}

TEST_CASE("valley bracketing and peak ordering") {
  const std::vector<FormantSpec> f = {{300, 70}, {870, 90}, {2240, 150}, {3500, 200}};
  const auto env = AnalyticCascadeSpectrum(f, 8000.0, 4096);
  const auto [v1, v2] = MeasureV1V2(env, f);
  for (const auto& v : {v1, v2}) {
    CHECK(v.lower_peak_freq < v.valley_freq);
    CHECK(v.valley_freq < v.upper_peak_freq);
  }
  // Back geometry: the first valley sits higher relative to the mean.
  CHECK(v1.relative_level_db() > v2.relative_level_db());
  const std::vector<FormantSpec> front = {{270, 60}, {2290, 120}, {3010, 160}, {3700, 200}};
  const auto fe = AnalyticCascadeSpectrum(front, 8000.0, 4096);
  const auto [f1, f2] = MeasureV1V2(fe, front);
  CHECK(f1.relative_level_db() < f2.relative_level_db());
}

TEST_CASE("neutral tube valleys differ only by the intrinsic tilt") {
  const auto f = UniformFormants();
  const auto env = AnalyticCascadeSpectrum(f, 8000.0, 4096);
  const auto [v1, v2] = MeasureV1V2(env, f);
  const double d = v1.relative_level_db() - v2.relative_level_db();
  CHECK(d != 0.0);
  CHECK(std::abs(d) < 10.0);
}
