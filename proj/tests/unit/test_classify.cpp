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
#include "valley/classify.hpp"
#include "valley/corpus.hpp"
#include "valley/errors.hpp"
#include "valley/scales.hpp"
#include "valley/synth.hpp"

using namespace valley;

namespace {

FrameFeatures Frame(double v1, double v2) {
  FrameFeatures f;
  f.v1_db = v1;
  f.v2_db = v2;
  f.valid = true;
  f.formants = {{500, 80}, {1000, 80}, {2500, 120}};
  return f;
}

SignalBuffer Vowel(const std::vector<FormantSpec>& f, double f0 = 120.0) {
  return Synthesize(f, Excitation::TiltedTrain(f0, -6.0, 0.2), 16000.0, 3200);
}

const std::vector<FormantSpec> kUw = {{300, 70}, {870, 90}, {2240, 150}, {3500, 250}};
const std::vector<FormantSpec> kIy = {{270, 60}, {2290, 120}, {3010, 160}, {3800, 250}};

}  // namespace

TEST_CASE("segment decision follows the mean valley difference") {
  const std::vector<FrameFeatures> back = {Frame(-2.0, -9.0)};   // diff 7
  const std::vector<FrameFeatures> edge = {Frame(-5.0, -10.0)};  // diff 5
  const std::vector<FrameFeatures> front = {Frame(-12.0, -10.0)};  // diff -2
  CHECK(DecideSegment(back).predicted == VowelClass::kBack);
  CHECK(DecideSegment(edge).predicted == VowelClass::kFront);
  CHECK(DecideSegment(front).predicted == VowelClass::kFront);
  CHECK(DecideSegment(back).mean_diff == doctest::Approx(7.0));

  std::vector<FrameFeatures> mixed = {Frame(-2.0, -9.0), FrameFeatures{}};
  const auto d = DecideSegment(mixed);
  CHECK(d.frames_used == 1);
  CHECK(d.frames_discarded == 1);
  const std::vector<FrameFeatures> none = {FrameFeatures{}};
  try {
    DecideSegment(none);
    FAIL("expected no-decision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoDecision);
  }
}

TEST_CASE("spacing rules") {
  const std::vector<FrameFeatures> f = {Frame(-2.0, -9.0)};
  // z(2500) - z(1000) is well above 3 bark: back by the F3-F2 rule.
  CHECK(DecideByFormantSpacing(f, SpacingRule::kF3F2Bark, 3.0).predicted ==
        VowelClass::kBack);
  CHECK(DecideByFormantSpacing(f, SpacingRule::kV1Only, -5.0).predicted ==
        VowelClass::kBack);
  CHECK(DecideByFormantSpacing(f, SpacingRule::kV2Only, -15.0).predicted ==
        VowelClass::kFront);
  CHECK(ParseSpacingRule("f3f2_3bark") == SpacingRule::kF3F2Bark);
  CHECK(!ParseSpacingRule("nope").has_value());
}

TEST_CASE("score bookkeeping") {
  const std::vector<VowelClass> truth = {VowelClass::kFront, VowelClass::kFront,
                                         VowelClass::kBack, VowelClass::kBack};
  const std::vector<VowelClass> pred = {VowelClass::kFront, VowelClass::kBack,
                                        VowelClass::kBack, VowelClass::kBack};
  const auto r = Score(pred, truth, "valley", 5.0);
  CHECK(r.front_acc == doctest::Approx(50.0));
  CHECK(r.back_acc == doctest::Approx(100.0));
  CHECK(r.overall == doctest::Approx(75.0));
  CHECK(r.confusion[0][1] == 1);
  CHECK_THROWS_AS(Score(std::vector<VowelClass>{}, std::vector<VowelClass>{}), Error);
  const std::vector<VowelClass> central = {VowelClass::kCentral};
  CHECK_THROWS_AS(Score(central, central), Error);
}

TEST_CASE("histogram binning and crossover") {
  const std::vector<double> v = {0.0, 0.5, 1.0, 2.0, 3.0, -1.0, 9.0};
  const auto h = NormalizedHistogram(v, 1.0, 0.0, 3.0);
  REQUIRE(h.bins.size() == 3);
  CHECK(h.bins[0].center == doctest::Approx(0.5));
  CHECK(h.bins[0].frequency == doctest::Approx(0.4));
  CHECK(h.bins[2].frequency == doctest::Approx(0.4));  // 2.0 and 3.0
  CHECK(h.below == 1);
  CHECK(h.above == 1);
  const std::vector<double> lo = {0.2, 0.3, 1.2};
  const std::vector<double> hi = {1.5, 2.2, 2.7};
  const auto x = HistogramCrossover(NormalizedHistogram(lo, 1.0, 0.0, 3.0),
                                    NormalizedHistogram(hi, 1.0, 0.0, 3.0));
  REQUIRE(x.has_value());
  CHECK(*x == doctest::Approx(2.5));
}

TEST_CASE("pipeline separates a back and a front vowel") {
  const auto uw = FramePipeline(Vowel(kUw));
  const auto iy = FramePipeline(Vowel(kIy));
  CHECK(uw.size() == 19);
  CHECK(DecideSegment(uw).predicted == VowelClass::kBack);
  CHECK(DecideSegment(iy).predicted == VowelClass::kFront);
}

TEST_CASE("silent segments yield no valid frame") {
  const SignalBuffer silent{std::vector<double>(3200, 0.0), 16000.0};
  for (const auto& f : FramePipeline(silent)) CHECK(!f.valid);
}

TEST_CASE("decisions are invariant to audio gain") {
  const auto x = Vowel(kUw, 180.0);
  SignalBuffer y = x;
  for (auto& s : y.samples) s *= 0.125;  // exact in binary
  const auto a = DecideSegment(FramePipeline(x));
  const auto b = DecideSegment(FramePipeline(y));
  CHECK(a.predicted == b.predicted);
  CHECK(a.mean_diff == doctest::Approx(b.mean_diff).epsilon(1e-9));
}

TEST_CASE("raising the threshold never turns front into back") {
  const auto frames = FramePipeline(Vowel(kUw, 200.0));
  VowelClass prev = VowelClass::kBack;
  for (double t = -20.0; t <= 40.0; t += 2.0) {
    const auto d = DecideSegment(frames, t);
    if (prev == VowelClass::kFront) CHECK(d.predicted == VowelClass::kFront);
    prev = d.predicted;
  }
}

TEST_CASE("corpus evaluation is deterministic across runs") {
  SyntheticCorpusConfig cfg;
  cfg.speakers_per_gender = 1;
  cfg.utterances_per_speaker = 6;
  std::vector<CorpusUtterance> corpus;
  for (auto& u : GenerateSyntheticCorpus(BundledPbMeans(), cfg)) {
    corpus.push_back({u.id, std::move(u.audio), std::move(u.labels)});
  }
  NoiseSpec noise{NoiseKind::kWhite, 25.0, 3, std::nullopt};
  const auto a = ExtractCorpusFeatures(corpus, TimitSelection(), {}, &noise);
  const auto b = ExtractCorpusFeatures(corpus, TimitSelection(), {}, &noise);
  REQUIRE(a.size() == b.size());
  const auto ea = Evaluate(a, Feature::kValley, 5.0);
  const auto eb = Evaluate(b, Feature::kValley, 5.0);
  CHECK(ea.report.overall == eb.report.overall);
  for (std::size_t i = 0; i < ea.rows.size(); ++i) {
    CHECK(ea.rows[i].segment_id == eb.rows[i].segment_id);
    if (ea.rows[i].decision && eb.rows[i].decision) {
      CHECK(ea.rows[i].decision->mean_diff == eb.rows[i].decision->mean_diff);
    }
  }
  CHECK(DefaultLpOrder(16000.0) == 18);
}

TEST_CASE("frame features order the two valleys by vowel class") {
  auto majority = [](const std::vector<FrameFeatures>& frames, bool v1_above) {
    int valid = 0, agree = 0;
    for (const auto& f : frames) {
      if (!f.valid) continue;
      ++valid;
      agree += (f.v1_db > f.v2_db) == v1_above;
    }
    return 2 * valid > static_cast<int>(frames.size()) && 2 * agree > valid;
  };
  CHECK(majority(FramePipeline(Vowel(kUw)), true));
  CHECK(majority(FramePipeline(Vowel(kIy)), false));
}

TEST_CASE("F3-F2 rule on two and four bark") {
  auto frame = [](double f2, double f3) {
    FrameFeatures f = Frame(0.0, 0.0);
    f.formants = {{300, 80}, {f2, 80}, {f3, 80}};
    return std::vector<FrameFeatures>{f};
  };
  const double f2 = 1500.0;
  const double f3_two = BarkToHz(Bark{HzToBark(f2).z + 2.0});
  const double f3_four = BarkToHz(Bark{HzToBark(f2).z + 4.0});
  CHECK(DecideByFormantSpacing(frame(f2, f3_two), SpacingRule::kF3F2Bark, 3.0).predicted ==
        VowelClass::kFront);
  CHECK(DecideByFormantSpacing(frame(f2, f3_four), SpacingRule::kF3F2Bark, 3.0).predicted ==
        VowelClass::kBack);
}

TEST_CASE("histogram edge cases") {
  const std::vector<double> one = {2.2};
  const auto h = NormalizedHistogram(one, 1.0, 0.0, 4.0);
  int nonzero = 0;
  for (const auto& b : h.bins) nonzero += b.frequency > 0.0;
  CHECK(nonzero == 1);
  const std::vector<double> spread = {0.5, 1.5, 2.5, 3.5};
  for (const auto& b : NormalizedHistogram(spread, 1.0, 0.0, 4.0).bins) {
    CHECK(b.frequency == doctest::Approx(0.25));
  }
  CHECK_THROWS_AS(NormalizedHistogram(std::vector<double>{}, 1.0, 0.0, 4.0), Error);
  CHECK_THROWS_AS(NormalizedHistogram(one, 0.0, 0.0, 4.0), Error);
}

TEST_CASE("perfect predictions score 100") {
  const std::vector<VowelClass> t = {VowelClass::kFront, VowelClass::kBack};
  const auto r = Score(t, t);
  CHECK(r.overall == 100.0);
  CHECK(r.confusion[0][0] + r.confusion[0][1] + r.confusion[1][0] + r.confusion[1][1] == 2);
}
