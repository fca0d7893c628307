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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "valley/corpus.hpp"
#include "valley/errors.hpp"

using namespace valley;
namespace fs = std::filesystem;

namespace {

fs::path TempPath(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "valley_unit";
  fs::create_directories(dir);
  return dir / name;
}

void PutLe(std::string& s, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Minimal PCM header for hand-built files.
std::string WavHeader(int channels, int bits, std::uint32_t data_bytes) {
  std::string s = "RIFF";
  PutLe(s, 36 + data_bytes, 4);
  s += "WAVEfmt ";
  PutLe(s, 16, 4);
  PutLe(s, 1, 2);
  PutLe(s, static_cast<std::uint32_t>(channels), 2);
  PutLe(s, 16000, 4);
  PutLe(s, 16000u * static_cast<std::uint32_t>(channels * bits / 8), 4);
  PutLe(s, static_cast<std::uint32_t>(channels * bits / 8), 2);
  PutLe(s, static_cast<std::uint32_t>(bits), 2);
  s += "data";
  PutLe(s, data_bytes, 4);
  return s;
}

double Power(const std::vector<double>& x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0) /
         static_cast<double>(x.size());
}

SignalBuffer Tone(std::size_t n, double fs = 16000.0) {
  SignalBuffer x{std::vector<double>(n), fs};
  for (std::size_t i = 0; i < n; ++i) x.samples[i] = 0.3 * std::sin(0.05 * static_cast<double>(i));
  return x;
}

}  // namespace

TEST_CASE("wav round trip of silence and full-scale square wave") {
  const auto p = TempPath("square.wav");
  SignalBuffer x{std::vector<double>(64, 0.0), 16000.0};
  SaveWav(p, x);
  auto y = LoadWav(p);
  CHECK(y.sample_rate == 16000.0);
  CHECK(y.samples == x.samples);
  for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] = (i / 8) % 2 ? -1.0 : 1.0;
  SaveWav(p, x);
  y = LoadWav(p);
  CHECK(y.samples[0] == doctest::Approx(32767.0 / 32768.0));
  CHECK(y.samples[8] == -1.0);
}

TEST_CASE("stereo and 8-bit files name the offending field") {
  const auto p = TempPath("bad.wav");
  {
    std::ofstream out(p, std::ios::binary);
    out << WavHeader(2, 16, 8) << std::string(8, '\0');
  }
  try {
    LoadWav(p);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.field() == "channels");
  }
  {
    std::ofstream out(p, std::ios::binary);
    out << WavHeader(1, 8, 4) << std::string(4, '\0');
  }
  try {
    LoadWav(p);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.field() == "bits");
  }
  {
    std::ofstream out(p, std::ios::binary);
    out << "RIFX";
  }
  CHECK_THROWS_AS(LoadWav(p), FormatError);
}

TEST_CASE("phone labels parse and validate") {
  std::istringstream ok("0 100 h#\n\n100 900 iy\n900 1000 h#\n");
  const auto labels = ParsePhoneLabels(ok);
  REQUIRE(labels.size() == 3);
  CHECK(labels[1] == PhoneLabel{100, 900, "iy"});

  std::istringstream bad("0 100 h#\n100 x iy\n");
  try {
    ParsePhoneLabels(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream overlap("0 100 h#\n50 200 iy\n");
  try {
    ParsePhoneLabels(overlap);
    FAIL("expected ordering error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOrderingError);
  }
}

TEST_CASE("segment selection honours context and duration") {
  const auto cfg = TimitSelection();
  const auto audio = Tone(16000);
  // 45 ms at 16 kHz is 720 samples.
  const std::vector<PhoneLabel> labels = {
      {0, 1000, "h#"},     {1000, 2000, "iy"},  {2000, 2500, "d"},
      {2500, 3000, "aa"},  {3000, 4000, "n"},   {4000, 5000, "uw"},
      {5000, 6000, "t"},   {6000, 7000, "ax"},  {7000, 8000, "t"},
      {8000, 20000, "ae"}};
  const auto segs = SelectVowelSegments(labels, audio, cfg, "u1");
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].phone_label == "iy");
  CHECK(segs[0].fb_class == VowelClass::kFront);
  CHECK(segs[0].audio.size() == 1000);
  CHECK(segs[1].phone_label == "ax");
  CHECK(segs[1].fb_class == VowelClass::kCentral);
  CHECK(cfg.Classify("uh") == VowelClass::kBack);
  CHECK(!cfg.Classify("s").has_value());
}

TEST_CASE("selection config files") {
  std::istringstream in("# demo\nfront i e\nback a u\nexclude m\nmin_duration_ms 30\n");
  const auto c = ParseSelectionConfig(in);
  CHECK(c.front.count("e") == 1);
  CHECK(c.back.count("u") == 1);
  CHECK(c.min_duration_ms == 30.0);
  std::istringstream bad("front i\nsideways a\n");
  CHECK_THROWS_AS(ParseSelectionConfig(bad), ParseError);
}

TEST_CASE("formant table parsing") {
  std::istringstream in("F1,F2,F3,vowel,gender,F0,L1,L2,L3\n270,2290,3010,iy,male,136,-4,-24,-28\n");
  const auto t = ParsePbTable(in);
  REQUIRE(t.size() == 1);
  CHECK(t[0].vowel == "iy");
  CHECK(t[0].f2 == 2290.0);
  std::istringstream missing("vowel,gender,F0,F1,F2,L1,L2,L3\n");
  CHECK_THROWS_AS(ParsePbTable(missing), FormatError);
  std::istringstream unordered(
      "vowel,gender,F0,F1,F2,F3,L1,L2,L3\n"
      "iy,male,136,270,2290,3010,-4,-24,-28\n"
      "aa,male,124,730,700,2440,-1,-5,-28\n");
  try {
    ParsePbTable(unordered);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.row() == 2);
  }
}

TEST_CASE("bundled means cover both genders") {
  const auto t = BundledPbMeans();
  CHECK(t.size() == 18);
  int female = 0;
  for (const auto& e : t) {
    female += e.gender == Gender::kFemale;
    CHECK(e.f1 < e.f2);
  }
  CHECK(female == 9);
  CHECK(PbMeans(t).size() == 18);
}

TEST_CASE("mixed noise hits the requested SNR") {
  const auto x = Tone(16000);
  for (double snr : {40.0, 20.0, 5.0}) {
    NoiseSpec spec{NoiseKind::kWhite, snr, 9, std::nullopt};
    const auto y = MixNoise(x, spec);
    std::vector<double> n(x.size());
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = y.samples[i] - x.samples[i];
    CHECK(10.0 * std::log10(Power(x.samples) / Power(n)) == doctest::Approx(snr).epsilon(0.1 / snr));
  }
  const auto babble = Tone(40000);
  NoiseSpec bspec{NoiseKind::kBabble, 10.0, 4, std::nullopt};
  const auto y = MixNoise(x, bspec, &babble);
  CHECK(y.size() == x.size());
  const auto short_babble = Tone(100);
  CHECK_THROWS_AS(MixNoise(x, bspec, &short_babble), FormatError);
  const SignalBuffer silent{std::vector<double>(100, 0.0), 16000.0};
  CHECK_THROWS_AS(MixNoise(silent, NoiseSpec{}), Error);
}

TEST_CASE("noise and seeds are deterministic") {
  const auto x = Tone(2000);
  NoiseSpec spec{NoiseKind::kWhite, 20.0, 5, std::nullopt};
  CHECK(MixNoise(x, spec).samples == MixNoise(x, spec).samples);
  CHECK(SegmentSeed(1, "a", 0) == SegmentSeed(1, "a", 0));
  CHECK(SegmentSeed(1, "a", 0) != SegmentSeed(1, "a", 1));
  CHECK(SegmentSeed(1, "a", 0) != SegmentSeed(2, "a", 0));
}

TEST_CASE("small synthetic corpus is reproducible and well formed") {
  SyntheticCorpusConfig cfg;
  cfg.speakers_per_gender = 1;
  cfg.utterances_per_speaker = 3;
  const auto a = GenerateSyntheticCorpus(BundledPbMeans(), cfg);
  const auto b = GenerateSyntheticCorpus(BundledPbMeans(), cfg);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].audio.samples == b[i].audio.samples);
    CHECK(a[i].labels.back().end <= a[i].audio.size());
  }
  const auto dir = TempPath("corpus");
  fs::remove_all(dir);
  WriteCorpus(dir, a);
  const auto loaded = LoadCorpus(dir);
  REQUIRE(loaded.size() == a.size());
  for (const auto& u : loaded) {
    const auto it = std::find_if(a.begin(), a.end(), [&](const auto& g) { return g.id == u.id; });
    REQUIRE(it != a.end());
    CHECK(u.labels == it->labels);
  }
}

TEST_CASE("selection rule examples") {
  const auto cfg = TimitSelection();
  const auto audio = Tone(16000);
  // 16 samples per ms.
  const std::vector<PhoneLabel> nasal = {{0, 800, "m"}, {800, 2400, "iy"}, {2400, 3200, "d"}};
  CHECK(SelectVowelSegments(nasal, audio, cfg).empty());
  const std::vector<PhoneLabel> short_ax = {{0, 800, "d"}, {800, 1440, "ax"}, {1440, 2000, "d"}};
  CHECK(SelectVowelSegments(short_ax, audio, cfg).empty());
  const std::vector<PhoneLabel> aa = {{0, 800, "b"}, {800, 2720, "aa"}, {2720, 3200, "d"}};
  const auto kept = SelectVowelSegments(aa, audio, cfg);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].fb_class == VowelClass::kBack);
  std::istringstream two("0 1600 h#\n1600 4000 iy");
  CHECK(ParsePhoneLabels(two).size() == 2);
  std::istringstream xyz("x y z\n");
  try {
    ParsePhoneLabels(xyz);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("per-vowel means equal the column averages") {
  std::istringstream in(
      "vowel,gender,F0,F1,F2,F3,L1,L2,L3\n"
      "iy,male,130,260,2300,3000,-4,-20,-27\n"
      "aa,male,120,700,1100,2400,-1,-5,-28\n"
      "iy,male,140,280,2280,3020,-5,-25,-29\n"
      "iy,female,230,310,2790,3310,-4,-20,-24\n");
  const auto rows = ParsePbTable(in);
  const auto means = PbMeans(rows);
  REQUIRE(means.size() == 3);
  CHECK(means[0].vowel == "iy");
  CHECK(means[0].gender == Gender::kMale);
  double f1 = 0.0, l2 = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.vowel == "iy" && r.gender == Gender::kMale) {
      f1 += r.f1;
      l2 += r.l2;
      ++n;
    }
  }
  CHECK(means[0].f1 == doctest::Approx(f1 / n));
  CHECK(means[0].l2 == doctest::Approx(l2 / n));
  CHECK(means[2].gender == Gender::kFemale);
}

TEST_CASE("equal signal and noise power is 0 dB") {
  const auto x = Tone(8000);
  const auto y = MixNoise(x, NoiseSpec{NoiseKind::kWhite, 0.0, 2, std::nullopt});
  std::vector<double> n(x.size());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = y.samples[i] - x.samples[i];
  CHECK(Power(n) == doctest::Approx(Power(x.samples)).epsilon(1e-9));
}
