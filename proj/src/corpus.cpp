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

#include "valley/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "valley/errors.hpp"
#include "valley/synth.hpp"

namespace valley {

namespace {

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(Trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("file", "cannot open " + path.string());
  return in;
}

}  // namespace

SignalBuffer LoadWav(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 12 || std::memcmp(p, "RIFF", 4) != 0 ||
      std::memcmp(p + 8, "WAVE", 4) != 0) {
    throw FormatError("riff", "not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  double rate = 0.0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = ReadU32(p + pos + 4);
    const unsigned char* body = p + pos + 8;
    if (pos + 8 + size > bytes.size()) {
      throw FormatError("chunk", "chunk extends past end of file");
    }
    if (std::memcmp(p + pos, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("fmt", "fmt chunk too short");
      if (ReadU16(body) != 1) throw FormatError("encoding", "only PCM is supported");
      if (ReadU16(body + 2) != 1) throw FormatError("channels", "only mono is supported");
      if (ReadU16(body + 14) != 16) throw FormatError("bits", "only 16-bit samples");
      rate = ReadU32(body + 4);
      if (!(rate > 0.0)) throw FormatError("sample_rate", "zero sample rate");
      have_fmt = true;
    } else if (std::memcmp(p + pos, "data", 4) == 0) {
      if (!have_fmt) throw FormatError("fmt", "data chunk before fmt chunk");
      SignalBuffer x;
      x.sample_rate = rate;
      x.samples.resize(size / 2);
      for (std::size_t i = 0; i < x.samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(ReadU16(body + 2 * i));
        x.samples[i] = static_cast<double>(v) / 32768.0;
      }
      return x;
    }
    pos += 8 + size + (size & 1u);
  }
  throw FormatError("data", "no data chunk");
}

void SaveWav(const std::filesystem::path& path, const SignalBuffer& x) {
  x.Validate();
  const auto rate = static_cast<std::uint32_t>(std::lround(x.sample_rate));
  const auto data_bytes = static_cast<std::uint32_t>(2 * x.samples.size());
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, rate);
  PutU32(out, rate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, data_bytes);
  for (double s : x.samples) {
    const double v = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("file", "cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

std::vector<PhoneLabel> ParsePhoneLabels(std::istream& in) {
  std::vector<PhoneLabel> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::istringstream ss(line);
    std::string a, b, label, extra;
    if (!(ss >> a >> b >> label) || (ss >> extra)) {
      throw ParseError(line_no, "expected 'start end label'");
    }
    PhoneLabel pl;
    try {
      std::size_t used_a = 0, used_b = 0;
      const long long s = std::stoll(a, &used_a);
      const long long e = std::stoll(b, &used_b);
      if (used_a != a.size() || used_b != b.size() || s < 0 || e < 0) {
        throw std::invalid_argument("bad");
      }
      pl.start = static_cast<std::size_t>(s);
      pl.end = static_cast<std::size_t>(e);
    } catch (const std::exception&) {
      throw ParseError(line_no, "sample positions must be non-negative integers");
    }
    if (pl.end <= pl.start) throw ParseError(line_no, "end must exceed start");
    pl.label = label;
    if (!labels.empty() && pl.start < labels.back().end) {
      throw Error(ErrorCode::kOrderingError,
                  "label at line " + std::to_string(line_no) +
                      " overlaps or precedes the previous entry");
    }
    labels.push_back(std::move(pl));
  }
  return labels;
}

std::vector<PhoneLabel> LoadPhoneLabels(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParsePhoneLabels(in);
}

const char* VowelClassName(VowelClass c) {
  switch (c) {
    case VowelClass::kFront: return "front";
    case VowelClass::kBack: return "back";
    case VowelClass::kCentral: return "central";
  }
  return "?";
}

std::optional<VowelClass> SelectionConfig::Classify(const std::string& label) const {
  if (front.count(label)) return VowelClass::kFront;
  if (back.count(label)) return VowelClass::kBack;
  if (central.count(label)) return VowelClass::kCentral;
  return std::nullopt;
}

SelectionConfig TimitSelection() {
  SelectionConfig c;
  c.front = {"iy", "ih", "eh", "ae"};
  c.back = {"aa", "ah", "ao", "uh", "uw"};
  c.central = {"ux", "ax"};
  c.exclude_context = {"m", "n", "ng", "em", "en", "eng", "nx",
                       "r", "er", "axr", "hh", "hv"};
  return c;
}

SelectionConfig DravidianSelection() {
  SelectionConfig c;
  c.front = {"i", "I", "e", "E"};
  c.back = {"a", "A", "o", "O", "u", "U"};
  c.exclude_context = {"m", "n", "N", "J", "G", "r", "R", "h"};
  return c;
}

SelectionConfig ParseSelectionConfig(std::istream& in) {
  SelectionConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    std::set<std::string>* target = nullptr;
    if (key == "front") target = &c.front;
    else if (key == "back") target = &c.back;
    else if (key == "central") target = &c.central;
    else if (key == "exclude") target = &c.exclude_context;
    if (target != nullptr) {
      for (std::string tok; ss >> tok;) target->insert(tok);
    } else if (key == "min_duration_ms") {
      if (!(ss >> c.min_duration_ms) || c.min_duration_ms < 0.0) {
        throw ParseError(line_no, "min_duration_ms needs a non-negative number");
      }
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  return c;
}

SelectionConfig LoadSelectionConfig(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseSelectionConfig(in);
}

std::vector<VowelSegment> SelectVowelSegments(
    const std::vector<PhoneLabel>& labels, const SignalBuffer& audio,
    const SelectionConfig& config, const std::string& utterance_id) {
  std::vector<VowelSegment> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    const auto cls = config.Classify(l.label);
    if (!cls) continue;
    const double ms =
        1000.0 * static_cast<double>(l.end - l.start) / audio.sample_rate;
    if (ms < config.min_duration_ms) continue;
    if (i > 0 && config.exclude_context.count(labels[i - 1].label)) continue;
    if (i + 1 < labels.size() &&
        config.exclude_context.count(labels[i + 1].label)) {
      continue;
    }
    if (l.end > audio.size()) continue;
    VowelSegment seg;
    seg.audio.sample_rate = audio.sample_rate;
    seg.audio.samples.assign(audio.samples.begin() + static_cast<std::ptrdiff_t>(l.start),
                             audio.samples.begin() + static_cast<std::ptrdiff_t>(l.end));
    seg.phone_label = l.label;
    seg.fb_class = *cls;
    seg.utterance_id = utterance_id;
    seg.start_sample = l.start;
    seg.end_sample = l.end;
    out.push_back(std::move(seg));
  }
  return out;
}

const char* GenderName(Gender g) {
  return g == Gender::kMale ? "male" : "female";
}

std::vector<PbEntry> ParsePbTable(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("header", "empty table");
  const auto header = SplitCsv(line);
  const std::vector<std::string> required = {"vowel", "gender", "F0", "F1", "F2",
                                             "F3",    "L1",     "L2", "L3"};
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : required) {
    if (!col.count(name)) throw FormatError(name, "missing column");
  }
  std::vector<PbEntry> entries;
  int row = 0;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    ++row;
    const auto f = SplitCsv(line);
    if (f.size() != header.size()) throw ValidationError(row, "wrong field count");
    auto num = [&](const char* name) {
      const std::string& s = f[col[name]];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw ValidationError(row, std::string("bad value for ") + name);
      }
      return v;
    };
    PbEntry e;
    e.vowel = f[col["vowel"]];
    const std::string& g = f[col["gender"]];
    if (g == "male" || g == "m") e.gender = Gender::kMale;
    else if (g == "female" || g == "f") e.gender = Gender::kFemale;
    else throw ValidationError(row, "gender must be male or female");
    e.f0 = num("F0");
    e.f1 = num("F1");
    e.f2 = num("F2");
    e.f3 = num("F3");
    e.l1 = num("L1");
    e.l2 = num("L2");
    e.l3 = num("L3");
    if (!(e.f1 < e.f2 && e.f2 < e.f3)) {
      throw ValidationError(row, "formants must satisfy F1 < F2 < F3");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<PbEntry> LoadPbTable(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParsePbTable(in);
}

extern const char* const kBundledPbMeansCsv;

std::vector<PbEntry> BundledPbMeans() {
  std::istringstream in(kBundledPbMeansCsv);
  return ParsePbTable(in);
}

std::vector<PbEntry> PbMeans(const std::vector<PbEntry>& entries) {
  std::vector<PbEntry> sums;
  std::vector<int> counts;
  for (const auto& e : entries) {
    auto it = std::find_if(sums.begin(), sums.end(), [&](const PbEntry& s) {
      return s.vowel == e.vowel && s.gender == e.gender;
    });
    if (it == sums.end()) {
      PbEntry z;
      z.vowel = e.vowel;
      z.gender = e.gender;
      sums.push_back(z);
      counts.push_back(0);
      it = sums.end() - 1;
    }
    const auto k = static_cast<std::size_t>(it - sums.begin());
    it->f0 += e.f0;
    it->f1 += e.f1;
    it->f2 += e.f2;
    it->f3 += e.f3;
    it->l1 += e.l1;
    it->l2 += e.l2;
    it->l3 += e.l3;
    ++counts[k];
  }
  for (std::size_t k = 0; k < sums.size(); ++k) {
    const double n = counts[k];
    auto& s = sums[k];
    s.f0 /= n;
    s.f1 /= n;
    s.f2 /= n;
    s.f3 /= n;
    s.l1 /= n;
    s.l2 /= n;
    s.l3 /= n;
  }
  return sums;
}

namespace {

double Power(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum / static_cast<double>(x.size());
}

}  // namespace

SignalBuffer MixNoise(const SignalBuffer& x, const NoiseSpec& spec) {
  if (spec.kind == NoiseKind::kBabble) {
    if (!spec.babble_source) {
      ThrowInvalid("MixNoise: babble noise needs a source file");
    }
    const SignalBuffer babble = LoadWav(*spec.babble_source);
    return MixNoise(x, spec, &babble);
  }
  return MixNoise(x, spec, nullptr);
}

SignalBuffer MixNoise(const SignalBuffer& x, const NoiseSpec& spec,
                      const SignalBuffer* babble) {
  if (!std::isfinite(spec.snr_db)) ThrowInvalid("MixNoise: SNR must be finite");
  if (x.samples.empty()) throw Error(ErrorCode::kDegenerateInput, "MixNoise: empty signal");
  const double ps = Power(x.samples);
  if (!(ps > 0.0)) throw Error(ErrorCode::kDegenerateInput, "MixNoise: zero-power signal");
  std::mt19937_64 rng(spec.seed);
  std::vector<double> noise(x.size());
  if (spec.kind == NoiseKind::kWhite) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (double& v : noise) v = dist(rng);
  } else {
    if (babble == nullptr) ThrowInvalid("MixNoise: babble noise needs a source");
    if (babble->sample_rate != x.sample_rate) {
      throw FormatError("sample_rate", "babble source rate differs from signal");
    }
    if (babble->size() < x.size()) {
      throw FormatError("length", "babble source shorter than the signal");
    }
    std::uniform_int_distribution<std::size_t> offset(0, babble->size() - x.size());
    const std::size_t start = offset(rng);
    std::copy_n(babble->samples.begin() + static_cast<std::ptrdiff_t>(start),
                x.size(), noise.begin());
  }
  const double pn = Power(noise);
  if (!(pn > 0.0)) throw Error(ErrorCode::kDegenerateInput, "MixNoise: silent noise source");
  const double scale = std::sqrt(ps / (pn * std::pow(10.0, spec.snr_db / 10.0)));
  SignalBuffer y = x;
  for (std::size_t i = 0; i < y.size(); ++i) y.samples[i] += scale * noise[i];
  return y;
}

std::uint64_t SegmentSeed(std::uint64_t seed, const std::string& utterance_id,
                          std::size_t segment_index) {
  // FNV-1a over the inputs, then a splitmix64 finalizer.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 8; ++i) mix((seed >> (8 * i)) & 0xff);
  for (unsigned char c : utterance_id) mix(c);
  for (int i = 0; i < 8; ++i) mix((static_cast<std::uint64_t>(segment_index) >> (8 * i)) & 0xff);
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

namespace {

std::vector<FormantSpec> HigherFormants(Gender g) {
  if (g == Gender::kMale) return {{3500.0, 100.0}, {4500.0, 100.0}};
  return {{4200.0, 100.0}};
}

// Vowel of `n` samples; a 50 ms lead-in lets the resonators settle.
std::vector<double> SynthVowel(const std::vector<FormantSpec>& formants,
                               double f0, double tilt, double rate,
                               std::size_t n) {
  const auto lead = static_cast<std::size_t>(0.05 * rate);
  const auto y = Synthesize(formants, Excitation::TiltedTrain(f0, tilt), rate,
                            n + lead);
  std::vector<double> out(y.samples.begin() + static_cast<std::ptrdiff_t>(lead),
                          y.samples.end());
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : out) v *= 0.5 / peak;
  }
  return out;
}

}  // namespace

std::map<std::pair<std::string, Gender>, std::vector<double>>
FitCorpusBandwidths(const std::vector<PbEntry>& means,
                    const SyntheticCorpusConfig& cfg) {
  std::map<std::pair<std::string, Gender>, std::vector<double>> out;
  for (const auto& e : means) {
    CalibrationOptions opts;
    opts.higher_formants = HigherFormants(e.gender);
    const std::vector<double> freqs{e.f1, e.f2, e.f3};
    std::vector<double> bw;
    try {
      bw = CalibrateBandwidths(freqs, FormantLevels{{e.l1, e.l2, e.l3}},
                               Excitation::TiltedTrain(e.f0, cfg.tilt_db_per_octave),
                               cfg.calibration_rate, opts)
               .bandwidths;
    } catch (const CalibrationError& err) {
      bw = err.best_bandwidths();
    }
    for (double& b : bw) b = std::min(b, cfg.max_bandwidth_hz);
    out[{e.vowel, e.gender}] = bw;
  }
  return out;
}

std::vector<SyntheticUtterance> GenerateSyntheticCorpus(
    const std::vector<PbEntry>& means, const SyntheticCorpusConfig& cfg) {
  if (means.empty()) ThrowInvalid("GenerateSyntheticCorpus: empty table");
  const auto bandwidths = FitCorpusBandwidths(means, cfg);
  std::map<Gender, std::vector<const PbEntry*>> by_gender;
  for (const auto& e : means) by_gender[e.gender].push_back(&e);
  const PbEntry* central = nullptr;
  for (const auto& e : means) {
    if (e.vowel == "ah" && central == nullptr) central = &e;
  }
  if (central == nullptr) central = &means.front();

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> f0_dist(cfg.f0_min, cfg.f0_max);
  const double rate = cfg.sample_rate;
  auto samples = [rate](double ms) {
    return static_cast<std::size_t>(std::lround(ms * rate / 1000.0));
  };
  const std::vector<std::string> stops = {"d", "b", "g", "t", "k", "p"};

  std::vector<SyntheticUtterance> out;
  int counter = 0;
  for (int s = 0; s < 2 * cfg.speakers_per_gender; ++s) {
    const Gender g = s % 2 == 0 ? Gender::kMale : Gender::kFemale;
    const auto& vowels = by_gender[g];
    if (vowels.empty()) continue;
    const double scale = 1.0 + cfg.speaker_scale_sd * unit(rng);
    auto higher = HigherFormants(g);
    for (auto& h : higher) h.frequency *= scale;
    for (int u = 0; u < cfg.utterances_per_speaker; ++u, ++counter) {
      const PbEntry& e = *vowels[static_cast<std::size_t>(u + s) % vowels.size()];
      const auto& bw = bandwidths.at({e.vowel, e.gender});
      const double base[3] = {e.f1, e.f2, e.f3};
      std::vector<FormantSpec> formants;
      for (int k = 0; k < 3; ++k) {
        formants.push_back(
            {base[k] * scale * (1.0 + cfg.formant_jitter_sd * unit(rng)), bw[k]});
      }
      formants.insert(formants.end(), higher.begin(), higher.end());
      const double f0 = f0_dist(rng);
      const bool nasal = cfg.nasal_every > 0 && counter % cfg.nasal_every == 0;
      const bool extra = cfg.short_every > 0 && counter % cfg.short_every == 3;

      SyntheticUtterance utt;
      utt.id = std::string(g == Gender::kMale ? "m" : "f") +
               (s / 2 < 10 ? "0" : "") + std::to_string(s / 2) + "_" +
               (u < 10 ? "0" : "") + std::to_string(u);
      utt.audio.sample_rate = rate;
      auto append = [&](const std::string& label, std::vector<double> chunk) {
        const std::size_t start = utt.audio.samples.size();
        utt.audio.samples.insert(utt.audio.samples.end(), chunk.begin(), chunk.end());
        utt.labels.push_back({start, utt.audio.samples.size(), label});
      };
      auto noise = [&](double ms, double amp) {
        std::vector<double> v(samples(ms));
        for (double& x : v) x = amp * unit(rng);
        return v;
      };
      auto murmur = [&](double ms) {
        const std::vector<FormantSpec> nasal_formants{{250.0, 100.0}, {2500.0, 300.0}};
        auto v = SynthVowel(nasal_formants, f0, cfg.tilt_db_per_octave, rate, samples(ms));
        for (double& x : v) x *= 0.1;
        return v;
      };
      const std::string& stop = stops[static_cast<std::size_t>(counter) % stops.size()];
      append("h#", noise(60.0, 1e-3));
      if (nasal) append("m", murmur(40.0)); else append(stop, noise(40.0, 0.02));
      append(e.vowel, SynthVowel(formants, f0, cfg.tilt_db_per_octave, rate,
                                 samples(cfg.vowel_ms)));
      if (nasal) append("n", murmur(40.0)); else append(stop, noise(40.0, 0.02));
      if (extra) {
        std::vector<FormantSpec> cf;
        for (double f : {central->f1, central->f2, central->f3}) cf.push_back({f * scale, 100.0});
        cf.insert(cf.end(), higher.begin(), higher.end());
        append("ax", SynthVowel(cf, f0, cfg.tilt_db_per_octave, rate, samples(40.0)));
        append("d", noise(40.0, 0.02));
      }
      append("h#", noise(60.0, 1e-3));
      out.push_back(std::move(utt));
    }
  }
  return out;
}

SignalBuffer GenerateBabble(const std::vector<PbEntry>& means,
                            double sample_rate, double duration_s,
                            std::uint64_t seed, int talkers) {
  if (means.empty() || talkers < 1 || !(duration_s > 0.0)) {
    ThrowInvalid("GenerateBabble: bad arguments");
  }
  const auto n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
  std::vector<double> mix(n, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, means.size() - 1);
  std::uniform_real_distribution<double> dur(0.08, 0.25);
  std::uniform_real_distribution<double> f0_dist(100.0, 250.0);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < talkers; ++t) {
    const double scale = 1.0 + 0.05 * unit(rng);
    std::size_t pos = 0;
    while (pos < n) {
      const PbEntry& e = means[pick(rng)];
      const auto len = static_cast<std::size_t>(dur(rng) * sample_rate);
      std::vector<FormantSpec> formants{{e.f1 * scale, 90.0}, {e.f2 * scale, 120.0},
                                        {e.f3 * scale, 180.0}};
      for (const auto& h : HigherFormants(e.gender)) {
        if (h.frequency * scale < 0.5 * sample_rate) {
          formants.push_back({h.frequency * scale, h.bandwidth});
        }
      }
      const auto v = SynthVowel(formants, f0_dist(rng), -6.0, sample_rate, len);
      for (std::size_t i = 0; i < v.size() && pos + i < n; ++i) mix[pos + i] += v[i];
      pos += len;
    }
  }
  SignalBuffer out{std::move(mix), sample_rate};
  const double rms = std::sqrt(Power(out.samples));
  if (rms > 0.0) {
    for (double& v : out.samples) v *= 0.1 / rms;
  }
  return out;
}

void WriteCorpus(const std::filesystem::path& dir,
                 const std::vector<SyntheticUtterance>& utterances,
                 const std::string& labels_ext) {
  std::filesystem::create_directories(dir);
  for (const auto& u : utterances) {
    SaveWav(dir / (u.id + ".wav"), u.audio);
    std::ofstream f(dir / (u.id + labels_ext));
    if (!f) throw FormatError("file", "cannot write labels for " + u.id);
    for (const auto& l : u.labels) f << l.start << ' ' << l.end << ' ' << l.label << '\n';
  }
}

std::vector<CorpusUtterance> LoadCorpus(const std::filesystem::path& dir,
                                        const std::string& labels_ext) {
  if (!std::filesystem::is_directory(dir)) {
    ThrowInvalid("LoadCorpus: not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> wavs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      wavs.push_back(entry.path());
    }
  }
  std::sort(wavs.begin(), wavs.end());
  std::vector<CorpusUtterance> out;
  for (const auto& w : wavs) {
    CorpusUtterance u;
    u.id = w.stem().string();
    u.audio = LoadWav(w);
    auto labels_path = w;
    labels_path.replace_extension(labels_ext);
    u.labels = LoadPhoneLabels(labels_path);
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace valley
