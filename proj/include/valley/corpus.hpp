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

// Audio and label ingestion, vowel-segment selection, formant tables,
// noise mixing and the synthetic vowel corpus.

#ifndef VALLEY_CORPUS_HPP_
#define VALLEY_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "valley/types.hpp"

namespace valley {

/// Reads a RIFF/WAVE PCM 16-bit mono file; samples are divided by 32768.
/// Throws FormatError naming the offending field ("riff", "fmt", "encoding",
/// "channels", "bits", "data").
SignalBuffer LoadWav(const std::filesystem::path& path);

/// Writes PCM 16-bit mono, rounding and clipping to [-32768, 32767].
void SaveWav(const std::filesystem::path& path, const SignalBuffer& x);

struct PhoneLabel {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  friend bool operator==(const PhoneLabel&, const PhoneLabel&) = default;
};

/// "start end label" per line in samples; blank lines ignored. Throws
/// ParseError (1-based line) and ordering-error for overlapping or
/// descending entries.
std::vector<PhoneLabel> ParsePhoneLabels(std::istream& in);
std::vector<PhoneLabel> LoadPhoneLabels(const std::filesystem::path& path);

enum class VowelClass { kFront, kBack, kCentral };

const char* VowelClassName(VowelClass c);

struct SelectionConfig {
  std::set<std::string> front;
  std::set<std::string> back;
  std::set<std::string> central;
  std::set<std::string> exclude_context;  // nasals, r-sounds, aspirates
  double min_duration_ms = 45.0;

  std::optional<VowelClass> Classify(const std::string& label) const;
};

SelectionConfig TimitSelection();
SelectionConfig DravidianSelection();

/// Plain-text config: "front|back|central|exclude <labels...>" and
/// "min_duration_ms <value>" lines, '#' comments.
SelectionConfig ParseSelectionConfig(std::istream& in);
SelectionConfig LoadSelectionConfig(const std::filesystem::path& path);

struct VowelSegment {
  SignalBuffer audio;
  std::string phone_label;
  VowelClass fb_class = VowelClass::kFront;
  std::string utterance_id;
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;
};

/// Inventory vowels of at least min_duration_ms whose immediate neighbours
/// are not in the exclusion set, in label order. Labels past the end of the
/// audio are skipped.
std::vector<VowelSegment> SelectVowelSegments(
    const std::vector<PhoneLabel>& labels, const SignalBuffer& audio,
    const SelectionConfig& config, const std::string& utterance_id = "");

enum class Gender { kMale, kFemale };

const char* GenderName(Gender g);

struct PbEntry {
  std::string vowel;
  Gender gender = Gender::kMale;
  double f0 = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
};

/// CSV with header "vowel,gender,F0,F1,F2,F3,L1,L2,L3" (columns in any
/// order). Missing column -> FormatError; F1 < F2 < F3 violated or a
/// non-finite value -> ValidationError with the 1-based data row.
std::vector<PbEntry> ParsePbTable(std::istream& in);
std::vector<PbEntry> LoadPbTable(const std::filesystem::path& path);

/// The bundled per-vowel, per-gender mean table.
std::vector<PbEntry> BundledPbMeans();

/// Column-wise mean per (vowel, gender), ordered by first appearance.
std::vector<PbEntry> PbMeans(const std::vector<PbEntry>& entries);

enum class NoiseKind { kWhite, kBabble };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kWhite;
  double snr_db = 20.0;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> babble_source;
};

/// Adds noise scaled so that mean(x^2) / mean(noise^2) = 10^(snr/10) over
/// the whole buffer. White noise is Gaussian; babble is a window of the
/// source at a seeded random offset. Throws degenerate-input for a
/// zero-power signal and FormatError for a short or mismatched babble
/// source.
SignalBuffer MixNoise(const SignalBuffer& x, const NoiseSpec& spec);
SignalBuffer MixNoise(const SignalBuffer& x, const NoiseSpec& spec,
                      const SignalBuffer* babble);

/// Stable per-segment seed from a run seed, utterance id and segment index.
std::uint64_t SegmentSeed(std::uint64_t seed, const std::string& utterance_id,
                          std::size_t segment_index);

struct SyntheticCorpusConfig {
  std::uint64_t seed = 1;
  int speakers_per_gender = 16;
  int utterances_per_speaker = 20;
  double sample_rate = 16000.0;
  double vowel_ms = 150.0;
  double f0_min = 100.0;
  double f0_max = 250.0;
  double speaker_scale_sd = 0.05;
  double formant_jitter_sd = 0.03;
  /// Every n-th utterance puts the vowel between nasals.
  int nasal_every = 10;
  /// Every n-th utterance appends a 40 ms central vowel.
  int short_every = 7;
  /// Bandwidths are fitted at this rate to the table levels.
  double calibration_rate = 10000.0;
  double max_bandwidth_hz = 400.0;
  double tilt_db_per_octave = -6.0;
};

struct SyntheticUtterance {
  std::string id;
  SignalBuffer audio;
  std::vector<PhoneLabel> labels;
};

/// Per-gender, per-vowel bandwidths fitted to the table levels (best effort
/// when the fit does not converge), clamped to max_bandwidth_hz.
std::map<std::pair<std::string, Gender>, std::vector<double>>
FitCorpusBandwidths(const std::vector<PbEntry>& means,
                    const SyntheticCorpusConfig& cfg);

/// Utterances "h# <c> <vowel> <c> h#" from jittered table means: one scale
/// factor per speaker, one jitter factor per formant, uniform F0.
std::vector<SyntheticUtterance> GenerateSyntheticCorpus(
    const std::vector<PbEntry>& means, const SyntheticCorpusConfig& cfg);

/// Sum of `talkers` overlapping synthetic vowel streams, normalized to
/// unit RMS.
SignalBuffer GenerateBabble(const std::vector<PbEntry>& means,
                            double sample_rate, double duration_s,
                            std::uint64_t seed, int talkers = 6);

/// Writes <id>.wav and <id><labels_ext> for each utterance.
void WriteCorpus(const std::filesystem::path& dir,
                 const std::vector<SyntheticUtterance>& utterances,
                 const std::string& labels_ext = ".phn");

struct CorpusUtterance {
  std::string id;
  SignalBuffer audio;
  std::vector<PhoneLabel> labels;
};

/// Every *.wav in `dir` (sorted by name) with its label sidecar.
std::vector<CorpusUtterance> LoadCorpus(const std::filesystem::path& dir,
                                        const std::string& labels_ext = ".phn");

}  // namespace valley

#endif  // VALLEY_CORPUS_HPP_
