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

// MFCC features and a one-hidden-layer network for the front/back
// benchmark.

#ifndef VALLEY_BASELINE_HPP_
#define VALLEY_BASELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "valley/corpus.hpp"
#include "valley/sigproc.hpp"
#include "valley/types.hpp"

namespace valley {

struct MfccConfig {
  double sample_rate = 16000.0;
  double frame_ms = 20.0;
  double overlap = 0.5;
  double preemphasis = 0.97;
  WindowKind window = WindowKind::kHamming;
  int n_filters = 26;
  int n_coefficients = 12;  // c1 .. c12, c0 dropped
  int fft_size = 0;         // 0: next power of two >= frame length

  std::size_t frame_length() const;
  int resolved_fft_size() const;
};

/// HTK mel scale, 2595 log10(1 + f / 700).
double HzToMel(double hz);
double MelToHz(double mel);

/// Triangular filters with edges equally spaced in mel from 0 to fs / 2;
/// row-major n_filters x (fft_size / 2 + 1).
std::vector<double> MelFilterbank(const MfccConfig& cfg);

/// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> Dct2(std::span<const double> x);
std::vector<double> InverseDct2(std::span<const double> c);

/// One frame of frame_length() samples: pre-emphasis, window, power
/// spectrum, log mel energies, DCT-II, keep c1..c12. Throws degenerate-input
/// for an all-zero frame and invalid-argument for a length mismatch.
std::vector<double> Mfcc(std::span<const double> frame, const MfccConfig& cfg);

/// Mean of the frame MFCCs of a segment; frames that are all zero are
/// skipped. Throws degenerate-input when no frame is usable.
std::vector<double> SegmentMfcc(const SignalBuffer& segment,
                                const MfccConfig& cfg);

/// Standardized two-layer network: tanh hidden layer, logistic output.
struct MlpModel {
  int input_dim = 0;
  int hidden_units = 10;
  std::vector<double> w1;  // hidden x input, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;
  std::vector<double> input_mean;   // applied before the first layer
  std::vector<double> input_scale;  // divides after centring
  std::uint64_t seed = 0;

  /// Flattened (w1, b1, w2, b2).
  std::vector<double> Parameters() const;
  void SetParameters(std::span<const double> params);
};

struct TrainOptions {
  int hidden_units = 10;
  std::uint64_t seed = 1;
  int epochs = 300;
  int batch_size = 16;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double holdout_fraction = 0.1;
  int patience = 30;  // epochs without validation improvement
};

/// Shuffled mini-batch gradient descent with momentum on mean
/// cross-entropy; the last holdout_fraction of the seeded permutation is
/// the early-stopping set and the best validation weights are returned.
/// labels: 1 = back, 0 = front. Throws invalid-argument for a single class,
/// ragged or non-finite input.
MlpModel TrainMlp(const std::vector<std::vector<double>>& samples,
                  const std::vector<int>& labels,
                  const TrainOptions& options = {});

/// Network output in (0, 1).
double MlpOutput(const MlpModel& model, std::span<const double> x);

/// Mean cross-entropy over the batch.
double MlpLoss(const MlpModel& model,
               const std::vector<std::vector<double>>& samples,
               const std::vector<int>& labels);

/// Gradient of MlpLoss with respect to Parameters().
std::vector<double> MlpGradient(const MlpModel& model,
                                const std::vector<std::vector<double>>& samples,
                                const std::vector<int>& labels);

struct MlpPrediction {
  VowelClass predicted = VowelClass::kFront;
  double score = 0.0;
};

/// Back iff output > 0.5.
MlpPrediction Predict(const MlpModel& model, std::span<const double> x);

/// Text format: a "valley-mlp <input> <hidden> <seed>" header, then the
/// standardization vectors and parameters, one "%.17g" value per token.
void SaveMlp(const std::filesystem::path& path, const MlpModel& model);
MlpModel LoadMlp(const std::filesystem::path& path);
std::string SerializeMlp(const MlpModel& model);
MlpModel DeserializeMlp(const std::string& text);

}  // namespace valley

#endif  // VALLEY_BASELINE_HPP_
