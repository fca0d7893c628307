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

#include "valley/baseline.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "valley/errors.hpp"

namespace valley {

std::size_t MfccConfig::frame_length() const {
  return static_cast<std::size_t>(std::lround(frame_ms * sample_rate / 1000.0));
}

int MfccConfig::resolved_fft_size() const {
  if (fft_size > 0) return fft_size;
  int n = 1;
  while (static_cast<std::size_t>(n) < frame_length()) n *= 2;
  return n;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> MelFilterbank(const MfccConfig& cfg) {
  if (cfg.n_filters < 1) ThrowInvalid("MelFilterbank: need at least one filter");
  const int nfft = cfg.resolved_fft_size();
  const int nbins = nfft / 2 + 1;
  const double top = HzToMel(0.5 * cfg.sample_rate);
  std::vector<double> edges(static_cast<std::size_t>(cfg.n_filters) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(top * static_cast<double>(i) / (cfg.n_filters + 1));
  }
  std::vector<double> fb(static_cast<std::size_t>(cfg.n_filters) * nbins, 0.0);
  for (int m = 0; m < cfg.n_filters; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (int k = 0; k < nbins; ++k) {
      const double f = k * cfg.sample_rate / nfft;
      double w = 0.0;
      if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
      fb[static_cast<std::size_t>(m) * nbins + k] = w;
    }
  }
  return fb;
}

std::vector<double> Dct2(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += x[i] * std::cos(std::numbers::pi * k * (i + 0.5) / n);
    }
    c[k] = sum * std::sqrt((k == 0 ? 1.0 : 2.0) / n);
  }
  return c;
}

std::vector<double> InverseDct2(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += c[k] * std::sqrt((k == 0 ? 1.0 : 2.0) / n) *
             std::cos(std::numbers::pi * k * (i + 0.5) / n);
    }
    x[i] = sum;
  }
  return x;
}

namespace {

// The FFTW planner is not thread-safe; execution on fresh arrays is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

std::vector<double> PowerSpectrum(std::span<const double> frame, int nfft) {
  double* in = fftw_alloc_real(static_cast<std::size_t>(nfft));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(nfft / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_r2c_1d(nfft, in, out, FFTW_ESTIMATE);
  }
  std::fill(in, in + nfft, 0.0);
  std::copy(frame.begin(), frame.end(), in);
  fftw_execute(plan);
  std::vector<double> power(static_cast<std::size_t>(nfft / 2 + 1));
  for (std::size_t k = 0; k < power.size(); ++k) {
    power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
  }
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return power;
}

}  // namespace

std::vector<double> Mfcc(std::span<const double> frame, const MfccConfig& cfg) {
  if (frame.size() != cfg.frame_length()) {
    ThrowInvalid("Mfcc: frame length does not match the configuration");
  }
  if (cfg.n_coefficients >= cfg.n_filters) {
    ThrowInvalid("Mfcc: more coefficients than filters");
  }
  if (std::all_of(frame.begin(), frame.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorCode::kDegenerateInput, "Mfcc: all-zero frame");
  }
  const auto emphasized = Preemphasize(
      SignalBuffer{std::vector<double>(frame.begin(), frame.end()), cfg.sample_rate},
      cfg.preemphasis);
  const auto windowed = ApplyWindow(emphasized.samples, cfg.window);
  const int nfft = cfg.resolved_fft_size();
  if (static_cast<std::size_t>(nfft) < windowed.size()) {
    ThrowInvalid("Mfcc: FFT size shorter than the frame");
  }
  const auto power = PowerSpectrum(windowed, nfft);
  const auto fb = MelFilterbank(cfg);
  const std::size_t nbins = power.size();
  std::vector<double> log_energy(static_cast<std::size_t>(cfg.n_filters));
  for (int m = 0; m < cfg.n_filters; ++m) {
    double e = 0.0;
    for (std::size_t k = 0; k < nbins; ++k) e += fb[m * nbins + k] * power[k];
    if (!(e > 0.0)) e = std::numeric_limits<double>::min();
    log_energy[static_cast<std::size_t>(m)] = std::log(e);
  }
  const auto c = Dct2(log_energy);
  return {c.begin() + 1, c.begin() + 1 + cfg.n_coefficients};
}

std::vector<double> SegmentMfcc(const SignalBuffer& segment, const MfccConfig& cfg) {
  if (segment.sample_rate != cfg.sample_rate) {
    ThrowInvalid("SegmentMfcc: segment rate does not match the configuration");
  }
  const auto frames = FrameSignal(segment, cfg.frame_ms, cfg.overlap);
  std::vector<double> mean(static_cast<std::size_t>(cfg.n_coefficients), 0.0);
  int used = 0;
  for (const auto& f : frames) {
    try {
      const auto c = Mfcc(f, cfg);
      for (std::size_t i = 0; i < c.size(); ++i) mean[i] += c[i];
      ++used;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateInput) throw;
    }
  }
  if (used == 0) throw Error(ErrorCode::kDegenerateInput, "SegmentMfcc: no usable frame");
  for (double& v : mean) v /= used;
  return mean;
}

std::vector<double> MlpModel::Parameters() const {
  std::vector<double> p;
  p.reserve(w1.size() + b1.size() + w2.size() + 1);
  p.insert(p.end(), w1.begin(), w1.end());
  p.insert(p.end(), b1.begin(), b1.end());
  p.insert(p.end(), w2.begin(), w2.end());
  p.push_back(b2);
  return p;
}

void MlpModel::SetParameters(std::span<const double> params) {
  const std::size_t h = static_cast<std::size_t>(hidden_units);
  const std::size_t d = static_cast<std::size_t>(input_dim);
  if (params.size() != h * d + 2 * h + 1) ThrowInvalid("SetParameters: size mismatch");
  auto it = params.begin();
  w1.assign(it, it + static_cast<std::ptrdiff_t>(h * d));
  it += static_cast<std::ptrdiff_t>(h * d);
  b1.assign(it, it + static_cast<std::ptrdiff_t>(h));
  it += static_cast<std::ptrdiff_t>(h);
  w2.assign(it, it + static_cast<std::ptrdiff_t>(h));
  it += static_cast<std::ptrdiff_t>(h);
  b2 = *it;
}

namespace {

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> Standardize(const MlpModel& m, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(m.input_dim)) {
    ThrowInvalid("MLP: input dimension mismatch");
  }
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    z[i] = (x[i] - m.input_mean[i]) / m.input_scale[i];
  }
  return z;
}

struct Forward {
  std::vector<double> input;
  std::vector<double> hidden;
  double logit = 0.0;
};

Forward Run(const MlpModel& m, std::span<const double> x) {
  Forward f;
  f.input = Standardize(m, x);
  const std::size_t h = static_cast<std::size_t>(m.hidden_units);
  const std::size_t d = f.input.size();
  f.hidden.resize(h);
  f.logit = m.b2;
  for (std::size_t j = 0; j < h; ++j) {
    double a = m.b1[j];
    for (std::size_t i = 0; i < d; ++i) a += m.w1[j * d + i] * f.input[i];
    f.hidden[j] = std::tanh(a);
    f.logit += m.w2[j] * f.hidden[j];
  }
  return f;
}

// Cross-entropy from the logit, stable for saturated outputs.
double CrossEntropy(double logit, int label) {
  const double softplus = logit > 0.0 ? logit + std::log1p(std::exp(-logit))
                                      : std::log1p(std::exp(logit));
  return softplus - label * logit;
}

void AccumulateGradient(const MlpModel& m, std::span<const double> x, int label,
                        std::vector<double>& grad) {
  const Forward f = Run(m, x);
  const std::size_t h = static_cast<std::size_t>(m.hidden_units);
  const std::size_t d = f.input.size();
  const double delta_out = Sigmoid(f.logit) - label;
  const std::size_t off_b1 = h * d;
  const std::size_t off_w2 = off_b1 + h;
  const std::size_t off_b2 = off_w2 + h;
  for (std::size_t j = 0; j < h; ++j) {
    grad[off_w2 + j] += delta_out * f.hidden[j];
    const double delta_h = delta_out * m.w2[j] * (1.0 - f.hidden[j] * f.hidden[j]);
    grad[off_b1 + j] += delta_h;
    for (std::size_t i = 0; i < d; ++i) grad[j * d + i] += delta_h * f.input[i];
  }
  grad[off_b2] += delta_out;
}

void CheckData(const std::vector<std::vector<double>>& samples,
               const std::vector<int>& labels) {
  if (samples.empty() || samples.size() != labels.size()) {
    ThrowInvalid("MLP: samples and labels must be non-empty and equal in length");
  }
  const std::size_t d = samples.front().size();
  if (d == 0) ThrowInvalid("MLP: zero-dimensional input");
  for (const auto& s : samples) {
    if (s.size() != d) ThrowInvalid("MLP: ragged input");
    for (double v : s) {
      if (!std::isfinite(v)) ThrowInvalid("MLP: non-finite feature");
    }
  }
  for (int l : labels) {
    if (l != 0 && l != 1) ThrowInvalid("MLP: labels must be 0 or 1");
  }
}

}  // namespace

double MlpOutput(const MlpModel& model, std::span<const double> x) {
  return Sigmoid(Run(model, x).logit);
}

double MlpLoss(const MlpModel& model, const std::vector<std::vector<double>>& samples,
               const std::vector<int>& labels) {
  CheckData(samples, labels);
  double sum = 0.0;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    sum += CrossEntropy(Run(model, samples[n]).logit, labels[n]);
  }
  return sum / static_cast<double>(samples.size());
}

std::vector<double> MlpGradient(const MlpModel& model,
                                const std::vector<std::vector<double>>& samples,
                                const std::vector<int>& labels) {
  CheckData(samples, labels);
  std::vector<double> grad(model.Parameters().size(), 0.0);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    AccumulateGradient(model, samples[n], labels[n], grad);
  }
  for (double& g : grad) g /= static_cast<double>(samples.size());
  return grad;
}

MlpModel TrainMlp(const std::vector<std::vector<double>>& samples,
                  const std::vector<int>& labels, const TrainOptions& options) {
  CheckData(samples, labels);
  const int positives = std::accumulate(labels.begin(), labels.end(), 0);
  if (positives == 0 || positives == static_cast<int>(labels.size())) {
    ThrowInvalid("TrainMlp: both classes must be present");
  }
  if (options.hidden_units < 1 || options.batch_size < 1 || options.epochs < 1) {
    ThrowInvalid("TrainMlp: bad options");
  }
  MlpModel m;
  m.input_dim = static_cast<int>(samples.front().size());
  m.hidden_units = options.hidden_units;
  m.seed = options.seed;
  const std::size_t d = static_cast<std::size_t>(m.input_dim);
  const std::size_t h = static_cast<std::size_t>(m.hidden_units);

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_val = static_cast<std::size_t>(
      std::floor(options.holdout_fraction * static_cast<double>(samples.size())));
  if (samples.size() < 10) n_val = 0;
  const std::vector<std::size_t> train(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_val));
  const std::vector<std::size_t> val(order.end() - static_cast<std::ptrdiff_t>(n_val), order.end());

  m.input_mean.assign(d, 0.0);
  m.input_scale.assign(d, 0.0);
  for (std::size_t n : train) {
    for (std::size_t i = 0; i < d; ++i) m.input_mean[i] += samples[n][i];
  }
  for (double& v : m.input_mean) v /= static_cast<double>(train.size());
  for (std::size_t n : train) {
    for (std::size_t i = 0; i < d; ++i) {
      const double c = samples[n][i] - m.input_mean[i];
      m.input_scale[i] += c * c;
    }
  }
  for (double& v : m.input_scale) {
    v = std::sqrt(v / static_cast<double>(train.size()));
    if (!(v > 1e-12)) v = 1.0;
  }

  std::uniform_real_distribution<double> init1(-1.0 / std::sqrt(static_cast<double>(d)),
                                               1.0 / std::sqrt(static_cast<double>(d)));
  std::uniform_real_distribution<double> init2(-1.0 / std::sqrt(static_cast<double>(h)),
                                               1.0 / std::sqrt(static_cast<double>(h)));
  m.w1.resize(h * d);
  for (double& w : m.w1) w = init1(rng);
  m.b1.assign(h, 0.0);
  m.w2.resize(h);
  for (double& w : m.w2) w = init2(rng);
  m.b2 = 0.0;

  auto loss_on = [&](const std::vector<std::size_t>& idx) {
    double sum = 0.0;
    for (std::size_t n : idx) sum += CrossEntropy(Run(m, samples[n]).logit, labels[n]);
    return sum / static_cast<double>(idx.size());
  };

  std::vector<double> params = m.Parameters();
  std::vector<double> velocity(params.size(), 0.0);
  std::vector<double> best = params;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  std::vector<std::size_t> epoch_order = train;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(epoch_order.begin(), epoch_order.end(), rng);
    for (std::size_t start = 0; start < epoch_order.size();
         start += static_cast<std::size_t>(options.batch_size)) {
      const std::size_t stop = std::min(epoch_order.size(),
                                        start + static_cast<std::size_t>(options.batch_size));
      std::vector<double> grad(params.size(), 0.0);
      for (std::size_t b = start; b < stop; ++b) {
        AccumulateGradient(m, samples[epoch_order[b]], labels[epoch_order[b]], grad);
      }
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (std::size_t p = 0; p < params.size(); ++p) {
        velocity[p] = options.momentum * velocity[p] - options.learning_rate * grad[p] * scale;
        params[p] += velocity[p];
      }
      m.SetParameters(params);
    }
    const double monitor = val.empty() ? loss_on(train) : loss_on(val);
    if (monitor < best_loss) {
      best_loss = monitor;
      best = params;
      since_best = 0;
    } else if (++since_best >= options.patience) {
      break;
    }
  }
  m.SetParameters(best);
  return m;
}

MlpPrediction Predict(const MlpModel& model, std::span<const double> x) {
  MlpPrediction p;
  p.score = MlpOutput(model, x);
  p.predicted = p.score > 0.5 ? VowelClass::kBack : VowelClass::kFront;
  return p;
}

std::string SerializeMlp(const MlpModel& model) {
  std::string out = "valley-mlp " + std::to_string(model.input_dim) + " " +
                    std::to_string(model.hidden_units) + " " +
                    std::to_string(model.seed) + "\n";
  char buf[40];
  auto line = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", v[i]);
      out += (i ? " " : "");
      out += buf;
    }
    out += "\n";
  };
  line(model.input_mean);
  line(model.input_scale);
  line(model.Parameters());
  return out;
}

MlpModel DeserializeMlp(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  MlpModel m;
  if (!(in >> magic >> m.input_dim >> m.hidden_units >> m.seed) || magic != "valley-mlp" ||
      m.input_dim < 1 || m.hidden_units < 1) {
    throw FormatError("header", "not a valley-mlp model");
  }
  const std::size_t d = static_cast<std::size_t>(m.input_dim);
  const std::size_t h = static_cast<std::size_t>(m.hidden_units);
  auto read = [&](std::size_t n, const char* field) {
    std::vector<double> v(n);
    for (double& x : v) {
      std::string tok;
      if (!(in >> tok)) throw FormatError(field, "truncated model file");
      try {
        x = std::stod(tok);
      } catch (const std::exception&) {
        throw FormatError(field, "bad number '" + tok + "'");
      }
    }
    return v;
  };
  m.input_mean = read(d, "input_mean");
  m.input_scale = read(d, "input_scale");
  m.SetParameters(read(h * d + 2 * h + 1, "parameters"));
  return m;
}

void SaveMlp(const std::filesystem::path& path, const MlpModel& model) {
  std::ofstream f(path);
  if (!f) throw FormatError("file", "cannot write " + path.string());
  f << SerializeMlp(model);
}

MlpModel LoadMlp(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("file", "cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return DeserializeMlp(ss.str());
}

}  // namespace valley
