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

#include "valley/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "valley/scales.hpp"
#include "valley/sigproc.hpp"
#include "valley/synth.hpp"

namespace valley {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Keep widened formants this far from their neighbours and the band edges.
constexpr double kWidenMarginHz = 100.0;
constexpr int kMaxWidenSteps = 400;

ValleyLabel PairLabel(int lower_index) {
  return lower_index == 0 ? ValleyLabel::kV12 : ValleyLabel::kV23;
}

struct PairPosition {
  double f_low;
  double f_high;
};

}  // namespace

double MeasurePairRlsv(std::span<const FormantSpec> formants, int lower_index,
                       double sample_rate, int n_points, double window_hz,
                       MeanKind mean_kind) {
  if (lower_index < 0 ||
      static_cast<std::size_t>(lower_index) + 1 >= formants.size()) {
    ThrowInvalid("MeasurePairRlsv: pair index out of range");
  }
  const auto env =
      AnalyticCascadeSpectrum(formants, sample_rate, n_points, mean_kind);
  return MeasureValley(env, formants[lower_index].frequency,
                       formants[lower_index + 1].frequency,
                       PairLabel(lower_index), window_hz, lower_index + 1)
      .v_db;
}

OcdResult OcdSweep(const SweepConfig& cfg) {
  if (!(cfg.step_hz > 0.0)) ThrowInvalid("OcdSweep: step_hz must be > 0");
  if (cfg.lower_index < 0 ||
      static_cast<std::size_t>(cfg.lower_index) + 1 >= cfg.formants.size()) {
    ThrowInvalid("OcdSweep: swept pair out of range");
  }
  const std::size_t lo = static_cast<std::size_t>(cfg.lower_index);
  const double lo0 = cfg.formants[lo].frequency;
  const double hi0 = cfg.formants[lo + 1].frequency;
  if (!(lo0 < hi0)) ThrowInvalid("OcdSweep: swept pair must be ascending");
  const double below =
      lo == 0 ? 0.0 : cfg.formants[lo - 1].frequency;
  const double above = lo + 2 < cfg.formants.size()
                           ? cfg.formants[lo + 2].frequency
                           : 0.5 * cfg.sample_rate;
  const bool symmetric = cfg.mode == SweepMode::kSymmetric;

  auto position = [&](int s) {
    const double d = s * cfg.step_hz;
    return PairPosition{lo0 + d, symmetric ? hi0 - d : hi0};
  };
  auto measure = [&](int s, int index) {
    const PairPosition p = position(s);
    std::vector<FormantSpec> formants = cfg.formants;
    formants[lo].frequency = p.f_low;
    formants[lo + 1].frequency = p.f_high;
    SweepPoint pt;
    pt.step = index;
    pt.f_low = p.f_low;
    pt.f_high = p.f_high;
    pt.spacing_bark = BarkSpacing(p.f_low, p.f_high);
    pt.v_db = MeasurePairRlsv(formants, cfg.lower_index, cfg.sample_rate,
                              cfg.n_points, cfg.window_hz, cfg.mean_kind);
    return pt;
  };

  int start = 0;
  SweepPoint first = measure(0, 0);
  if (first.v_db <= 0.0 && cfg.widen_if_needed) {
    for (int s = -1; s >= -kMaxWidenSteps; --s) {
      const PairPosition p = position(s);
      if (p.f_low <= below + kWidenMarginHz ||
          p.f_high >= above - kWidenMarginHz) {
        break;
      }
      first = measure(s, 0);
      if (first.v_db > 0.0) {
        start = s;
        break;
      }
    }
  }
  if (first.v_db <= 0.0) {
    throw Error(ErrorCode::kPreconditionViolation,
                "OcdSweep: starting valley is not below the mean level "
                "(RLSV " + std::to_string(first.v_db) + " dB)");
  }

  OcdResult result;
  result.sweep.push_back(first);
  for (int s = start + 1;; ++s) {
    const PairPosition p = position(s);
    if (!(p.f_low + cfg.step_hz < p.f_high - cfg.step_hz)) {
      throw NoCrossingError("OcdSweep: formants collide before RLSV reaches 0",
                            result.sweep);
    }
    SweepPoint pt;
    try {
      pt = measure(s, s - start);
    } catch (const Error& e) {
      throw NoCrossingError(std::string("OcdSweep: ") + e.what(),
                            result.sweep);
    }
    result.sweep.push_back(pt);
    if (pt.v_db <= 0.0) break;
  }

  const SweepPoint& after = result.sweep.back();
  const SweepPoint& before = result.sweep[result.sweep.size() - 2];
  if (after.v_db == 0.0) {
    result.ocd_bark = after.spacing_bark;
    result.crossing_interpolated = false;
  } else {
    const double t = before.v_db / (before.v_db - after.v_db);
    result.ocd_bark =
        before.spacing_bark + t * (after.spacing_bark - before.spacing_bark);
    result.crossing_interpolated = true;
  }
  return result;
}

std::vector<SweepPoint> TwoFormantCurve(std::span<const double> f1_values,
                                        double f2, double b1, double b2,
                                        double sample_rate) {
  std::vector<SweepPoint> out;
  int step = 0;
  for (double f1 : f1_values) {
    if (!(f1 < f2)) ThrowInvalid("TwoFormantCurve: every F1 must be below F2");
    const std::vector<FormantSpec> formants{{f1, b1}, {f2, b2}};
    SweepPoint pt;
    pt.step = step++;
    pt.f_low = f1;
    pt.f_high = f2;
    pt.spacing_bark = BarkSpacing(f1, f2);
    pt.v_db = MeasurePairRlsv(formants, 0, sample_rate);
    out.push_back(pt);
  }
  return out;
}

OcdResult TwoFormantOcd(double f2, double b1, double b2, double sample_rate,
                        double f1_start, double step_hz) {
  SweepConfig cfg;
  cfg.formants = {{f1_start, b1}, {f2, b2}};
  cfg.lower_index = 0;
  cfg.step_hz = step_hz;
  cfg.sample_rate = sample_rate;
  cfg.mode = SweepMode::kLowerUp;
  cfg.widen_if_needed = true;
  return OcdSweep(cfg);
}

std::vector<FormantSpec> UniformTubeFormants(double bandwidth) {
  return {{500.0, bandwidth},
          {1500.0, bandwidth},
          {2500.0, bandwidth},
          {3500.0, bandwidth}};
}

std::vector<LevelCell> LevelInfluenceExperiment(
    const LevelExperimentConfig& cfg, std::span<const double> b1_values,
    std::span<const double> b2_values) {
  if (!(cfg.f1 < cfg.f2 && cfg.f2 < cfg.f3 && cfg.f3 < cfg.f4)) {
    ThrowInvalid("LevelInfluenceExperiment: formants must be ascending");
  }
  std::vector<LevelCell> cells;
  for (double b1 : b1_values) {
    for (double b2 : b2_values) {
      LevelCell cell;
      cell.b1 = b1;
      cell.b2 = b2;
      const std::vector<FormantSpec> formants{
          {cfg.f1, b1}, {cfg.f2, b2}, {cfg.f3, cfg.b34}, {cfg.f4, cfg.b34}};
      const auto env =
          AnalyticCascadeSpectrum(formants, cfg.sample_rate, cfg.n_points);
      try {
        const Peak p1 = LocateNearestPeak(env, cfg.f1, cfg.window_hz, 1);
        const Peak p2 = LocateNearestPeak(env, cfg.f2, cfg.window_hz, 2);
        if (p1.bin == p2.bin) {
          throw Error(ErrorCode::kValleyUndefined,
                      "F1 and F2 merged into one peak");
        }
        const auto v = Rlsv(env, p1.freq_hz, p2.freq_hz, ValleyLabel::kV12);
        cell.l1_minus_l2 = p1.level_db - p2.level_db;
        cell.v_db = v.v_db;
      } catch (const Error& e) {
        cell.flagged = true;
        cell.note = e.what();
        cell.l1_minus_l2 = kNaN;
        cell.v_db = kNaN;
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

LevelSummary SummarizeLevels(std::span<const LevelCell> cells) {
  LevelSummary s;
  s.v_min = s.level_diff_min = std::numeric_limits<double>::infinity();
  s.v_max = s.level_diff_max = -std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    if (c.flagged) {
      ++s.flagged;
      continue;
    }
    ++s.cells;
    s.v_min = std::min(s.v_min, c.v_db);
    s.v_max = std::max(s.v_max, c.v_db);
    s.level_diff_min = std::min(s.level_diff_min, c.l1_minus_l2);
    s.level_diff_max = std::max(s.level_diff_max, c.l1_minus_l2);
  }
  return s;
}

std::vector<double> DefaultB1Grid() {
  std::vector<double> v;
  for (int b = 100; b <= 250; b += 25) v.push_back(b);
  return v;
}

std::vector<double> DefaultB2Grid() {
  std::vector<double> v;
  for (int b = 50; b <= 400; b += 25) v.push_back(b);
  return v;
}

F0ExperimentConfig F0CaseA() {
  F0ExperimentConfig cfg;
  cfg.formants = {{400, 100}, {700, 100}, {2500, 100}, {3500, 100}};
  return cfg;
}

F0ExperimentConfig F0CaseB() {
  F0ExperimentConfig cfg;
  cfg.formants = {{600, 100}, {1300, 100}, {2500, 100}, {3500, 100}};
  return cfg;
}

std::vector<F0Row> F0InfluenceExperiment(const F0ExperimentConfig& cfg,
                                         std::span<const double> f0_values) {
  if (cfg.formants.size() < 2) ThrowInvalid("F0 experiment: need two formants");
  if (!(cfg.skip_s >= 0.0 && cfg.skip_s < cfg.duration_s)) {
    ThrowInvalid("F0 experiment: skip must lie inside the duration");
  }
  const double v_ref = MeasurePairRlsv(cfg.formants, 0, cfg.sample_rate,
                                       cfg.n_points, cfg.window_hz);
  const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.sample_rate));
  const auto skip = static_cast<std::size_t>(std::llround(cfg.skip_s * cfg.sample_rate));
  std::vector<F0Row> rows;
  for (double f0 : f0_values) {
    if (!(f0 > 0.0)) ThrowInvalid("F0 experiment: F0 must be positive");
    const auto y = Synthesize(cfg.formants, Excitation::ImpulseTrain(f0),
                              cfg.sample_rate, n);
    const std::span<const double> body(y.samples.data() + skip, n - skip);
    const auto windowed = ApplyWindow(body, WindowKind::kHamming);
    const auto model = LpcFromFrame(windowed, cfg.lp_order, cfg.sample_rate);
    const auto env = LpcEnvelope(model, cfg.n_points);
    const double v_f0 =
        MeasureValley(env, cfg.formants[0].frequency, cfg.formants[1].frequency,
                      ValleyLabel::kV12, cfg.window_hz, 1)
            .v_db;
    rows.push_back({f0, v_ref, v_f0, v_ref - v_f0});
  }
  return rows;
}

PbOcdConfig PbOcdDefaults(bool female) {
  PbOcdConfig cfg;
  cfg.female = female;
  cfg.sample_rate = female ? 10000.0 : 8000.0;
  cfg.f4 = female ? 4200.0 : 3500.0;
  return cfg;
}

namespace {

PbOcdRow RunRow(const std::string& vowel, std::vector<FormantSpec> formants,
                int lower_index, double sample_rate, const PbOcdConfig& cfg) {
  PbOcdRow row;
  row.vowel = vowel;
  row.valley = lower_index == 0 ? "V12" : "V23";
  row.published = PublishedOcd(vowel, row.valley, cfg.female);
  SweepConfig sweep;
  sweep.formants = std::move(formants);
  sweep.lower_index = lower_index;
  sweep.step_hz = cfg.step_hz;
  sweep.sample_rate = sample_rate;
  sweep.n_points = cfg.n_points;
  sweep.widen_if_needed = true;
  try {
    row.result = OcdSweep(sweep);
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<PbOcdRow> PbOcdTable(std::span<const PbVowelMeans> means,
                                 const PbOcdConfig& cfg) {
  std::vector<PbOcdRow> rows;
  for (const auto& m : means) {
    if (!(m.f1 < m.f2 && m.f2 < m.f3 && m.f3 < cfg.f4)) {
      ThrowInvalid("PbOcdTable: formants of /" + m.vowel + "/ not ascending");
    }
    const double b = cfg.bandwidth;
    std::vector<FormantSpec> formants{
        {m.f1, b}, {m.f2, b}, {m.f3, b}, {cfg.f4, b}};
    rows.push_back(RunRow(m.vowel, std::move(formants), m.front ? 1 : 0,
                          cfg.sample_rate, cfg));
  }
  // The tube rows always use the canonical 8 kHz configuration.
  for (int lower : {1, 0}) {
    rows.push_back(RunRow("tube", UniformTubeFormants(cfg.bandwidth), lower,
                          8000.0, cfg));
  }
  return rows;
}

double PublishedOcd(const std::string& vowel, const std::string& valley,
                    bool female) {
  struct Entry {
    double male;
    double female;
  };
  static const std::map<std::pair<std::string, std::string>, Entry> kTable = {
      {{"iy", "V23"}, {1.05, 1.08}}, {{"ih", "V23"}, {1.50, 1.32}},
      {{"eh", "V23"}, {1.66, 1.46}}, {{"ae", "V23"}, {1.79, 1.67}},
      {{"tube", "V23"}, {1.82, 1.82}}, {{"tube", "V12"}, {3.59, 3.59}},
      {{"aa", "V12"}, {3.95, 4.33}}, {{"ao", "V12"}, {4.57, 4.89}},
      {{"uh", "V12"}, {4.58, 4.86}}, {{"uw", "V12"}, {4.56, 4.93}},
      {{"ah", "V12"}, {4.01, 4.26}},
  };
  const auto it = kTable.find({vowel, valley});
  if (it == kTable.end()) return kNaN;
  return female ? it->second.female : it->second.male;
}

}  // namespace valley
