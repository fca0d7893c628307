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

// Command-line front end: one subcommand per experiment, CSV on stdout or
// --out.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "valley/baseline.hpp"
#include "valley/classify.hpp"
#include "valley/corpus.hpp"
#include "valley/errors.hpp"
#include "valley/experiments.hpp"
#include "valley/scales.hpp"

namespace {

using namespace valley;

constexpr const char* kVersion = "0.1.0";

std::string Fmt(double v, int digits = 4) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Common {
  std::string out;
  std::uint64_t seed = 1;
  bool no_timestamp = false;
};

void AddCommon(CLI::App* sub, Common& c) {
  sub->add_option("--out,-o", c.out, "Output CSV path (default: stdout)");
  sub->add_option("--seed", c.seed, "Seed for every random draw");
  sub->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp line");
}

std::string Header(const CLI::App* sub, const Common& c) {
  std::ostringstream os;
  os << "# valley " << sub->get_name() << " version " << kVersion << "\n";
  std::vector<std::string> params;
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "out" || name == "seed" || name == "no-timestamp" ||
        name == "version") {
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      for (std::size_t i = 0; i < r.size(); ++i) value += (i ? "," : "") + r[i];
    } else {
      value = opt->get_default_str();
    }
    params.push_back(name + "=" + value);
  }
  os << "# params:";
  for (const auto& p : params) os << " " << p;
  os << "\n# seed: " << c.seed << "\n";
  if (!c.no_timestamp) {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    os << "# timestamp: " << buf << "\n";
  }
  return os.str();
}

void Emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write " + c.out);
  f << text;
}

std::string SweepCsv(const std::vector<SweepPoint>& pts) {
  std::ostringstream os;
  os << "step,f_low,f_high,spacing_bark,v_db\n";
  for (const auto& p : pts) {
    os << p.step << "," << Fmt(p.f_low, 2) << "," << Fmt(p.f_high, 2) << ","
       << Fmt(p.spacing_bark) << "," << Fmt(p.v_db) << "\n";
  }
  return os.str();
}

std::string OcdSummary(const OcdResult& r) {
  std::ostringstream os;
  os << "# crossing_interpolated," << (r.crossing_interpolated ? "true" : "false") << "\n";
  os << "# critical_distance_band," << Fmt(kCriticalDistanceLowBark, 1) << ","
     << Fmt(kCriticalDistanceHighBark, 1) << "\n";
  os << "# ocd_bark," << Fmt(r.ocd_bark) << "\n";
  return os.str();
}

std::vector<PbEntry> LoadMeans(const std::string& path) {
  return path.empty() ? BundledPbMeans() : PbMeans(LoadPbTable(path));
}

SelectionConfig Selection(const std::string& scheme, const std::string& config) {
  if (!config.empty()) return LoadSelectionConfig(config);
  if (scheme == "dravidian") return DravidianSelection();
  return TimitSelection();
}

std::string ReportHeader() {
  return "feature,threshold,front_acc,back_acc,overall,front_n,back_n";
}

std::string ReportRow(const ClassificationReport& r) {
  std::ostringstream os;
  os << r.feature << "," << Fmt(r.threshold, 2) << "," << Fmt(r.front_acc, 2) << ","
     << Fmt(r.back_acc, 2) << "," << Fmt(r.overall, 2) << "," << r.front_n << ","
     << r.back_n;
  return os.str();
}

std::string SpeakerOf(const std::string& segment_id) {
  return segment_id.substr(0, segment_id.find_first_of("_:"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral valley measurements and front/back vowel classification"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", kVersion);

  Common common;
  std::function<void()> action;

  // sweep2
  auto* sweep2 = app.add_subcommand("sweep2", "RLSV against F1 for two formants");
  std::vector<double> f1_values{650, 700, 750, 800, 850, 900, 950};
  double f2 = 1400, b1 = 100, b2 = 200, fs2 = kTwoFormantRate;
  sweep2->add_option("--f1-values", f1_values, "F1 values in Hz")->delimiter(',');
  sweep2->add_option("--f2", f2, "Fixed F2 in Hz");
  sweep2->add_option("--b1", b1, "B1 in Hz");
  sweep2->add_option("--b2", b2, "B2 in Hz");
  sweep2->add_option("--fs", fs2, "Sample rate in Hz");
  AddCommon(sweep2, common);
  sweep2->callback([&] {
    action = [&] {
      Emit(common, Header(sweep2, common) + SweepCsv(TwoFormantCurve(f1_values, f2, b1, b2, fs2)));
    };
  });

  // ocd2
  auto* ocd2 = app.add_subcommand("ocd2", "Two-formant OCD, F1 swept up toward F2");
  double f1_start = 750, step2 = 25;
  ocd2->add_option("--f2", f2, "Fixed F2 in Hz");
  ocd2->add_option("--b1", b1, "B1 in Hz");
  ocd2->add_option("--b2", b2, "B2 in Hz");
  ocd2->add_option("--fs", fs2, "Sample rate in Hz");
  ocd2->add_option("--f1-start", f1_start, "Starting F1 in Hz");
  ocd2->add_option("--step", step2, "Step in Hz")->check(CLI::PositiveNumber);
  AddCommon(ocd2, common);
  ocd2->callback([&] {
    action = [&] {
      const auto r = TwoFormantOcd(f2, b1, b2, fs2, f1_start, step2);
      Emit(common, Header(ocd2, common) + SweepCsv(r.sweep) + OcdSummary(r));
    };
  });

  // ocd4
  auto* ocd4 = app.add_subcommand("ocd4", "OCD of an adjacent formant pair, symmetric sweep");
  std::vector<double> formants4{500, 1500, 2500, 3500};
  double bw4 = 100, fs4 = 8000, step4 = 25;
  std::string pair4 = "12";
  ocd4->add_option("--formants", formants4, "Formant frequencies in Hz")->delimiter(',');
  ocd4->add_option("--bw", bw4, "Bandwidth of every formant in Hz");
  ocd4->add_option("--fs", fs4, "Sample rate in Hz");
  ocd4->add_option("--step", step4, "Step in Hz")->check(CLI::PositiveNumber);
  ocd4->add_option("--pair", pair4, "Swept pair: 12, 23 or 34")
      ->check(CLI::IsMember({"12", "23", "34"}));
  AddCommon(ocd4, common);
  ocd4->callback([&] {
    action = [&] {
      SweepConfig cfg;
      for (double f : formants4) cfg.formants.push_back({f, bw4});
      cfg.lower_index = pair4[0] - '1';
      cfg.sample_rate = fs4;
      cfg.step_hz = step4;
      const auto r = OcdSweep(cfg);
      Emit(common, Header(ocd4, common) + SweepCsv(r.sweep) + OcdSummary(r));
    };
  });

  // levels
  auto* levels = app.add_subcommand("levels", "RLSV over a (B1, B2) grid");
  std::string level_case = "a";
  double fs_levels = 8000;
  levels->add_option("--case", level_case, "a: 400/700 Hz, b: 600/1300 Hz")
      ->check(CLI::IsMember({"a", "b"}));
  levels->add_option("--fs", fs_levels, "Sample rate in Hz");
  AddCommon(levels, common);
  levels->callback([&] {
    action = [&] {
      LevelExperimentConfig cfg;
      cfg.sample_rate = fs_levels;
      if (level_case == "b") {
        cfg.f1 = 600;
        cfg.f2 = 1300;
      }
      const auto b1s = DefaultB1Grid();
      const auto b2s = DefaultB2Grid();
      const auto cells = LevelInfluenceExperiment(cfg, b1s, b2s);
      std::ostringstream os;
      os << "b1,b2,l1_minus_l2,v_db,flagged\n";
      for (const auto& c : cells) {
        os << Fmt(c.b1, 0) << "," << Fmt(c.b2, 0) << "," << Fmt(c.l1_minus_l2) << ","
           << Fmt(c.v_db) << "," << (c.flagged ? 1 : 0) << "\n";
      }
      const auto s = SummarizeLevels(cells);
      os << "# cells," << s.cells << "\n# flagged," << s.flagged << "\n";
      os << "# v_db_range," << Fmt(s.v_min) << "," << Fmt(s.v_max) << "\n";
      os << "# l1_minus_l2_range," << Fmt(s.level_diff_min) << "," << Fmt(s.level_diff_max)
         << "\n";
      Emit(common, Header(levels, common) + os.str());
    };
  });

  // f0
  auto* f0 = app.add_subcommand("f0", "V12 of the LP envelope against F0");
  std::string f0_case = "both";
  int lp_order = 8;
  std::vector<double> f0_values = kTableF0Values;
  f0->add_option("--case", f0_case, "a, b or both")->check(CLI::IsMember({"a", "b", "both"}));
  f0->add_option("--lp-order", lp_order, "Linear prediction order")->check(CLI::PositiveNumber);
  f0->add_option("--f0-values", f0_values, "F0 values in Hz")->delimiter(',');
  AddCommon(f0, common);
  f0->callback([&] {
    action = [&] {
      std::ostringstream os;
      os << "case,f0,v12_ref,v12_f0,difference\n";
      for (const std::string c : {"a", "b"}) {
        if (f0_case != "both" && f0_case != c) continue;
        auto cfg = c == "a" ? F0CaseA() : F0CaseB();
        cfg.lp_order = lp_order;
        for (const auto& r : F0InfluenceExperiment(cfg, f0_values)) {
          os << c << "," << Fmt(r.f0, 0) << "," << Fmt(r.v12_ref) << "," << Fmt(r.v12_f0)
             << "," << Fmt(r.difference) << "\n";
        }
      }
      Emit(common, Header(f0, common) + os.str());
    };
  });

  // pb-ocd
  auto* pb = app.add_subcommand("pb-ocd", "Per-vowel OCD from mean formant data");
  std::string pb_path, gender = "both";
  pb->add_option("--pb", pb_path, "Formant table CSV (default: bundled means)");
  pb->add_option("--gender", gender, "male, female or both")
      ->check(CLI::IsMember({"male", "female", "both"}));
  AddCommon(pb, common);
  pb->callback([&] {
    action = [&] {
      const auto entries = LoadMeans(pb_path);
      const std::set<std::string> front = {"iy", "ih", "eh", "ae"};
      std::ostringstream os;
      os << "gender,vowel,valley,ocd_bark,published,difference,status\n";
      for (const Gender g : {Gender::kMale, Gender::kFemale}) {
        if (gender != "both" && gender != GenderName(g)) continue;
        std::vector<PbVowelMeans> means;
        for (const auto& e : entries) {
          if (e.gender == g) means.push_back({e.vowel, front.count(e.vowel) > 0, e.f1, e.f2, e.f3});
        }
        for (const auto& row : PbOcdTable(means, PbOcdDefaults(g == Gender::kFemale))) {
          const double ocd = row.result ? row.result->ocd_bark : std::nan("");
          os << GenderName(g) << "," << row.vowel << "," << row.valley << "," << Fmt(ocd)
             << "," << Fmt(row.published, 2) << "," << Fmt(ocd - row.published) << ","
             << (row.result ? "ok" : "no-crossing") << "\n";
        }
      }
      Emit(common, Header(pb, common) + os.str());
    };
  });

  // classify
  auto* classify = app.add_subcommand("classify", "Front/back classification of a corpus");
  std::string corpus_dir, labels_ext = ".phn", feature_name = "valley", scheme = "timit",
                          selection_cfg, report_path;
  std::optional<double> threshold;
  bool include_central = false;
  auto add_corpus_options = [&](CLI::App* sub) {
    sub->add_option("--corpus", corpus_dir, "Directory of .wav files and label sidecars")
        ->required();
    sub->add_option("--labels-ext", labels_ext, "Label file extension");
    sub->add_option("--scheme", scheme, "Default label scheme: timit or dravidian")
        ->check(CLI::IsMember({"timit", "dravidian"}));
    sub->add_option("--selection", selection_cfg, "Selection config file");
  };
  add_corpus_options(classify);
  classify->add_option("--feature", feature_name,
                       "valley, f3f2_3bark, f2f1_bark, v1_only or v2_only");
  classify->add_option("--threshold", threshold, "Decision threshold (feature default if unset)");
  classify->add_flag("--include-central", include_central, "Score central vowels as back");
  classify->add_option("--report", report_path, "Also write the report CSV here");
  AddCommon(classify, common);
  classify->callback([&] {
    action = [&] {
      const auto feature = ParseFeature(feature_name);
      if (!feature) throw CLI::ValidationError("--feature", "unknown feature " + feature_name);
      const double th = threshold.value_or(DefaultThreshold(*feature));
      const auto corpus = LoadCorpus(corpus_dir, labels_ext);
      const auto feats =
          ExtractCorpusFeatures(corpus, Selection(scheme, selection_cfg), FrameConfig{});
      const auto ev = Evaluate(feats, *feature, th, include_central);
      std::ostringstream os;
      os << "segment_id,label,class,mean_v1,mean_v2,mean_diff,predicted\n";
      for (const auto& row : ev.rows) {
        os << row.segment_id << "," << row.label << "," << VowelClassName(row.truth) << ",";
        if (row.decision) {
          os << Fmt(row.decision->mean_v1) << "," << Fmt(row.decision->mean_v2) << ","
             << Fmt(row.decision->mean_diff) << "," << VowelClassName(row.decision->predicted);
        } else {
          os << "nan,nan,nan,none";
        }
        os << "\n";
      }
      os << "# " << ReportHeader() << "\n# " << ReportRow(ev.report) << "\n";
      os << "# no_decision," << ev.no_decision << "\n# central_skipped," << ev.central_skipped
         << "\n";
      Emit(common, Header(classify, common) + os.str());
      if (!report_path.empty()) {
        Common rc = common;
        rc.out = report_path;
        Emit(rc, ReportHeader() + "\n" + ReportRow(ev.report) + "\n");
      }
    };
  });

  // noise-eval
  auto* noise = app.add_subcommand("noise-eval", "Valley accuracy under additive noise");
  std::vector<double> snrs{40, 35, 30, 25, 20};
  std::string noise_kind = "white", babble_path;
  add_corpus_options(noise);
  noise->add_option("--noise", noise_kind, "white, babble or both")
      ->check(CLI::IsMember({"white", "babble", "both"}));
  noise->add_option("--snr", snrs, "SNR values in dB")->delimiter(',');
  noise->add_option("--babble", babble_path,
                    "Babble source .wav (default: synthesized from the bundled means)");
  noise->add_option("--threshold", threshold, "Valley threshold in dB");
  AddCommon(noise, common);
  noise->callback([&] {
    action = [&] {
      const double th = threshold.value_or(kDefaultValleyThresholdDb);
      const auto corpus = LoadCorpus(corpus_dir, labels_ext);
      const auto selection = Selection(scheme, selection_cfg);
      std::optional<SignalBuffer> babble;
      if (noise_kind != "white") {
        if (!babble_path.empty()) {
          babble = LoadWav(babble_path);
        } else {
          const double rate = corpus.empty() ? 16000.0 : corpus.front().audio.sample_rate;
          babble = GenerateBabble(BundledPbMeans(), rate, 20.0, common.seed ^ 0xb0bb1eull);
        }
      }
      std::ostringstream os;
      os << "noise,snr_db," << ReportHeader() << "\n";
      for (const NoiseKind kind : {NoiseKind::kWhite, NoiseKind::kBabble}) {
        const std::string name = kind == NoiseKind::kWhite ? "white" : "babble";
        if (noise_kind != "both" && noise_kind != name) continue;
        for (double snr : snrs) {
          NoiseSpec spec;
          spec.kind = kind;
          spec.snr_db = snr;
          spec.seed = common.seed;
          const auto feats = ExtractCorpusFeatures(corpus, selection, FrameConfig{}, &spec,
                                                   babble ? &*babble : nullptr);
          const auto ev = Evaluate(feats, Feature::kValley, th);
          os << name << "," << Fmt(snr, 1) << "," << ReportRow(ev.report) << "\n";
        }
      }
      os << "# noise added per segment; SNR measured over each segment\n";
      Emit(common, Header(noise, common) + os.str());
    };
  });

  // baseline
  auto* baseline = app.add_subcommand("baseline", "MFCC and valley-feature networks");
  int hidden = 10, epochs = 300, test_every = 4;
  std::string model_out;
  add_corpus_options(baseline);
  baseline->add_option("--hidden", hidden, "Hidden units")->check(CLI::PositiveNumber);
  baseline->add_option("--epochs", epochs, "Maximum training epochs")->check(CLI::PositiveNumber);
  baseline->add_option("--test-every", test_every,
                       "Every n-th speaker (sorted) is held out for testing")
      ->check(CLI::Range(2, 1000));
  baseline->add_option("--model-out", model_out, "Write the MFCC model here");
  AddCommon(baseline, common);
  baseline->callback([&] {
    action = [&] {
      const auto corpus = LoadCorpus(corpus_dir, labels_ext);
      const auto selection = Selection(scheme, selection_cfg);
      std::vector<VowelSegment> segments;
      for (const auto& u : corpus) {
        for (auto& s : SelectVowelSegments(u.labels, u.audio, selection, u.id)) {
          if (s.fb_class != VowelClass::kCentral) segments.push_back(std::move(s));
        }
      }
      if (segments.empty()) throw Error(ErrorCode::kNoDecision, "no segments selected");
      MfccConfig mcfg;
      mcfg.sample_rate = segments.front().audio.sample_rate;
      std::vector<std::vector<double>> mfcc(segments.size());
      std::vector<std::optional<SegmentDecision>> valley(segments.size());
      ParallelFor(segments.size(), [&](std::size_t i) {
        mfcc[i] = SegmentMfcc(segments[i].audio, mcfg);
        try {
          valley[i] = DecideSegment(FramePipeline(segments[i].audio), kDefaultValleyThresholdDb);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoDecision) throw;
        }
      });
      std::set<std::string> speakers;
      for (const auto& s : segments) speakers.insert(SpeakerOf(s.utterance_id));
      std::map<std::string, bool> is_test;
      int k = 0;
      for (const auto& sp : speakers) is_test[sp] = (k++ % test_every) == test_every - 1;

      struct Split {
        std::vector<std::vector<double>> x_train, x_test;
        std::vector<int> y_train, y_test;
      };
      Split mf, v3;
      std::vector<VowelClass> rule_pred, rule_truth;
      for (std::size_t i = 0; i < segments.size(); ++i) {
        const int y = segments[i].fb_class == VowelClass::kBack ? 1 : 0;
        const bool test = is_test[SpeakerOf(segments[i].utterance_id)];
        (test ? mf.x_test : mf.x_train).push_back(mfcc[i]);
        (test ? mf.y_test : mf.y_train).push_back(y);
        if (valley[i]) {
          const auto& d = *valley[i];
          (test ? v3.x_test : v3.x_train).push_back({d.mean_v1, d.mean_v2, d.mean_diff});
          (test ? v3.y_test : v3.y_train).push_back(y);
          if (test) {
            rule_pred.push_back(d.predicted);
            rule_truth.push_back(segments[i].fb_class);
          }
        }
      }
      TrainOptions opts;
      opts.hidden_units = hidden;
      opts.epochs = epochs;
      opts.seed = common.seed;
      auto evaluate = [](const MlpModel& m, const Split& s, const std::string& name) {
        std::vector<VowelClass> pred, truth;
        for (std::size_t i = 0; i < s.x_test.size(); ++i) {
          pred.push_back(Predict(m, s.x_test[i]).predicted);
          truth.push_back(s.y_test[i] ? VowelClass::kBack : VowelClass::kFront);
        }
        return Score(pred, truth, name);
      };
      const auto mfcc_model = TrainMlp(mf.x_train, mf.y_train, opts);
      const auto v3_model = TrainMlp(v3.x_train, v3.y_train, opts);
      if (!model_out.empty()) SaveMlp(model_out, mfcc_model);
      std::ostringstream os;
      os << "model,front_acc,back_acc,overall,front_n,back_n\n";
      for (const auto& r : {evaluate(mfcc_model, mf, "mfcc12_mlp"),
                            evaluate(v3_model, v3, "valley3_mlp"),
                            Score(rule_pred, rule_truth, "valley_threshold")}) {
        os << r.feature << "," << Fmt(r.front_acc, 2) << "," << Fmt(r.back_acc, 2) << ","
           << Fmt(r.overall, 2) << "," << r.front_n << "," << r.back_n << "\n";
      }
      os << "# train_segments," << mf.x_train.size() << "\n# test_segments," << mf.x_test.size()
         << "\n";
      Emit(common, Header(baseline, common) + os.str());
    };
  });

  // hist
  auto* hist = app.add_subcommand("hist", "Normalized histograms of mean(V_I - V_II)");
  double bin_width = 1.0, lo = -30.0, hi = 40.0;
  add_corpus_options(hist);
  hist->add_option("--bin", bin_width, "Bin width in dB")->check(CLI::PositiveNumber);
  hist->add_option("--lo", lo, "Lower edge in dB");
  hist->add_option("--hi", hi, "Upper edge in dB");
  AddCommon(hist, common);
  hist->callback([&] {
    action = [&] {
      const auto corpus = LoadCorpus(corpus_dir, labels_ext);
      const auto feats =
          ExtractCorpusFeatures(corpus, Selection(scheme, selection_cfg), FrameConfig{});
      std::map<VowelClass, std::vector<double>> values;
      for (const auto& s : feats) {
        try {
          values[s.truth].push_back(DecideSegment(s.frames).mean_diff);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoDecision) throw;
        }
      }
      std::ostringstream os;
      os << "class,bin_center,frequency\n";
      std::map<VowelClass, Histogram> hs;
      for (const auto& [cls, v] : values) {
        hs[cls] = NormalizedHistogram(v, bin_width, lo, hi);
        for (const auto& b : hs[cls].bins) {
          os << VowelClassName(cls) << "," << Fmt(b.center, 2) << "," << Fmt(b.frequency, 6)
             << "\n";
        }
      }
      for (const auto& [cls, h] : hs) {
        os << "# out_of_range," << VowelClassName(cls) << "," << h.below << "," << h.above
           << "\n";
      }
      if (hs.count(VowelClass::kFront) && hs.count(VowelClass::kBack)) {
        const auto x = HistogramCrossover(hs[VowelClass::kFront], hs[VowelClass::kBack]);
        os << "# crossover_db," << (x ? Fmt(*x, 2) : std::string("none")) << "\n";
      }
      Emit(common, Header(hist, common) + os.str());
    };
  });

  // make-corpus
  auto* make = app.add_subcommand("make-corpus", "Write the synthetic vowel corpus");
  std::string corpus_out, babble_out, pb_table;
  SyntheticCorpusConfig scfg;
  make->add_option("--dir", corpus_out, "Output directory")->required();
  make->add_option("--pb", pb_table, "Formant table CSV (default: bundled means)");
  make->add_option("--speakers", scfg.speakers_per_gender, "Speakers per gender")
      ->check(CLI::PositiveNumber);
  make->add_option("--utterances", scfg.utterances_per_speaker, "Utterances per speaker")
      ->check(CLI::PositiveNumber);
  make->add_option("--fs", scfg.sample_rate, "Sample rate in Hz");
  make->add_option("--babble-out", babble_out, "Also write a 20 s babble source here");
  AddCommon(make, common);
  make->callback([&] {
    action = [&] {
      scfg.seed = common.seed;
      const auto means = LoadMeans(pb_table);
      const auto utts = GenerateSyntheticCorpus(means, scfg);
      WriteCorpus(corpus_out, utts);
      if (!babble_out.empty()) {
        SaveWav(babble_out, GenerateBabble(means, scfg.sample_rate, 20.0, common.seed ^ 0xb0bb1eull));
      }
      std::size_t labels = 0;
      for (const auto& u : utts) labels += u.labels.size();
      std::ostringstream os;
      os << "utterances,labels\n" << utts.size() << "," << labels << "\n";
      Emit(common, Header(make, common) + os.str());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
