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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>
#include <vector>

#include "valley/classify.hpp"
#include "valley/corpus.hpp"
#include "valley/envelope.hpp"
#include "valley/errors.hpp"
#include "valley/experiments.hpp"
#include "valley/scales.hpp"
#include "valley/sigproc.hpp"
#include "valley/synth.hpp"

namespace py = pybind11;
using namespace valley;

namespace {

using FormantTuple = std::tuple<double, double>;

std::vector<FormantSpec> ToFormants(const std::vector<FormantTuple>& in) {
  std::vector<FormantSpec> out;
  out.reserve(in.size());
  for (const auto& [f, b] : in) out.push_back({f, b});
  return out;
}

std::vector<FormantTuple> FromFormants(const std::vector<FormantSpec>& in) {
  std::vector<FormantTuple> out;
  for (const auto& f : in) out.emplace_back(f.frequency, f.bandwidth);
  return out;
}

py::dict OcdToDict(const OcdResult& r) {
  py::list sweep;
  for (const auto& p : r.sweep) {
    sweep.append(py::make_tuple(p.f_low, p.f_high, p.spacing_bark, p.v_db));
  }
  py::dict d;
  d["ocd_bark"] = r.ocd_bark;
  d["sweep"] = sweep;
  return d;
}

py::dict ValleyToDict(const ValleyMeasurement& v) {
  py::dict d;
  d["v_db"] = v.v_db;
  d["valley_freq"] = v.valley_freq;
  d["valley_level_db"] = v.valley_level_db;
  d["mean_level_db"] = v.mean_level_db;
  d["lower_peak_freq"] = v.lower_peak_freq;
  d["upper_peak_freq"] = v.upper_peak_freq;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral-valley front/back vowel features.";

  py::register_exception<Error>(m, "ValleyError", PyExc_RuntimeError);

  m.def("hz_to_bark", [](double hz) { return HzToBark(hz).z; }, py::arg("hz"));
  m.def("bark_to_hz", [](double z) { return BarkToHz(Bark{z}); }, py::arg("z"));
  m.def("bark_spacing", &BarkSpacing, py::arg("lower_hz"), py::arg("upper_hz"));

  m.def("uniform_tube_formants",
        [](double bw) { return FromFormants(UniformTubeFormants(bw)); },
        py::arg("bandwidth") = 100.0);

  m.def(
      "cascade_spectrum",
      [](const std::vector<FormantTuple>& formants, double fs, int n_points) {
        const auto env = AnalyticCascadeSpectrum(ToFormants(formants), fs, n_points);
        return py::make_tuple(std::vector<double>(env.freqs().begin(), env.freqs().end()),
                              std::vector<double>(env.levels_db().begin(), env.levels_db().end()),
                              env.mean_level_db());
      },
      py::arg("formants"), py::arg("sample_rate") = 8000.0, py::arg("n_points") = 4096,
      "Analytic cascade spectrum: (freqs, levels_db, mean_level_db).");

  m.def(
      "measure_rlsv",
      [](const std::vector<FormantTuple>& formants, int lower_index, double fs) {
        return MeasurePairRlsv(ToFormants(formants), lower_index, fs);
      },
      py::arg("formants"), py::arg("lower_index") = 0, py::arg("sample_rate") = 8000.0);

  m.def(
      "ocd_sweep",
      [](const std::vector<FormantTuple>& formants, int lower_index, double step_hz,
         double fs, bool widen) {
        SweepConfig cfg;
        cfg.formants = ToFormants(formants);
        cfg.lower_index = lower_index;
        cfg.step_hz = step_hz;
        cfg.sample_rate = fs;
        cfg.widen_if_needed = widen;
        return OcdToDict(OcdSweep(cfg));
      },
      py::arg("formants"), py::arg("lower_index") = 0, py::arg("step_hz") = 25.0,
      py::arg("sample_rate") = 8000.0, py::arg("widen_if_needed") = false);

  m.def(
      "two_formant_ocd",
      [](double f2, double b1, double b2, double fs) {
        return OcdToDict(TwoFormantOcd(f2, b1, b2, fs));
      },
      py::arg("f2") = 1400.0, py::arg("b1") = 100.0, py::arg("b2") = 200.0,
      py::arg("sample_rate") = kTwoFormantRate);

  m.def(
      "synthesize",
      [](const std::vector<FormantTuple>& formants, double f0, double fs, double duration_s,
         double tilt) {
        const auto exc = f0 > 0.0 ? Excitation::TiltedTrain(f0, tilt, duration_s)
                                  : Excitation::UnitImpulse();
        const auto n = static_cast<std::size_t>(duration_s * fs);
        return Synthesize(ToFormants(formants), exc, fs, n).samples;
      },
      py::arg("formants"), py::arg("f0") = 120.0, py::arg("sample_rate") = 16000.0,
      py::arg("duration_s") = 0.2, py::arg("tilt_db_per_octave") = -6.0,
      "Vowel through the cascade; f0 <= 0 gives the impulse response.");

  m.def(
      "lpc",
      [](const std::vector<double>& frame, int order, double fs) {
        const auto model = LpcFromFrame(frame, order, fs);
        return py::make_tuple(model.coefficients, model.gain);
      },
      py::arg("frame"), py::arg("order"), py::arg("sample_rate"));

  m.def(
      "frame_features",
      [](const std::vector<double>& samples, double fs) {
        py::list out;
        for (const auto& f : FramePipeline(SignalBuffer{samples, fs})) {
          out.append(py::make_tuple(f.valid, f.v1_db, f.v2_db, FromFormants(f.formants)));
        }
        return out;
      },
      py::arg("samples"), py::arg("sample_rate"),
      "Per-frame (valid, v1_db, v2_db, formants).");

  m.def(
      "classify_segment",
      [](const std::vector<double>& samples, double fs, double threshold) {
        const auto d = DecideSegment(FramePipeline(SignalBuffer{samples, fs}), threshold);
        py::dict r;
        r["predicted"] = VowelClassName(d.predicted);
        r["mean_v1"] = d.mean_v1;
        r["mean_v2"] = d.mean_v2;
        r["mean_diff"] = d.mean_diff;
        r["frames_used"] = d.frames_used;
        r["frames_discarded"] = d.frames_discarded;
        return r;
      },
      py::arg("samples"), py::arg("sample_rate"),
      py::arg("threshold_db") = kDefaultValleyThresholdDb);

  m.def(
      "mix_white_noise",
      [](const std::vector<double>& samples, double fs, double snr_db, std::uint64_t seed) {
        return MixNoise(SignalBuffer{samples, fs},
                        NoiseSpec{NoiseKind::kWhite, snr_db, seed, std::nullopt})
            .samples;
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("snr_db"), py::arg("seed") = 1);

  m.def("pb_means", [] {
    py::list out;
    for (const auto& e : BundledPbMeans()) {
      py::dict d;
      d["vowel"] = e.vowel;
      d["gender"] = GenderName(e.gender);
      d["F0"] = e.f0;
      d["F1"] = e.f1;
      d["F2"] = e.f2;
      d["F3"] = e.f3;
      d["L1"] = e.l1;
      d["L2"] = e.l2;
      d["L3"] = e.l3;
      out.append(d);
    }
    return out;
  });

  m.def(
      "measure_valley",
      [](const std::vector<double>& levels_db, double fs, double lower_hz, double upper_hz) {
        const SpectralEnvelope env(levels_db, fs);
        return ValleyToDict(MeasureValley(env, lower_hz, upper_hz, ValleyLabel::kV12));
      },
      py::arg("levels_db"), py::arg("sample_rate"), py::arg("lower_hz"), py::arg("upper_hz"));
}
