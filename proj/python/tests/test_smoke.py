# Copyright 2026 The Valley Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import valley

IY = [(270, 60), (2290, 120), (3010, 160), (3800, 250)]
UW = [(300, 70), (870, 90), (2240, 150), (3500, 250)]


def test_bark_round_trip():
    z = valley.hz_to_bark(1000.0)
    assert z == pytest.approx(8.5108, abs=1e-3)
    assert valley.bark_to_hz(z) == pytest.approx(1000.0, rel=1e-6)
    assert valley.bark_spacing(850, 1400) == pytest.approx(3.2, abs=0.05)


def test_tube_ocd():
    r = valley.ocd_sweep(valley.uniform_tube_formants())
    assert 3.1 <= r["ocd_bark"] <= 4.3
    assert len(r["sweep"]) > 1


def test_two_formant_ocd():
    assert valley.two_formant_ocd()["ocd_bark"] == pytest.approx(3.2, abs=0.2)


def test_spectrum_shape_and_valley():
    freqs, levels, mean = valley.cascade_spectrum(valley.uniform_tube_formants(), 8000.0, 2048)
    assert len(freqs) == len(levels) == 2048
    assert freqs[-1] == pytest.approx(4000.0)
    v = valley.measure_valley(levels, 8000.0, 500.0, 1500.0)
    assert 500.0 < v["valley_freq"] < 1500.0
    assert v["mean_level_db"] == pytest.approx(mean)


def test_classify_front_and_back():
    back = valley.classify_segment(valley.synthesize(UW), 16000.0)
    front = valley.classify_segment(valley.synthesize(IY), 16000.0)
    assert back["predicted"] == "back"
    assert front["predicted"] == "front"
    assert back["frames_used"] > 0


def test_lpc_accepts_numpy():
    x = np.asarray(valley.synthesize(UW))[:320] * np.hamming(320)
    coeffs, gain = valley.lpc(x, 18, 16000.0)
    assert len(coeffs) == 18
    assert gain > 0.0


def test_noise_snr():
    x = np.asarray(valley.synthesize(UW))
    y = np.asarray(valley.mix_white_noise(x, 16000.0, 20.0, seed=3))
    snr = 10 * math.log10(np.mean(x**2) / np.mean((y - x) ** 2))
    assert snr == pytest.approx(20.0, abs=0.1)


def test_errors_map_to_valley_error():
    with pytest.raises(valley.ValleyError):
        valley.hz_to_bark(-1.0)
    with pytest.raises(valley.ValleyError):
        valley.lpc([0.0] * 40, 8, 8000.0)


def test_bundled_means():
    rows = valley.pb_means()
    assert len(rows) == 18
    assert {r["gender"] for r in rows} == {"male", "female"}
