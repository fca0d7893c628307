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

"""Spectral-valley features for front/back vowel classification."""

from valley._core import (
    ValleyError,
    bark_spacing,
    bark_to_hz,
    cascade_spectrum,
    classify_segment,
    frame_features,
    hz_to_bark,
    lpc,
    measure_rlsv,
    measure_valley,
    mix_white_noise,
    ocd_sweep,
    pb_means,
    synthesize,
    two_formant_ocd,
    uniform_tube_formants,
)

__version__ = "0.1.0"

__all__ = [
    "ValleyError",
    "bark_spacing",
    "bark_to_hz",
    "cascade_spectrum",
    "classify_segment",
    "frame_features",
    "hz_to_bark",
    "lpc",
    "measure_rlsv",
    "measure_valley",
    "mix_white_noise",
    "ocd_sweep",
    "pb_means",
    "synthesize",
    "two_formant_ocd",
    "uniform_tube_formants",
]
