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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "valley/errors.hpp"
#include "valley/scales.hpp"

using namespace valley;

TEST_CASE("bark tracks the critical-band edge table") {
  // Upper edges of critical bands 1..24 (Zwicker 1961).
  const std::vector<double> edges = {100,  200,  300,  400,  510,  630,  770,  920,
                                     1080, 1270, 1480, 1720, 2000, 2320, 2700, 3150,
                                     3700, 4400, 5300, 6400, 7700, 9500, 12000, 15500};
  for (std::size_t k = 0; k < edges.size(); ++k) {
    CAPTURE(edges[k]);
    CHECK(std::abs(HzToBark(edges[k]).z - static_cast<double>(k + 1)) < 0.3);
  }
}

TEST_CASE("bark at reference points") {
  CHECK(HzToBark(0.0).z == doctest::Approx(0.0));
  // 13 atan(0.76) + 3.5 atan((1000/7500)^2), evaluated by hand.
  CHECK(HzToBark(1000.0).z == doctest::Approx(8.5108).epsilon(1e-4));
  CHECK(HzToBark(500.0).z < HzToBark(501.0).z);
}

TEST_CASE("reference spacings the formula reproduces") {
  CHECK(BarkSpacing(850, 1400) == doctest::Approx(3.2).epsilon(0.05 / 3.2));
  CHECK(BarkSpacing(950, 1400) == doctest::Approx(2.5).epsilon(0.05 / 2.5));
  CHECK(BarkSpacing(500, 1500) == doctest::Approx(6.5).epsilon(0.05 / 6.5));
  CHECK(BarkSpacing(800, 1200) == doctest::Approx(2.6).epsilon(0.05 / 2.6));
  CHECK(BarkSpacing(400, 700) == doctest::Approx(2.5).epsilon(0.05 / 2.5));
  CHECK(BarkSpacing(600, 1300) == doctest::Approx(4.65).epsilon(0.05 / 4.65));
}

TEST_CASE("inverse bark round trip") {
  for (double hz : {0.0, 20.0, 150.0, 1000.0, 3456.7, 8000.0, 15000.0}) {
    CAPTURE(hz);
    const Bark z = HzToBark(hz);
    CHECK(std::abs(HzToBark(BarkToHz(z)).z - z.z) < 1e-6);
    CHECK(BarkToHz(z) == doctest::Approx(hz).epsilon(1e-6).scale(1.0));
  }
  CHECK_THROWS_AS(BarkToHz(Bark{-1.0}), Error);
  CHECK_THROWS_AS(BarkToHz(Bark{30.0}, 8000.0), Error);
}

TEST_CASE("decibels of a magnitude") {
  CHECK(MagnitudeToDb(10.0).value == doctest::Approx(20.0));
  CHECK(MagnitudeToDb(1.0).value == doctest::Approx(0.0));
  CHECK_THROWS_AS(MagnitudeToDb(0.0), Error);
  CHECK_THROWS_AS(MagnitudeToDb(-1.0), Error);
}

TEST_CASE("bark of 1400 Hz inverts back to 1400 Hz") {
  const Bark z = HzToBark(1400.0);
  CHECK(z.z == doctest::Approx(10.74).epsilon(0.01 / 10.74));
  CHECK(BarkToHz(z) == doctest::Approx(1400.0).epsilon(1e-6));
}
