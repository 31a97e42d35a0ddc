// Copyright 2026 The admarket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <functional>
#include <limits>

#include <catch2/catch_amalgamated.hpp>

#include "admarket/ctr_curve.hpp"

using namespace admarket;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.code();
  }
  FAIL("expected a ValidationError");
  return Errc::invalid_params;
}

}  // namespace

TEST_CASE("curve accepts strictly decreasing gammas and pads with zero") {
  const CtrCurve curve({1.0, 0.5});
  CHECK(curve.slots() == 2);
  CHECK(curve.gamma(1) == 1.0);
  CHECK(curve.gamma(2) == 0.5);
  CHECK(curve.gamma(3) == 0.0);
  CHECK(curve.gamma(0) == 0.0);

  const CtrCurve longer({1.0, 0.6, 0.3, 0.1});
  CHECK(longer.slots() == 4);
  CHECK(longer.gamma(5) == 0.0);
}

TEST_CASE("curve rejects malformed gammas") {
  CHECK(code_of([] { CtrCurve({0.5, 0.5}); }) == Errc::gammas_not_decreasing);
  CHECK(code_of([] { CtrCurve({0.5, 0.7}); }) == Errc::gammas_not_decreasing);
  CHECK(code_of([] { CtrCurve({}); }) == Errc::empty_gammas);
  CHECK(code_of([] { CtrCurve({1.2, 0.5}); }) == Errc::gamma_out_of_range);
  CHECK(code_of([] { CtrCurve({0.5, 0.0}); }) == Errc::gamma_out_of_range);
  CHECK(code_of([] { CtrCurve({0.5, -0.1}); }) == Errc::gamma_out_of_range);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([nan] { CtrCurve({nan}); }) == Errc::nonfinite_number);
}

TEST_CASE("gap telescopes back to gamma") {
  const CtrCurve curve({0.9, 0.4, 0.15});
  for (std::size_t j = 1; j <= 3; ++j) {
    double sum = 0.0;
    for (std::size_t i = j; i <= 3; ++i) sum += curve.gap(i);
    CHECK_THAT(sum, Catch::Matchers::WithinAbs(curve.gamma(j), 1e-15));
  }
  CHECK(curve.gap(3) == 0.15);
}

TEST_CASE("truncation keeps a prefix") {
  const CtrCurve curve({0.8, 0.4, 0.2});
  const CtrCurve head = curve.truncated(2);
  CHECK(head.slots() == 2);
  CHECK(head.gamma(1) == 0.8);
  CHECK(head.gamma(3) == 0.0);
  CHECK_THROWS_AS(curve.truncated(0), ValidationError);
  CHECK_THROWS_AS(curve.truncated(4), ValidationError);
}

TEST_CASE("validate_ctr_curve is the constructor") {
  const CtrCurve via_factory = validate_ctr_curve({1.0, 0.5});
  CHECK(via_factory == CtrCurve({1.0, 0.5}));
}
