// Copyright 2025 The bidpace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bidpace/math.hpp"
#include "bidpace/shading.hpp"

using namespace bidpace;

namespace {

const std::vector<double> kNoFeatures;

WinProbModel unit_model() { return WinProbModel(0.0, {}, 1.0); }

}  // namespace

TEST_CASE("sigmoid evaluation") {
  auto model = unit_model();
  auto at_one = model.eval(kNoFeatures, 1.0);
  CHECK(at_one.p == doctest::Approx(0.5));

  // With w0 = 0 and beta = 1 the model collapses to P = b / (1 + b).
  for (double b : {0.1, 0.5, 2.0, 7.0}) {
    auto e = model.eval(kNoFeatures, b);
    CHECK(e.p == doctest::Approx(b / (1.0 + b)).epsilon(1e-12));
    CHECK(e.dp == doctest::Approx(1.0 / ((1.0 + b) * (1.0 + b))).epsilon(1e-9));
  }

  CHECK_THROWS_AS(model.eval(kNoFeatures, 0.0), std::domain_error);
  CHECK_THROWS_AS(WinProbModel(0.0, {}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(WinProbModel(0.0, {}, -1.0), std::invalid_argument);
}

TEST_CASE("derivative matches finite differences") {
  WinProbModel model(0.4, {0.3, -0.2}, 1.7);
  std::vector<double> features{1.0, 2.0};
  for (double b : {0.2, 1.0, 3.0, 11.0}) {
    double h = 1e-6 * b;
    double forward = model.eval(features, b + h).p;
    double backward = model.eval(features, b - h).p;
    double numeric = (forward - backward) / (2.0 * h);
    CHECK(model.eval(features, b).dp ==
          doctest::Approx(numeric).epsilon(1e-6));
  }
}

TEST_CASE("welfare solver closed form") {
  // b + b(1+b) = 2 gives the positive root of b^2 + 2b - 2.
  double bid = solve_welfare_bid(unit_model(), kNoFeatures, 0.5);
  CHECK(bid == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-6));

  auto model = unit_model();
  auto e = model.eval(kNoFeatures, bid);
  CHECK(std::fabs(bid + e.p / e.dp - 2.0) < 1e-8);
}

TEST_CASE("welfare solver clamps at the bracket") {
  SolveOptions options;
  options.bracket_lo = 1.5;
  options.bracket_hi = 10.0;
  // Residual at b = 1.5 already exceeds 1/lambda = 2.
  double bid = solve_welfare_bid(unit_model(), kNoFeatures, 0.5, options);
  CHECK(bid == doctest::Approx(1.5));
}

TEST_CASE("utility solver closed form and shading bound") {
  double bid = solve_utility_bid(unit_model(), kNoFeatures, 3.0, 0.0);
  CHECK(bid == doctest::Approx(1.0).epsilon(1e-6));  // root of b^2 + 2b - 3

  Rng rng(79);
  for (int i = 0; i < 200; ++i) {
    double value = 0.5 + rng.uniform01() * 5.0;
    double lambda = rng.uniform01() * 3.0;
    double b = solve_utility_bid(unit_model(), kNoFeatures, value, lambda);
    CHECK(b <= value / (1.0 + lambda) + 1e-9);  // shading is real
  }

  // lambda -> infinity drives the bid to the bracket floor.
  SolveOptions options;
  options.bracket_lo = 1e-4;
  options.bracket_hi = 10.0;
  CHECK(solve_utility_bid(unit_model(), kNoFeatures, 3.0, 1e9, options) ==
        doctest::Approx(1e-4));
}

TEST_CASE("margin solver closed form and reductions") {
  double bid = solve_margin_bid(unit_model(), kNoFeatures, 0.5, 1.0);
  CHECK(bid == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-6));

  double welfare = solve_welfare_bid(unit_model(), kNoFeatures, 0.7);
  double margin_zero = solve_margin_bid(unit_model(), kNoFeatures, 0.7, 0.0);
  CHECK(margin_zero == doctest::Approx(welfare).epsilon(1e-9));

  SolveOptions options;
  options.bracket_lo = 1e-4;
  options.bracket_hi = 10.0;
  CHECK(solve_margin_bid(unit_model(), kNoFeatures, 0.5, 1e9, options) ==
        doctest::Approx(1e-4));
}

TEST_CASE("general solver recovers the dsic identity exactly") {
  auto model = unit_model();
  auto response = dsic_response(
      [model](double b) { return model.eval(kNoFeatures, b).p; },
      [model](double b) { return model.eval(kNoFeatures, b).dp; });
  double bid = solve_general_bid(response, 0.3, 2.0);
  CHECK(bid == 0.3 / 2.0);  // exact, not approximate

  // Below-range target returns the bracket floor.
  SolveOptions options;
  options.bracket_lo = 0.5;
  options.bracket_hi = 4.0;
  CHECK(solve_general_bid(response, 1e-6, 10.0, options) ==
        doctest::Approx(0.5));
}

TEST_CASE("general solver agrees with the welfare solver on fpa") {
  auto model = unit_model();
  auto response = fpa_response(model, {});
  double lambda = 0.5;
  double general = solve_general_bid(response, 1.0, lambda);
  double welfare = solve_welfare_bid(model, kNoFeatures, lambda);
  CHECK(std::fabs(general - welfare) <= 2e-8);
}

TEST_CASE("dual update under fpa") {
  auto schedule = StepSizeSchedule::constant(0.1);
  CHECK(fpa_lambda_step(1.0, schedule, 1, 10.0, 100.0, 0.1) ==
        doctest::Approx(1.0));  // H = B/T
  CHECK(fpa_lambda_step(1.0, schedule, 1, 10.0, 100.0, 0.3) > 1.0);

  // Fixed point at the welfare solution of the beta = 1 model.
  double bid = std::sqrt(3.0) - 1.0;
  auto model = unit_model();
  double expected_cost = model.eval(kNoFeatures, bid).p * bid;
  CHECK(expected_cost == doctest::Approx(0.3094).epsilon(1e-3));
  CHECK(fpa_lambda_step(0.5, schedule, 1, expected_cost * 100.0, 100.0,
                        expected_cost) == doctest::Approx(0.5));
}

TEST_CASE("mills ratio is non-decreasing for positive beta") {
  Rng rng(83);
  for (int trial = 0; trial < 100; ++trial) {
    WinProbModel model(rng.uniform01() * 4.0 - 2.0, {},
                       0.2 + rng.uniform01() * 3.0);
    double previous = -1e300;
    for (int i = 0; i < 1000; ++i) {
      double b = 1e-3 * std::pow(1e7, i / 999.0);  // geometric grid
      auto e = model.eval(kNoFeatures, b);
      double ratio = e.p / e.dp;
      CHECK(ratio >= previous - 1e-9 * std::max(1.0, std::fabs(ratio)));
      previous = ratio;
    }
  }
}

TEST_CASE("stationarity residual is strictly increasing on the bracket") {
  Rng rng(89);
  for (int trial = 0; trial < 50; ++trial) {
    WinProbModel model(rng.uniform01() * 2.0 - 1.0, {},
                       0.5 + rng.uniform01() * 2.0);
    double previous = -1e300;
    for (int i = 0; i <= 300; ++i) {
      double b = 1e-3 * std::pow(1e6, i / 300.0);
      auto e = model.eval(kNoFeatures, b);
      double residual = b + e.p / e.dp;
      CHECK(residual > previous);
      previous = residual;
    }
  }
}
