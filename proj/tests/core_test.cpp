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
#include <stdexcept>

#include "bidpace/core.hpp"
#include "bidpace/math.hpp"

using namespace bidpace;

TEST_CASE("step size schedules") {
  auto harmonic = StepSizeSchedule::harmonic(1.0);
  CHECK(schedule_value(harmonic, 1) == doctest::Approx(1.0));
  CHECK(schedule_value(harmonic, 4) == doctest::Approx(0.25));
  auto constant = StepSizeSchedule::constant(0.01);
  CHECK(schedule_value(constant, 999) == doctest::Approx(0.01));
  CHECK_THROWS_AS(schedule_value(constant, 0), std::invalid_argument);
  CHECK_THROWS_AS(StepSizeSchedule::harmonic(0.0), std::invalid_argument);
}

TEST_CASE("harmonic partial sums diverge while squares stay bounded") {
  auto harmonic = StepSizeSchedule::harmonic(1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t t = 1; t <= 1'000'000; ++t) {
    double eps = schedule_value(harmonic, t);
    sum += eps;
    sum_sq += eps * eps;
  }
  CHECK(sum > 10.0);  // grows past any fixed bound, ln(1e6) ~ 13.8
  CHECK(sum_sq < M_PI * M_PI / 6.0);
  CHECK(sum_sq > M_PI * M_PI / 6.0 - 1e-5);
}

TEST_CASE("ledger single increment and additivity") {
  SpendLedger ledger;
  ledger.record(2.0, 1.0, 1.0, 3.0);
  CHECK(ledger.spend() == doctest::Approx(2.0));
  CHECK(ledger.conversions() == doctest::Approx(1.0));
  CHECK(ledger.impressions() == doctest::Approx(1.0));
  CHECK(ledger.requests() == doctest::Approx(3.0));

  SpendLedger two;
  two.record(1.0, 0.0, 1.0, 1.0);
  two.record(1.0, 1.0, 0.0, 1.0);
  CHECK(two.spend() == doctest::Approx(2.0));
  CHECK(two.conversions() == doctest::Approx(1.0));
  CHECK(two.impressions() == doctest::Approx(1.0));
  CHECK(two.requests() == doctest::Approx(2.0));

  CHECK_THROWS_AS(two.record(-1.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("ledger interval sums equal cumulative totals exactly") {
  SpendLedger ledger;
  Rng rng(7);
  for (int interval = 0; interval < 57; ++interval) {
    int records = static_cast<int>(rng.below(6));
    for (int i = 0; i < records; ++i) {
      ledger.record(rng.uniform01() * 0.371, rng.uniform01(), 1.0, 1.0);
    }
    ledger.close_interval();
  }
  ledger.record(0.123, 0.5, 1.0, 1.0);  // open interval participates too
  double spend_sum = 0.0;
  double conv_sum = 0.0;
  for (const auto& interval : ledger.intervals()) {
    spend_sum += interval.spend;
    conv_sum += interval.conversions;
  }
  spend_sum += ledger.open_interval().spend;
  conv_sum += ledger.open_interval().conversions;
  CHECK(spend_sum == ledger.spend());  // exact, not approximate
  CHECK(conv_sum == ledger.conversions());
}

TEST_CASE("campaign config invariants") {
  CampaignConfig config;
  config.budget = 10.0;
  config.horizon = 100;
  CHECK_NOTHROW(config.validate());

  config.objective = CostCap{0.0};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.objective = CostCap{2.0};
  CHECK_NOTHROW(config.validate());

  config.objective = ReachFrequency{3.0, 2.0};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config.objective = GuaranteedDelivery{101.0};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.objective = GuaranteedDelivery{50.0};
  CHECK_NOTHROW(config.validate());

  config.budget = -1.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("auction opportunity invariants") {
  AuctionOpportunity opp;
  opp.pctr = 0.5;
  opp.competing_ecpm = 1.0;
  CHECK_NOTHROW(opp.validate());
  opp.ecpm_ladder = {3.0, 1.0, 2.0};
  CHECK_THROWS_AS(opp.validate(), std::invalid_argument);
  opp.ecpm_ladder = {3.0, 2.0, 1.0};
  CHECK_NOTHROW(opp.validate());
  opp.pctr = 1.5;
  CHECK_THROWS_AS(opp.validate(), std::invalid_argument);
}

TEST_CASE("pacing clock construction and bucket lookup") {
  PacingClock clock(60, 900, 86400);
  CHECK(clock.num_buckets() == 96);
  CHECK(clock.num_updates() == 1440);
  CHECK(clock.bucket_of_update(0) == 0);
  CHECK(clock.bucket_of_update(15) == 1);
  CHECK_THROWS_AS(clock.bucket_of_update(1440), std::out_of_range);
  CHECK_THROWS_AS(clock.bucket_of_update(-1), std::out_of_range);
  CHECK_THROWS_AS(PacingClock(900, 60, 86400), std::invalid_argument);
  CHECK_THROWS_AS(PacingClock(60, 700, 86400), std::invalid_argument);
}

TEST_CASE("harmonic sgd solves the constrained quadratic") {
  // max -x^2/2 + b x subject to a x <= c has the closed-form dual
  // lambda* = max(0, (a b - c) / a^2) and primal x* = b - lambda* a, which
  // serves as the oracle for the schedule-driven dual descent used
  // throughout.
  struct Instance {
    double a, b, c;
  };
  for (const Instance& inst : {Instance{1.0, 2.0, 1.0}, Instance{2.0, 1.0, 3.0},
                               Instance{-1.5, 0.5, 2.0}}) {
    double lambda_star =
        std::max(0.0, (inst.a * inst.b - inst.c) / (inst.a * inst.a));
    double x_star = inst.b - lambda_star * inst.a;

    auto schedule = StepSizeSchedule::harmonic(1.0);
    double lambda = 1.0;
    for (std::int64_t t = 1; t <= 20000; ++t) {
      // Dual gradient: d/dlambda [a^2 lambda^2 / 2 + (c - a b) lambda].
      double gradient = inst.a * inst.a * lambda + (inst.c - inst.a * inst.b);
      lambda = std::max(0.0, lambda - schedule_value(schedule, t) * gradient);
    }
    CHECK(lambda == doctest::Approx(lambda_star).epsilon(1e-3));
    CHECK(inst.b - lambda * inst.a == doctest::Approx(x_star).epsilon(1e-3));
  }
}

TEST_CASE("normal cdf and inverse agree") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5));
  CHECK(norm_ppf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  for (double p : {1e-9, 1e-4, 0.1, 0.3, 0.5, 0.7, 0.9, 0.9999, 1.0 - 1e-9}) {
    double x = norm_ppf(p);
    CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK_THROWS_AS(norm_ppf(0.0), std::domain_error);
}
