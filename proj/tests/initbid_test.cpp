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
#include <sstream>
#include <vector>

#include "bidpace/initbid.hpp"
#include "bidpace/math.hpp"

using namespace bidpace;

namespace {

// Monte Carlo expected cost per auction E[Z 1{b R > Z}] for the
// double-lognormal market.
double expected_cost_mc(const LognormalParams& params, double bid,
                        std::int64_t draws, std::uint64_t seed) {
  Rng rng(seed);
  double total = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    double clearing = rng.lognormal(params.ecpm_mu, params.ecpm_sigma);
    double rate = rng.lognormal(params.cvr_mu, params.cvr_sigma);
    if (bid * rate > clearing) total += clearing;
  }
  return total / static_cast<double>(draws);
}

}  // namespace

TEST_CASE("parametric bid at the median budget ratio") {
  LognormalParams params{-2.0, 0.7, -4.0, 0.4};
  double expected_clearing = std::exp(-2.0 + 0.5 * 0.7 * 0.7);
  double horizon = 1000.0;
  double budget = 0.5 * horizon * expected_clearing;  // RHS exactly 0.5
  double bid = init_bid_parametric(params, budget, horizon);
  CHECK(bid == doctest::Approx(std::exp(-2.0 + 4.0 + 0.49)).epsilon(1e-9));
}

TEST_CASE("parametric bid rejects infeasible budget ratios") {
  LognormalParams params{-2.0, 0.7, -4.0, 0.4};
  double expected_clearing = std::exp(-2.0 + 0.5 * 0.49);
  CHECK_THROWS_AS(
      init_bid_parametric(params, 1000.0 * expected_clearing, 1000.0),
      std::domain_error);
  CHECK_THROWS_AS(init_bid_parametric(params, 0.0, 1000.0),
                  std::domain_error);
}

TEST_CASE("parametric bid spends the per-auction target") {
  // Monte Carlo oracle across random parameter sets.
  Rng rng(97);
  for (int trial = 0; trial < 6; ++trial) {
    LognormalParams params;
    params.ecpm_mu = -3.0 + rng.uniform01() * 2.0;
    params.ecpm_sigma = 0.3 + rng.uniform01() * 0.7;
    params.cvr_mu = -5.0 + rng.uniform01() * 2.0;
    params.cvr_sigma = 0.2 + rng.uniform01() * 0.6;
    double rhs = 0.15 + rng.uniform01() * 0.7;
    double expected_clearing =
        std::exp(params.ecpm_mu + 0.5 * params.ecpm_sigma * params.ecpm_sigma);
    double horizon = 1.0;
    double budget = rhs * expected_clearing;

    double bid = init_bid_parametric(params, budget, horizon);
    double simulated = expected_cost_mc(params, bid, 400000, 1000 + trial);
    CHECK(simulated == doctest::Approx(budget).epsilon(0.03));
  }
}

TEST_CASE("cost cap capping") {
  CHECK(init_bid_costcap(5.0, 10.0, 1.0) == doctest::Approx(5.0));
  CHECK(init_bid_costcap(5.0, 2.0, 0.8) == doctest::Approx(2.5));
  CHECK(init_bid_costcap(5.0, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(init_bid_costcap(5.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(init_bid_costcap(5.0, 2.0, 1.5), std::invalid_argument);
}

TEST_CASE("auction replay on a single auction") {
  std::vector<AuctionRecord> log{{2.0, 0.5}};
  // The threshold bid is 4: below it nothing is won, above it spend is 2.
  double bid = auction_replay_bid(log, 2.0, 0.0, 100.0, 1e-9);
  CHECK(bid == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(replay_spend(log, bid) <= 2.0);
}

TEST_CASE("auction replay with zero budget stays below every threshold") {
  std::vector<AuctionRecord> log{{2.0, 0.5}, {1.0, 0.2}, {0.5, 0.1}};
  double bid = auction_replay_bid(log, 0.0, 0.0, 100.0, 1e-9);
  CHECK(replay_spend(log, bid) == doctest::Approx(0.0));
}

TEST_CASE("auction replay never overspends the budget") {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<AuctionRecord> log(1 + rng.below(40));
    double total = 0.0;
    for (auto& rec : log) {
      rec.competing_ecpm = rng.uniform01() * 2.0 + 0.01;
      rec.pctr = rng.uniform01() * 0.5 + 0.01;
      total += rec.competing_ecpm;
    }
    double budget = rng.uniform01() * total;
    double bid = auction_replay_bid(log, budget, 0.0, 1000.0, 1e-7);
    CHECK(replay_spend(log, bid) <= budget + 1e-9);
  }
}

TEST_CASE("replay spend is monotone in the bid") {
  Rng rng(103);
  std::vector<AuctionRecord> log(60);
  for (auto& rec : log) {
    rec.competing_ecpm = rng.uniform01() * 2.0 + 0.01;
    rec.pctr = rng.uniform01() * 0.5 + 0.01;
  }
  double previous = -1.0;
  for (double bid = 0.0; bid < 50.0; bid += 0.5) {
    double spend = replay_spend(log, bid);
    CHECK(spend >= previous);
    previous = spend;
  }
}

TEST_CASE("converged window on a constant sequence") {
  std::vector<double> bids{2.0, 2.0, 2.0, 2.0};
  auto window = converged_bid_window(bids, 1e-12, 2);
  REQUIRE(window.has_value());
  CHECK(window->begin == 0);
  CHECK(window->end == 3);
  CHECK(window->mean == doctest::Approx(2.0));
}

TEST_CASE("converged window finds the flat block") {
  std::vector<double> bids{1.0, 1.0, 1.0, 5.0, 5.0};
  auto window = converged_bid_window(bids, 0.01, 3);
  REQUIRE(window.has_value());
  CHECK(window->begin == 0);
  CHECK(window->end == 2);
  CHECK(window->mean == doctest::Approx(1.0));
}

TEST_CASE("steep ramp with a tight threshold has no window") {
  std::vector<double> bids{1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  // Brute force confirms no length-3 window has variance below 1e-3.
  for (std::size_t lo = 0; lo + 2 < bids.size(); ++lo) {
    for (std::size_t hi = lo + 2; hi < bids.size(); ++hi) {
      double mean = 0.0;
      for (std::size_t i = lo; i <= hi; ++i) mean += bids[i];
      mean /= static_cast<double>(hi - lo + 1);
      double var = 0.0;
      for (std::size_t i = lo; i <= hi; ++i) {
        var += (bids[i] - mean) * (bids[i] - mean);
      }
      var /= static_cast<double>(hi - lo + 1);
      CHECK(var > 1e-3);
    }
  }
  CHECK_FALSE(converged_bid_window(bids, 1e-3, 3).has_value());
  CHECK_THROWS_AS(converged_bid_window(bids, 1e-3, 7), std::invalid_argument);
  CHECK_THROWS_AS(converged_bid_window(bids, 1e-3, 1), std::invalid_argument);
}

TEST_CASE("window results are valid even when sub-optimal") {
  Rng rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> bids(10 + rng.below(40));
    for (auto& b : bids) b = rng.uniform01() * 4.0;
    double threshold = rng.uniform01() * 0.5;
    auto window = converged_bid_window(bids, threshold, 3);
    if (!window) continue;
    std::size_t len = window->end - window->begin + 1;
    CHECK(len >= 3);
    double mean = 0.0;
    for (std::size_t i = window->begin; i <= window->end; ++i) mean += bids[i];
    mean /= static_cast<double>(len);
    double var = 0.0;
    for (std::size_t i = window->begin; i <= window->end; ++i) {
      var += (bids[i] - mean) * (bids[i] - mean);
    }
    var /= static_cast<double>(len);
    CHECK(var <= threshold + 1e-9);
    CHECK(window->mean == doctest::Approx(mean).epsilon(1e-9));
  }
}

TEST_CASE("window selection is invariant to bid rescaling") {
  Rng rng(109);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> bids(12 + rng.below(20));
    for (auto& b : bids) b = 0.5 + rng.uniform01() * 3.0;
    double threshold = 0.05 + rng.uniform01() * 0.2;
    auto base = converged_bid_window(bids, threshold, 3);

    double scale = bids[0];
    std::vector<double> rescaled(bids.size());
    for (std::size_t i = 0; i < bids.size(); ++i) rescaled[i] = bids[i] / scale;
    auto scaled =
        converged_bid_window(rescaled, threshold / (scale * scale), 3);

    CHECK(base.has_value() == scaled.has_value());
    if (base && scaled) {
      CHECK(base->begin == scaled->begin);
      CHECK(base->end == scaled->end);
      CHECK(scaled->mean * scale == doctest::Approx(base->mean).epsilon(1e-9));
    }
  }
}

TEST_CASE("prefix-sum variance matches the two-pass computation") {
  Rng rng(113);
  std::vector<double> bids(200);
  for (auto& b : bids) b = rng.uniform01() * 10.0;
  auto window = converged_bid_window(bids, 12.0, 5);
  REQUIRE(window.has_value());
  double mean = 0.0;
  for (std::size_t i = window->begin; i <= window->end; ++i) mean += bids[i];
  mean /= static_cast<double>(window->end - window->begin + 1);
  CHECK(window->mean == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("auction log csv loader") {
  std::istringstream csv(
      "t,competing_ecpm,pctr\n"
      "0,2.5,0.1\n"
      "1,1.25,0.05\n");
  auto log = load_auction_log_csv(csv);
  REQUIRE(log.size() == 2);
  CHECK(log[0].competing_ecpm == doctest::Approx(2.5));
  CHECK(log[1].pctr == doctest::Approx(0.05));
}
