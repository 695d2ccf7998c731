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

#include <algorithm>
#include <cmath>
#include <vector>

#include "bidpace/dogd.hpp"
#include "bidpace/math.hpp"
#include "bidpace/simulator.hpp"

using namespace bidpace;

namespace {

AuctionOpportunity make_opp(double pctr, double ecpm) {
  AuctionOpportunity opp;
  opp.pctr = pctr;
  opp.competing_ecpm = ecpm;
  return opp;
}

DualState make_state(double lambda, double eps) {
  DualState state;
  state.lambda = lambda;
  state.schedule = StepSizeSchedule::constant(eps);
  return state;
}

// Brute-force 0/1 knapsack by subset enumeration with incremental sums.
struct Knapsack {
  double best_value = 0.0;
};

Knapsack knapsack_oracle(const std::vector<double>& values,
                         const std::vector<double>& weights, double budget) {
  std::size_t n = values.size();
  std::size_t count = std::size_t{1} << n;
  std::vector<double> weight(count, 0.0);
  std::vector<double> value(count, 0.0);
  Knapsack result;
  for (std::size_t mask = 1; mask < count; ++mask) {
    std::size_t low = mask & (~mask + 1);
    std::size_t bit = 0;
    while ((std::size_t{1} << bit) != low) ++bit;
    weight[mask] = weight[mask ^ low] + weights[bit];
    value[mask] = value[mask ^ low] + values[bit];
    if (weight[mask] <= budget) {
      result.best_value = std::max(result.best_value, value[mask]);
    }
  }
  return result;
}

// Dual-threshold allocation: admit by conversion-per-cost density until the
// budget runs out.
double dual_threshold_value(const std::vector<double>& values,
                            const std::vector<double>& weights,
                            double budget) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] * weights[b] > values[b] * weights[a];
  });
  double spend = 0.0;
  double total = 0.0;
  for (std::size_t i : order) {
    if (spend + weights[i] > budget) break;
    spend += weights[i];
    total += values[i];
  }
  return total;
}

}  // namespace

TEST_CASE("per-auction max delivery steps") {
  // Win case: r = 0.05 > lambda * c = 0.02.
  auto state = make_state(1.0, 0.5);
  dogd_md_step(state, make_opp(0.05, 0.02), 0.1, 1.0);
  CHECK(state.lambda == doctest::Approx(0.96));

  // Losing case: gradient is the full target spend.
  auto lose = make_state(1.0, 0.5);
  dogd_md_step(lose, make_opp(0.01, 0.02), 0.1, 1.0);
  CHECK(lose.lambda == doctest::Approx(0.95));

  // Observed spend equal to the target: zero gradient.
  auto balanced = make_state(1.0, 0.5);
  dogd_md_step(balanced, make_opp(0.5, 0.1), 0.1, 1.0);
  CHECK(balanced.lambda == doctest::Approx(1.0));
}

TEST_CASE("mini-batch max delivery") {
  auto state = make_state(1.0, 0.01);
  double bid = dogd_md_batch(state, 100.0, 12.0, 100.0, 1000.0);
  CHECK(state.lambda == doctest::Approx(1.02));
  CHECK(bid == doctest::Approx(1.0 / 1.02));

  auto fixed = make_state(1.0, 0.01);
  dogd_md_batch(fixed, 100.0, 10.0, 100.0, 1000.0);  // S = R B / T
  CHECK(fixed.lambda == doctest::Approx(1.0));

  auto floored = make_state(1e-6, 10.0);
  dogd_md_batch(floored, 1000.0, 0.0, 100.0, 1000.0);  // would cross zero
  CHECK(floored.lambda == doctest::Approx(1e-6));
}

TEST_CASE("per-auction cost cap steps") {
  // No win: 0.1 - 0.15 - 0.075 + 0.1 = -0.025 <= 0.
  auto state = make_state(1.0, 0.1);
  state.mu = 0.5;
  dogd_costcap_step(state, make_opp(0.1, 0.15), 0.05, 1.0, 2.0);
  CHECK(state.lambda == doctest::Approx(1.0 - 0.1 * 0.05));
  CHECK(state.mu == doctest::Approx(0.5));

  // Win: grad_lambda = 0.05 - 0.15 = -0.1, grad_mu = 0.4 - 0.15 = 0.25.
  auto win = make_state(1.0, 0.1);
  win.mu = 0.5;
  dogd_costcap_step(win, make_opp(0.2, 0.15), 0.05, 1.0, 2.0);
  CHECK(win.lambda == doctest::Approx(1.0 + 0.1 * 0.1));
  CHECK(win.mu == doctest::Approx(0.5 - 0.1 * 0.25));

  // mu = 0 reduces the bid to the max-delivery formula.
  auto md = make_state(2.0, 0.0001);
  double bid = dogd_costcap_step(md, make_opp(0.1, 1e9), 0.05, 1.0, 2.0);
  CHECK(bid == doctest::Approx(0.1 / md.lambda));
}

TEST_CASE("mini-batch cost cap") {
  auto state = make_state(1.0, 0.1);
  state.mu = 0.3;
  dogd_costcap_batch(state, 0.0, 0.0, 0.0, 100.0, 1000.0, 2.0);
  CHECK(state.lambda == doctest::Approx(1.0));  // idle interval

  auto on_cap = make_state(1.0, 0.1);
  on_cap.mu = 0.3;
  dogd_costcap_batch(on_cap, 10.0, 6.0, 3.0, 100.0, 1000.0, 2.0);
  CHECK(on_cap.mu == doctest::Approx(0.3));  // C N = S exactly

  auto pricey = make_state(1.0, 0.1);
  pricey.mu = 0.3;
  dogd_costcap_batch(pricey, 10.0, 8.0, 3.0, 100.0, 1000.0, 2.0);
  CHECK(pricey.mu == doctest::Approx(0.3 + 0.1 * 2.0));  // cost too high
}

TEST_CASE("batch gradient equals the sum of per-auction gradients") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    double lambda = 0.5 + rng.uniform01();
    double budget = 100.0;
    double horizon = 1000.0;
    int batch = 1 + static_cast<int>(rng.below(1000));
    double spend = 0.0;
    double grad_sum = 0.0;
    for (int i = 0; i < batch; ++i) {
      double r = rng.uniform01() * 0.2;
      double c = rng.uniform01() * 0.1;
      bool win = r > lambda * c;
      grad_sum += budget / horizon - (win ? c : 0.0);
      spend += win ? c : 0.0;
    }
    double batch_grad = batch / horizon * budget - spend;
    CHECK(batch_grad == doctest::Approx(grad_sum).epsilon(1e-12));
  }
}

TEST_CASE("bid monotonicity in lambda and pctr") {
  DualState a = make_state(1.0, 0.0001);
  DualState b = make_state(2.0, 0.0001);
  auto opp = make_opp(0.1, 1e9);  // never wins, lambda hardly moves
  double bid_a = dogd_md_step(a, opp, 1e-9, 1.0);
  double bid_b = dogd_md_step(b, opp, 1e-9, 1.0);
  CHECK(bid_a > bid_b);  // strictly decreasing in lambda

  DualState c = make_state(1.0, 0.0001);
  DualState d = make_state(1.0, 0.0001);
  double low = dogd_md_step(c, make_opp(0.05, 1e9), 1e-9, 1.0);
  double high = dogd_md_step(d, make_opp(0.10, 1e9), 1e-9, 1.0);
  CHECK(high >= low);  // non-decreasing in pctr
}

TEST_CASE("converged dual matches the budget-depleting grid dual") {
  sim::MarketSpec market;
  market.seed = 71;
  PacingClock clock(60, 900, 86400);
  auto stream = sim::generate_stream(market, clock, 10000);

  double budget = 30.0;
  double lambda_star = sim::grid_search_lambda(stream, budget);

  DualState state;
  state.lambda = lambda_star * 1.6;  // deliberately off
  state.schedule = StepSizeSchedule::harmonic(20.0);
  double horizon = static_cast<double>(stream.size());
  for (int pass = 0; pass < 20; ++pass) {
    for (const auto& opp : stream) {
      dogd_md_step(state, opp, budget, horizon);
    }
  }
  CHECK(std::fabs(state.lambda - lambda_star) / lambda_star < 0.05);
}

TEST_CASE("dual threshold value nearly matches the knapsack optimum") {
  Rng rng(59);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 5 + static_cast<int>(rng.below(14));
    std::vector<double> values(n);
    std::vector<double> weights(n);
    double max_value = 0.0;
    for (int i = 0; i < n; ++i) {
      values[i] = rng.uniform01() * 0.2 + 1e-4;
      weights[i] = rng.uniform01() * 0.1 + 1e-4;
      max_value = std::max(max_value, values[i]);
    }
    double total_weight = 0.0;
    for (double w : weights) total_weight += w;
    double budget = total_weight * (0.2 + 0.6 * rng.uniform01());

    double greedy = dual_threshold_value(values, weights, budget);
    double optimum = knapsack_oracle(values, weights, budget).best_value;
    CHECK(greedy >= optimum - max_value - 1e-12);
    CHECK(greedy <= optimum + 1e-12);
  }
}
