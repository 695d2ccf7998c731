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

#include "bidpace/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bidpace/auctions.hpp"
#include "bidpace/dogd.hpp"
#include "bidpace/math.hpp"

namespace bidpace {

SampleSummary SampleSummary::from(std::span<const double> values) {
  SampleSummary summary;
  summary.n = static_cast<std::int64_t>(values.size());
  if (summary.n == 0) return summary;
  double sum = 0.0;
  for (double v : values) sum += v;
  summary.mean = sum / static_cast<double>(summary.n);
  if (summary.n >= 2) {
    double ss = 0.0;
    for (double v : values) {
      double d = v - summary.mean;
      ss += d * d;
    }
    summary.sd = std::sqrt(ss / static_cast<double>(summary.n - 1));
  }
  return summary;
}

TResult pooled_t(const SampleSummary& a, const SampleSummary& b) {
  if (a.n + b.n <= 2) {
    throw std::domain_error("t-test: need n_A + n_B > 2");
  }
  double dof = static_cast<double>(a.n + b.n - 2);
  double pooled_var = (static_cast<double>(a.n - 1) * a.sd * a.sd +
                       static_cast<double>(b.n - 1) * b.sd * b.sd) /
                      dof;
  if (pooled_var <= 0.0) {
    throw std::domain_error("t-test: pooled variance is zero");
  }
  double denom = std::sqrt(pooled_var) *
                 std::sqrt(1.0 / static_cast<double>(a.n) +
                           1.0 / static_cast<double>(b.n));
  return {(a.mean - b.mean) / denom, a.n + b.n - 2};
}

bool decide_reject(double t, std::int64_t dof, double alpha) {
  if (dof < 1) throw std::domain_error("t-test: dof must be >= 1");
  double critical =
      student_t_two_sided_critical(static_cast<double>(dof), alpha);
  return std::fabs(t) > critical;
}

namespace {

/// One sub-campaign arm driven by a fixed bid or mini-batch DOGD.
class ArmRuntime {
 public:
  ArmRuntime(const ExperimentStrategy& strategy, double budget,
             double horizon)
      : strategy_(strategy), budget_(budget), horizon_(horizon) {
    dual_.lambda = strategy.lambda_init;
    dual_.schedule = strategy.schedule;
    bid_per_click_ = strategy.kind == sim::ControllerKind::kFixedBid
                         ? strategy.bid_per_click
                         : 1.0 / strategy.lambda_init;
  }

  bool exhausted() const { return spend_ >= budget_; }
  double spend() const { return spend_; }
  double utilization() const { return budget_ > 0.0 ? spend_ / budget_ : 0.0; }

  double bid_per_impression(double pctr) const {
    return bid_per_click_ * strategy_.bid_multiplier * pctr;
  }

  void on_request() { interval_requests_ += 1.0; }

  void on_win(double cost) {
    spend_ += cost;
    interval_spend_ += cost;
  }

  void end_interval() {
    if (strategy_.kind == sim::ControllerKind::kDogdMdBatch) {
      bid_per_click_ = dogd_md_batch(dual_, interval_requests_,
                                     interval_spend_, budget_, horizon_);
    }
    interval_requests_ = 0.0;
    interval_spend_ = 0.0;
  }

 private:
  ExperimentStrategy strategy_;
  double budget_;
  double horizon_;
  DualState dual_;
  double bid_per_click_ = 0.0;
  double spend_ = 0.0;
  double interval_requests_ = 0.0;
  double interval_spend_ = 0.0;
};

void check_strategy(const ExperimentStrategy& strategy) {
  if (strategy.kind != sim::ControllerKind::kFixedBid &&
      strategy.kind != sim::ControllerKind::kDogdMdBatch) {
    throw std::invalid_argument(
        "experiment: arms support fixed-bid and mini-batch DOGD strategies");
  }
}

}  // namespace

ArmSamples budget_split_run(const CampaignConfig& config,
                            const sim::MarketSpec& market,
                            const PacingClock& clock,
                            const ExperimentStrategy& strategy_a,
                            const ExperimentStrategy& strategy_b, int replicas,
                            std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("experiment: replicas must be >= 2");
  check_strategy(strategy_a);
  check_strategy(strategy_b);
  config.validate();

  ArmSamples samples;
  for (int rep = 0; rep < replicas; ++rep) {
    sim::MarketSpec replica_market = market;
    replica_market.seed = seed + static_cast<std::uint64_t>(rep) * 7919ULL;
    auto stream =
        sim::generate_stream(replica_market, clock, config.horizon);
    Rng router(replica_market.seed ^ 0x5bd1e995ULL);

    // Each sub-campaign receives half the budget and roughly half the
    // requests, so per-arm horizons halve as well.
    double half_budget = 0.5 * config.budget;
    double half_horizon = 0.5 * static_cast<double>(config.horizon);
    ArmRuntime arm_a(strategy_a, half_budget, half_horizon);
    ArmRuntime arm_b(strategy_b, half_budget, half_horizon);

    std::size_t cursor = 0;
    for (std::int64_t k = 0; k < clock.num_updates(); ++k) {
      double interval_end = static_cast<double>((k + 1) * clock.update_dt());
      while (cursor < stream.size() && stream[cursor].time < interval_end) {
        const AuctionOpportunity& opp = stream[cursor];
        ++cursor;
        ArmRuntime& arm = router.uniform01() < 0.5 ? arm_a : arm_b;
        arm.on_request();
        if (arm.exhausted()) continue;
        auto outcome =
            settle_spa(arm.bid_per_impression(opp.pctr), opp.competing_ecpm);
        if (outcome.won) arm.on_win(outcome.cost);
      }
      arm_a.end_interval();
      arm_b.end_interval();
    }
    samples.arm_a.push_back(arm_a.utilization());
    samples.arm_b.push_back(arm_b.utilization());
  }
  return samples;
}

ArmSamples campaign_split_run(const CampaignConfig& config,
                              const sim::MarketSpec& market,
                              const PacingClock& clock,
                              const ExperimentStrategy& strategy_a,
                              const ExperimentStrategy& strategy_b,
                              int replicas, std::uint64_t seed) {
  if (replicas < 1) throw std::invalid_argument("experiment: replicas must be >= 1");
  check_strategy(strategy_a);
  check_strategy(strategy_b);
  config.validate();

  ArmSamples samples;
  for (int rep = 0; rep < replicas; ++rep) {
    sim::MarketSpec replica_market = market;
    replica_market.seed = seed + static_cast<std::uint64_t>(rep) * 7919ULL;
    auto stream =
        sim::generate_stream(replica_market, clock, config.horizon);
    Rng coin(replica_market.seed ^ 0xc2b2ae35ULL);

    double half_budget = 0.5 * config.budget;
    double half_horizon = 0.5 * static_cast<double>(config.horizon);
    ArmRuntime arm_a(strategy_a, half_budget, half_horizon);
    ArmRuntime arm_b(strategy_b, half_budget, half_horizon);

    std::size_t cursor = 0;
    for (std::int64_t k = 0; k < clock.num_updates(); ++k) {
      double interval_end = static_cast<double>((k + 1) * clock.update_dt());
      while (cursor < stream.size() && stream[cursor].time < interval_end) {
        const AuctionOpportunity& opp = stream[cursor];
        ++cursor;
        arm_a.on_request();
        arm_b.on_request();
        double bid_a =
            arm_a.exhausted() ? 0.0 : arm_a.bid_per_impression(opp.pctr);
        double bid_b =
            arm_b.exhausted() ? 0.0 : arm_b.bid_per_impression(opp.pctr);
        // The sibling arm is one more bidder in the same second-price
        // auction: the higher arm wins, paying the larger of the market
        // price and the sibling's bid.
        bool a_first = bid_a > bid_b ||
                       (bid_a == bid_b && coin.uniform01() < 0.5);
        ArmRuntime& leader = a_first ? arm_a : arm_b;
        double leader_bid = a_first ? bid_a : bid_b;
        double trailer_bid = a_first ? bid_b : bid_a;
        auto outcome = settle_spa(
            leader_bid, std::max(opp.competing_ecpm, trailer_bid));
        if (outcome.won) leader.on_win(outcome.cost);
      }
      arm_a.end_interval();
      arm_b.end_interval();
    }
    samples.arm_a.push_back(arm_a.utilization());
    samples.arm_b.push_back(arm_b.utilization());
  }
  return samples;
}

void write_results_csv(std::ostream& out, const ArmSamples& samples,
                       const std::string& metric) {
  out << "arm,replica,metric,value\n";
  char buffer[256];
  for (std::size_t i = 0; i < samples.arm_a.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "A,%zu,%s,%.10g\n", i,
                  metric.c_str(), samples.arm_a[i]);
    out << buffer;
  }
  for (std::size_t i = 0; i < samples.arm_b.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "B,%zu,%s,%.10g\n", i,
                  metric.c_str(), samples.arm_b[i]);
    out << buffer;
  }
}

std::vector<double> load_results_csv(std::istream& in,
                                     const std::string& arm_filter,
                                     const std::string& metric_filter) {
  std::vector<double> values;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream row(line);
    std::string arm, replica, metric, value;
    if (!std::getline(row, arm, ',') || !std::getline(row, replica, ',') ||
        !std::getline(row, metric, ',') || !std::getline(row, value, ',')) {
      throw std::runtime_error("results: malformed row");
    }
    if (!arm_filter.empty() && arm != arm_filter) continue;
    if (!metric_filter.empty() && metric != metric_filter) continue;
    values.push_back(std::stod(value));
  }
  return values;
}

}  // namespace bidpace
