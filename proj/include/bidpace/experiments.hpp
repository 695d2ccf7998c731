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

#ifndef BIDPACE_EXPERIMENTS_HPP
#define BIDPACE_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bidpace/core.hpp"
#include "bidpace/simulator.hpp"

namespace bidpace {

struct SampleSummary {
  std::int64_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n-1 denominator

  static SampleSummary from(std::span<const double> values);
};

struct TResult {
  double t = 0.0;
  std::int64_t dof = 0;
};

/// Pooled two-sample t statistic with n_A + n_B - 2 degrees of freedom.
/// Throws std::domain_error when the pooled variance vanishes.
TResult pooled_t(const SampleSummary& a, const SampleSummary& b);

/// Two-sided decision: reject when |t| exceeds the critical value at alpha.
bool decide_reject(double t, std::int64_t dof, double alpha);

/// Bidding strategy of one experiment arm. Fixed-bid and mini-batch DOGD
/// max-delivery arms are supported.
struct ExperimentStrategy {
  sim::ControllerKind kind = sim::ControllerKind::kFixedBid;
  double bid_per_click = 1.0;
  double bid_multiplier = 1.0;
  double lambda_init = 1.0;
  StepSizeSchedule schedule = StepSizeSchedule::constant(0.01);
};

struct ArmSamples {
  std::vector<double> arm_a;  // one metric value per replica
  std::vector<double> arm_b;
};

/// Budget-split harness: every replica halves the budget into two identical
/// sub-campaigns and routes each auction request to exactly one arm at
/// random. Arms never compete. The metric is budget utilization.
ArmSamples budget_split_run(const CampaignConfig& config,
                            const sim::MarketSpec& market,
                            const PacingClock& clock,
                            const ExperimentStrategy& strategy_a,
                            const ExperimentStrategy& strategy_b, int replicas,
                            std::uint64_t seed);

/// Campaign-split harness: both arms bid in the same auctions and can
/// cannibalize each other; the settlement treats the sibling arm as one more
/// second-price competitor.
ArmSamples campaign_split_run(const CampaignConfig& config,
                              const sim::MarketSpec& market,
                              const PacingClock& clock,
                              const ExperimentStrategy& strategy_a,
                              const ExperimentStrategy& strategy_b,
                              int replicas, std::uint64_t seed);

/// `arm,replica,metric,value` rows.
void write_results_csv(std::ostream& out, const ArmSamples& samples,
                       const std::string& metric);

/// Reads the value column of one results CSV, optionally filtered by arm and
/// metric name (empty filters accept everything).
std::vector<double> load_results_csv(std::istream& in,
                                     const std::string& arm_filter = "",
                                     const std::string& metric_filter = "");

}  // namespace bidpace

#endif  // BIDPACE_EXPERIMENTS_HPP
