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

#ifndef BIDPACE_SIMULATOR_HPP
#define BIDPACE_SIMULATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bidpace/core.hpp"
#include "bidpace/pid.hpp"

namespace bidpace::sim {

/// Synthetic marketplace: i.i.d. lognormal pCTR and competing eCPM streams
/// with a diurnal supply pattern. A fixed seed fixes the whole stream.
struct MarketSpec {
  double pctr_mu = -4.6;    // ln 0.01
  double pctr_sigma = 0.3;
  double ecpm_mu = -3.0;    // ln 0.05
  double ecpm_sigma = 0.5;
  std::vector<double> supply;  // NR per bucket; empty means uniform
  int ladder_depth = 1;        // >1 draws a descending GSP ladder
  std::uint64_t seed = 1;
};

/// Deterministic stream of `horizon` opportunities, bucket membership drawn
/// categorically from the supply pattern, ordered by timestamp.
std::vector<AuctionOpportunity> generate_stream(const MarketSpec& market,
                                                const PacingClock& clock,
                                                std::int64_t horizon);

enum class ControllerKind {
  kFixedBid,
  kThrottle,
  kPidMd,
  kDogdMd,        // per-auction
  kDogdMdBatch,   // per-interval
  kDogdCostCap,   // per-auction
  kDogdCostCapBatch,
  kDualPid,
  kCostMinPid,    // PID max delivery capped by the Cost-Min bound
  kMpcCostCap,
  kMpcTargetCpa,
  kEvenMpc,
  kGd,
};

struct ControllerSettings {
  ControllerKind kind = ControllerKind::kDogdMdBatch;
  double lambda_init = 1.0;
  double fixed_bid_per_click = 1.0;
  double bid_multiplier = 1.0;  // experiment aggressiveness hook
  StepSizeSchedule schedule = StepSizeSchedule::constant(0.01);
  bool normalize_gradients = false;
  PidGains gains{0.4, 0.02, 0.0, 0.5};
  PidGains mu_gains{0.2, 0.01, 0.0, 0.5};
  double throttle_adjust = 0.10;
  double cost_min_sigma = 1.0;
  // MPC: stability band around the running bid plus an exploration nudge
  // before the landscape has two distinct bids.
  double mpc_band = 0.10;
  int mpc_window = 16;
  int mpc_grid_points = 21;
  // Even pacing.
  int periods = 1;
  double sigma_cap = 1.0;
};

struct TraceRow {
  std::int64_t interval = 0;
  double requests = 0.0;
  double spend = 0.0;
  double target_spend = 0.0;
  double bid_per_click = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double impressions = 0.0;
  double conversions = 0.0;
};

struct RunReport {
  std::vector<TraceRow> trace;
  double total_spend = 0.0;
  double total_conversions = 0.0;
  double total_impressions = 0.0;
  double total_requests = 0.0;
  double utilization = 0.0;
  double realized_cpc = 0.0;  // spend over predicted conversions
  double final_lambda = 0.0;
  double final_mu = 0.0;
  double max_single_cost = 0.0;
  bool budget_exhausted = false;
  double max_period_spend = 0.0;  // even pacing diagnostics
};

/// Runs one campaign against a pre-generated stream. Budget exhaustion is
/// checked before settling each auction, so spend can overshoot by at most
/// one auction's cost.
RunReport run_campaign(const CampaignConfig& config,
                       const ControllerSettings& settings,
                       const MarketSpec& market, const PacingClock& clock,
                       const std::vector<AuctionOpportunity>& stream);

/// Convenience overload that generates the stream from the market spec.
RunReport run_campaign(const CampaignConfig& config,
                       const ControllerSettings& settings,
                       const MarketSpec& market, const PacingClock& clock);

/// Fixed header `interval,requests,spend,target_spend,bid_per_click,lambda,
/// mu,impressions,conversions`; byte-stable for a fixed run.
void write_trace_csv(std::ostream& out, const RunReport& report);

/// Replayed full-stream spend of the constant-dual policy bid = r / lambda
/// (no budget stop); drives the offline grid search for the depleting dual.
double replay_lambda_spend(const std::vector<AuctionOpportunity>& stream,
                           double lambda);

/// Dual found by bisection so the replayed spend meets the budget on the
/// frozen stream.
double grid_search_lambda(const std::vector<AuctionOpportunity>& stream,
                          double budget);

struct ConstantBidOutcome {
  double spend = 0.0;
  double conversions = 0.0;
  double impressions = 0.0;
};

/// Replays one constant bid per click with the budget stop applied, mirroring
/// the simulator's settlement order.
ConstantBidOutcome replay_constant_bid(
    const std::vector<AuctionOpportunity>& stream, double bid_per_click,
    double budget);

}  // namespace bidpace::sim

#endif  // BIDPACE_SIMULATOR_HPP
