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

#ifndef BIDPACE_PORTFOLIO_HPP
#define BIDPACE_PORTFOLIO_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "bidpace/core.hpp"
#include "bidpace/mpc.hpp"
#include "bidpace/shading.hpp"

namespace bidpace {

/// One member of a shared-budget campaign group.
struct GroupCampaign {
  double forecast = 0.0;    // T_i, expected auction opportunities
  double min_share = 0.0;   // s_i, minimum budget fraction (0 disables)
  double cost_cap = 0.0;    // C_i, 0 disables the cap
  double bid_multiplier = 1.0;  // hook for heterogeneous-quality corrections
};

/// Shared dual state for a campaign group: one lambda for the joint budget,
/// per-campaign cost duals mu_i and min-share duals gamma_i. Construction
/// rejects sum(s_i) > 1.
class GroupState {
 public:
  GroupState(std::vector<GroupCampaign> campaigns, double lambda_init,
             StepSizeSchedule schedule);

  double lambda() const { return lambda_; }
  double gamma(std::size_t i) const { return gammas_.at(i); }
  double total_forecast() const { return total_forecast_; }
  std::size_t size() const { return campaigns_.size(); }
  const GroupCampaign& campaign(std::size_t i) const {
    return campaigns_.at(i);
  }

  /// Shared-lambda mini-batch update over group aggregates; the max-delivery
  /// rule with T = sum T_i.
  void md_batch_update(double group_requests, double group_spend,
                       double budget);

  /// Max-delivery bid per impression for campaign i: r / lambda (times the
  /// campaign's multiplier hook).
  double md_bid(std::size_t i, double pctr) const;

  /// Minimum-delivery step for one auction of campaign i: updates the shared
  /// lambda and that campaign's gamma_i, then returns the bid
  /// r / (lambda - gamma_i) with the denominator floored.
  double min_delivery_step(std::size_t i, const AuctionOpportunity& opp,
                           double budget, double eps_lambda,
                           double eps_gamma);

 private:
  std::vector<GroupCampaign> campaigns_;
  double lambda_;
  std::vector<double> gammas_;
  StepSizeSchedule schedule_;
  std::int64_t step_count_ = 0;
  double total_forecast_ = 0.0;
  double lambda_floor_ = 1e-6;
};

/// Inputs of the group cost-cap receding-horizon search for one campaign.
/// Curves must already be normalized to the horizon.
struct GroupMpcCampaign {
  const MonotoneCurve* bid_spend = nullptr;        // f_i
  const MonotoneCurve* bid_conversions = nullptr;  // g_i
  double forecast = 0.0;                           // T_i
  double cost_cap = 0.0;                           // C_i
  double conversions_so_far = 0.0;                 // NC_i
  double horizon_requests = 0.0;                   // NR_{tau,H,i}
  double remaining_requests = 0.0;                 // TR_{tau,i}
};

/// Largest grid bid with sum_i f_i(b) within the group horizon budget and
/// every campaign's projected cost per conversion within its remaining cap;
/// falls back to bid_lo.
double group_costcap_mpc(const std::vector<GroupMpcCampaign>& campaigns,
                         double budget_total, double budget_remaining,
                         double bid_lo, double bid_hi, double bid_step);

/// Delivery channel under the hybrid marketplace: onsite SPA or offsite FPA
/// with a markup and a win-probability model.
struct ChannelSpec {
  enum class Kind { kOnsiteSpa, kOffsiteFpa };
  int id = 1;
  Kind kind = Kind::kOnsiteSpa;
  double markup = 0.0;
  std::optional<WinProbModel> win_model;
  std::vector<double> features;

  void validate() const;
};

struct MultiChannelState {
  double lambda = 1.0;
  StepSizeSchedule schedule = StepSizeSchedule::constant(0.01);
  double lambda_floor = 1e-6;
  std::int64_t step_count = 0;
};

struct MultiChannelBid {
  double bid = 0.0;            // per impression
  double realized_cost = 0.0;  // SPA indicator cost or FPA expected cost
  bool won = false;            // meaningful for the SPA channel only
};

/// One per-auction step: bid from the current lambda (r/lambda onsite, the
/// margin stationarity root offsite), then a unified dual update
/// lambda <- lambda - eps (B/T - cost) using the channel's realized cost.
MultiChannelBid multichannel_step(MultiChannelState& state, double budget,
                                  double total_horizon,
                                  const AuctionOpportunity& opp,
                                  const ChannelSpec& channel);

}  // namespace bidpace

#endif  // BIDPACE_PORTFOLIO_HPP
