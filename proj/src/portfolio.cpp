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

#include "bidpace/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bidpace {

GroupState::GroupState(std::vector<GroupCampaign> campaigns,
                       double lambda_init, StepSizeSchedule schedule)
    : campaigns_(std::move(campaigns)),
      lambda_(lambda_init),
      schedule_(schedule) {
  if (campaigns_.empty()) {
    throw std::invalid_argument("group: at least one campaign required");
  }
  if (lambda_ < lambda_floor_) {
    throw std::invalid_argument("group: lambda_init below the floor");
  }
  double share_total = 0.0;
  for (const auto& c : campaigns_) {
    if (c.forecast <= 0.0) {
      throw std::invalid_argument("group: forecasts must be > 0");
    }
    if (c.min_share < 0.0) {
      throw std::invalid_argument("group: min shares must be >= 0");
    }
    share_total += c.min_share;
    total_forecast_ += c.forecast;
  }
  if (share_total > 1.0) {
    throw std::invalid_argument("group: minimum shares must sum to <= 1");
  }
  gammas_.assign(campaigns_.size(), 0.0);
}

void GroupState::md_batch_update(double group_requests, double group_spend,
                                 double budget) {
  if (group_requests < 0.0 || group_spend < 0.0) {
    throw std::invalid_argument("group: aggregates must be >= 0");
  }
  double grad = group_requests / total_forecast_ * budget - group_spend;
  double eps = schedule_value(schedule_, ++step_count_);
  lambda_ = std::max(lambda_floor_, lambda_ - eps * grad);
}

double GroupState::md_bid(std::size_t i, double pctr) const {
  return campaigns_.at(i).bid_multiplier * pctr / lambda_;
}

double GroupState::min_delivery_step(std::size_t i,
                                     const AuctionOpportunity& opp,
                                     double budget, double eps_lambda,
                                     double eps_gamma) {
  const GroupCampaign& campaign = campaigns_.at(i);
  double r = opp.pctr;
  double c = opp.competing_ecpm;
  // Win test from the campaign's own dual threshold r/c > lambda - gamma_i;
  // the cost term enters only on wins.
  bool win = r > (lambda_ - gammas_[i]) * c;
  double spend = win ? c : 0.0;
  lambda_ = std::max(lambda_floor_,
                     lambda_ - eps_lambda * (budget / total_forecast_ - spend));
  gammas_[i] = std::max(
      0.0, gammas_[i] - eps_gamma * (spend - campaign.min_share * budget /
                                                 campaign.forecast));
  double denominator = std::max(lambda_floor_, lambda_ - gammas_[i]);
  return r / denominator;
}

double group_costcap_mpc(const std::vector<GroupMpcCampaign>& campaigns,
                         double budget_total, double budget_remaining,
                         double bid_lo, double bid_hi, double bid_step) {
  if (campaigns.empty()) {
    throw std::invalid_argument("group mpc: at least one campaign required");
  }
  if (!(bid_lo < bid_hi) || bid_step <= 0.0) {
    throw std::invalid_argument("group mpc: invalid bid grid");
  }
  double total_forecast = 0.0;
  double total_horizon_requests = 0.0;
  double total_remaining_requests = 0.0;
  for (const auto& c : campaigns) {
    if (c.bid_spend == nullptr || c.bid_conversions == nullptr) {
      throw std::invalid_argument("group mpc: curves must be fitted");
    }
    total_forecast += c.forecast;
    total_horizon_requests += c.horizon_requests;
    total_remaining_requests += c.remaining_requests;
  }
  if (total_remaining_requests <= 0.0) {
    throw std::invalid_argument("group mpc: no remaining requests");
  }
  double horizon_budget =
      total_horizon_requests / total_remaining_requests * budget_remaining;

  // Per-campaign remaining cost caps from the campaign's budget share.
  std::vector<double> horizon_caps(campaigns.size(),
                                   std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < campaigns.size(); ++i) {
    const auto& c = campaigns[i];
    if (c.cost_cap <= 0.0) continue;
    double budget_share = c.forecast / total_forecast;
    double remaining_goal =
        budget_share * budget_total / c.cost_cap - c.conversions_so_far;
    if (remaining_goal > 0.0) {
      horizon_caps[i] = budget_share * budget_remaining / remaining_goal;
    }
  }

  double best = bid_lo;
  for (double b = bid_lo; b <= bid_hi + 0.5 * bid_step; b += bid_step) {
    double bid = std::min(b, bid_hi);
    double spend_sum = 0.0;
    bool feasible = true;
    for (std::size_t i = 0; i < campaigns.size(); ++i) {
      double spend = campaigns[i].bid_spend->eval(bid);
      double conv = campaigns[i].bid_conversions->eval(bid);
      spend_sum += spend;
      if (std::isfinite(horizon_caps[i]) && spend > horizon_caps[i] * conv) {
        feasible = false;
        break;
      }
    }
    if (feasible && spend_sum <= horizon_budget) best = std::max(best, bid);
  }
  return best;
}

void ChannelSpec::validate() const {
  if (kind == Kind::kOnsiteSpa) {
    if (markup != 0.0) {
      throw std::invalid_argument("channel: onsite carries no markup");
    }
  } else {
    if (!win_model.has_value()) {
      throw std::invalid_argument("channel: FPA channels need a win model");
    }
    if (markup < 0.0) {
      throw std::invalid_argument("channel: markup must be >= 0");
    }
  }
}

MultiChannelBid multichannel_step(MultiChannelState& state, double budget,
                                  double total_horizon,
                                  const AuctionOpportunity& opp,
                                  const ChannelSpec& channel) {
  if (total_horizon <= 0.0) {
    throw std::invalid_argument("multichannel: horizon must be > 0");
  }
  MultiChannelBid result;
  if (channel.kind == ChannelSpec::Kind::kOnsiteSpa) {
    result.bid = opp.pctr / state.lambda;
    result.won = result.bid > opp.competing_ecpm;
    result.realized_cost = result.won ? opp.competing_ecpm : 0.0;
  } else if (opp.pctr > 0.0) {
    // Stationarity b + P/P' = r / (lambda (1+m)), folded into the margin
    // solver via an effective lambda / r.
    result.bid = solve_margin_bid(*channel.win_model, channel.features,
                                  state.lambda / opp.pctr, channel.markup);
    // Expected cost, not the censored binary outcome: P(b) * b * (1+m).
    double p = channel.win_model->eval(channel.features, result.bid).p;
    result.realized_cost = p * result.bid * (1.0 + channel.markup);
  }
  double eps = schedule_value(state.schedule, ++state.step_count);
  double grad = budget / total_horizon - result.realized_cost;
  state.lambda = std::max(state.lambda_floor, state.lambda - eps * grad);
  return result;
}

}  // namespace bidpace
