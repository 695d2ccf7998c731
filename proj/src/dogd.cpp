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

#include "bidpace/dogd.hpp"

#include <algorithm>
#include <stdexcept>

namespace bidpace {

namespace {

double next_eps(DualState& state, double budget, double horizon) {
  double eps = schedule_value(state.schedule, ++state.step_count);
  if (state.normalize_gradients) {
    double per_auction = budget / horizon;
    if (per_auction > 0.0) eps /= per_auction;
  }
  return eps;
}

void check_campaign(double budget, double horizon) {
  if (budget < 0.0 || horizon <= 0.0) {
    throw std::invalid_argument("dogd: budget >= 0 and horizon > 0 required");
  }
}

}  // namespace

double dogd_md_step(DualState& state, const AuctionOpportunity& opp,
                    double budget, double horizon) {
  check_campaign(budget, horizon);
  bool win = opp.pctr > state.lambda * opp.competing_ecpm;
  double grad = budget / horizon - (win ? opp.competing_ecpm : 0.0);
  double eps = next_eps(state, budget, horizon);
  state.lambda = std::max(state.lambda_floor, state.lambda - eps * grad);
  return opp.pctr / state.lambda;
}

double dogd_md_batch(DualState& state, double requests, double spend,
                     double budget, double horizon) {
  check_campaign(budget, horizon);
  if (requests < 0.0) throw std::invalid_argument("dogd: requests must be >= 0");
  double grad = requests / horizon * budget - spend;
  double eps = next_eps(state, budget, horizon);
  state.lambda = std::max(state.lambda_floor, state.lambda - eps * grad);
  return 1.0 / state.lambda;
}

double dogd_costcap_step(DualState& state, const AuctionOpportunity& opp,
                         double budget, double horizon, double cap) {
  check_campaign(budget, horizon);
  if (cap <= 0.0) throw std::invalid_argument("dogd: cap must be > 0");
  double r = opp.pctr;
  double c = opp.competing_ecpm;
  bool win = r - state.lambda * c - state.mu * c + state.mu * cap * r > 0.0;
  double grad_lambda = budget / horizon - (win ? c : 0.0);
  double grad_mu = win ? (cap * r - c) : 0.0;
  double eps = next_eps(state, budget, horizon);
  state.lambda =
      std::max(state.lambda_floor, state.lambda - eps * grad_lambda);
  state.mu = std::max(0.0, state.mu - eps * grad_mu);
  return (1.0 + state.mu * cap) / (state.lambda + state.mu) * r;
}

double dogd_costcap_batch(DualState& state, double requests, double spend,
                          double conversions, double budget, double horizon,
                          double cap) {
  check_campaign(budget, horizon);
  if (cap <= 0.0) throw std::invalid_argument("dogd: cap must be > 0");
  double grad_lambda = requests / horizon * budget - spend;
  double grad_mu = cap * conversions - spend;
  double eps = next_eps(state, budget, horizon);
  state.lambda =
      std::max(state.lambda_floor, state.lambda - eps * grad_lambda);
  state.mu = std::max(0.0, state.mu - eps * grad_mu);
  return (1.0 + state.mu * cap) / (state.lambda + state.mu);
}

}  // namespace bidpace
