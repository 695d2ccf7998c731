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

#include "bidpace/brand.hpp"

#include <algorithm>
#include <stdexcept>

namespace bidpace {

RnfState::RnfState(double lambda_init, double freq_lower, double freq_upper)
    : lambda_(lambda_init), freq_lower_(freq_lower), freq_upper_(freq_upper) {
  if (lambda_init < lambda_floor_) {
    throw std::invalid_argument("rnf: lambda_init below the floor");
  }
  if (freq_lower < 0.0 || freq_lower > freq_upper) {
    throw std::invalid_argument("rnf: need 0 <= F_l <= F_u");
  }
}

void RnfState::set_user_forecast(UserId user, double forecast) {
  if (forecast <= 0.0) throw std::invalid_argument("rnf: forecast must be > 0");
  forecast_[user] = forecast;
}

double RnfState::mu(UserId user) const {
  auto it = mu_.find(user);
  return it == mu_.end() ? 0.0 : it->second;
}

double RnfState::gamma(UserId user) const {
  auto it = gamma_.find(user);
  return it == gamma_.end() ? 0.0 : it->second;
}

double RnfState::bid(UserId user) const {
  double numerator = std::max(0.0, 1.0 - mu(user) + gamma(user));
  return numerator / lambda_;
}

double RnfState::step(UserId user, double cost, int impression, double budget,
                      double total_forecast, double eps) {
  auto forecast_it = forecast_.find(user);
  if (forecast_it == forecast_.end()) {
    throw std::invalid_argument("rnf: unknown user forecast");
  }
  if (impression != 0 && impression != 1) {
    throw std::invalid_argument("rnf: impression must be 0 or 1");
  }
  double user_forecast = forecast_it->second;
  double x = static_cast<double>(impression);
  double spend = cost * x;  // cost counts only on wins
  lambda_ = std::max(lambda_floor_,
                     lambda_ - eps * (budget / total_forecast - spend));
  double& mu_ref = mu_[user];
  double& gamma_ref = gamma_[user];
  mu_ref = std::max(0.0, mu_ref - eps * (freq_upper_ / user_forecast - x));
  gamma_ref = std::max(0.0, gamma_ref - eps * (x - freq_lower_ / user_forecast));
  return bid(user);
}

void RnfState::batch_update(const std::vector<UserAggregate>& per_user,
                            double group_requests, double group_spend,
                            double budget, double total_forecast,
                            double eps_lambda, double eps_mu,
                            double eps_gamma) {
  if (group_requests < 0.0 || group_spend < 0.0) {
    throw std::invalid_argument("rnf: aggregates must be >= 0");
  }
  lambda_ = std::max(
      lambda_floor_,
      lambda_ - eps_lambda * (group_requests / total_forecast * budget -
                              group_spend));
  for (const auto& agg : per_user) {
    auto forecast_it = forecast_.find(agg.user);
    if (forecast_it == forecast_.end()) {
      throw std::invalid_argument("rnf: unknown user forecast");
    }
    double tm = forecast_it->second;
    double& mu_ref = mu_[agg.user];
    double& gamma_ref = gamma_[agg.user];
    mu_ref = std::max(
        0.0, mu_ref - eps_mu * (agg.requests / tm * freq_upper_ -
                                agg.impressions));
    gamma_ref = std::max(
        0.0, gamma_ref - eps_gamma * (agg.impressions -
                                      agg.requests / tm * freq_lower_));
  }
}

FixedFrequencyState::FixedFrequencyState(double lambda_init,
                                         double target_frequency)
    : lambda_(lambda_init), target_frequency_(target_frequency) {
  if (lambda_init < lambda_floor_) {
    throw std::invalid_argument("fixed freq: lambda_init below the floor");
  }
  if (target_frequency <= 0.0) {
    throw std::invalid_argument("fixed freq: target must be > 0");
  }
}

void FixedFrequencyState::set_user_forecast(UserId user, double forecast) {
  if (forecast <= 0.0) {
    throw std::invalid_argument("fixed freq: forecast must be > 0");
  }
  forecast_[user] = forecast;
}

double FixedFrequencyState::mu(UserId user) const {
  auto it = mu_.find(user);
  return it == mu_.end() ? 0.0 : it->second;
}

double FixedFrequencyState::bid(UserId user) const {
  return std::max(0.0, 1.0 - mu(user)) / lambda_;
}

double FixedFrequencyState::step(UserId user, double cost, int impression,
                                 double budget, double total_forecast,
                                 double eps) {
  auto forecast_it = forecast_.find(user);
  if (forecast_it == forecast_.end()) {
    throw std::invalid_argument("fixed freq: unknown user forecast");
  }
  double x = static_cast<double>(impression);
  double spend = cost * x;
  lambda_ = std::max(lambda_floor_,
                     lambda_ - eps * (budget / total_forecast - spend));
  double& mu_ref = mu_[user];
  mu_ref = std::max(
      0.0, mu_ref - eps * (target_frequency_ / forecast_it->second - x));
  return bid(user);
}

void gd_update(GdState& state, double opportunities, double wins, double eps) {
  if (state.goal > state.inventory || state.inventory <= 0.0) {
    throw std::invalid_argument("gd: goal must not exceed the inventory");
  }
  if (opportunities < 0.0 || wins < 0.0) {
    throw std::invalid_argument("gd: counts must be >= 0");
  }
  double target = state.goal / state.inventory * opportunities;
  // Ascent: the GD dual is maximized, so under-delivery raises the bid.
  state.lambda = std::max(0.0, state.lambda + eps * (target - wins));
}

bool gd_step(GdState& state, double competing_ecpm, double eps) {
  bool won = competing_ecpm < state.lambda;
  gd_update(state, 1.0, won ? 1.0 : 0.0, eps);
  return won;
}

}  // namespace bidpace
