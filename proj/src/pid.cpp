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

#include "bidpace/pid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bidpace {

namespace {
constexpr double kDualFloor = 1e-6;
}

double pid_control(const PidGains& gains, PidChannel& channel, double error,
                   double dt) {
  if (dt <= 0.0) throw std::invalid_argument("pid: dt must be > 0");
  if (gains.u_max <= 0.0) throw std::invalid_argument("pid: u_max must be > 0");
  double integral_bound = 10.0 * gains.u_max;
  channel.cumulative_error =
      std::clamp(channel.cumulative_error + error * dt, -integral_bound,
                 integral_bound);
  double u = gains.kp * error + gains.ki * channel.cumulative_error +
             gains.kd * (error - channel.previous_error) / dt;
  channel.previous_error = error;
  return std::clamp(u, -gains.u_max, gains.u_max);
}

double pid_md_step(const PidGains& gains, PidChannel& channel,
                   double observed_spend, double target_spend,
                   double bid_per_click, double dt) {
  if (target_spend <= 0.0) {
    throw std::invalid_argument("pid_md: target spend must be > 0");
  }
  double error = 1.0 - observed_spend / target_spend;
  double u = pid_control(gains, channel, error, dt);
  return bid_per_click * std::exp(u);
}

double cost_min_bound(double budget, double cap, const SpendLedger& ledger,
                      double second_price_ratio) {
  if (cap <= 0.0) throw std::invalid_argument("cost_min: cap must be > 0");
  if (second_price_ratio <= 0.0 || second_price_ratio > 1.0) {
    throw std::invalid_argument("cost_min: sigma must lie in (0,1]");
  }
  double goal = budget / cap;
  double remaining_goal = goal - ledger.conversions();
  if (remaining_goal <= 0.0) {
    return std::numeric_limits<double>::infinity();  // cap already met
  }
  return (budget - ledger.spend()) / (remaining_goal * second_price_ratio);
}

double dynamic_cap_update(double cap_u, double observed_cpa, double target_cap,
                          double gain_eps) {
  if (gain_eps <= 0.0) throw std::invalid_argument("dynamic cap: eps must be > 0");
  return std::max(0.0, cap_u - gain_eps * (observed_cpa - target_cap));
}

double dual_pid_step(DualPidState& state, const PidGains& gains_lambda,
                     const PidGains& gains_mu, double observed_spend,
                     double observed_conversions, double target_spend,
                     double cap, double pctr, double dt) {
  double e_lambda = observed_spend - target_spend;
  double u_lambda = pid_control(gains_lambda, state.lambda_channel, e_lambda, dt);
  state.lambda = std::max(kDualFloor, state.lambda * std::exp(u_lambda));

  if (observed_conversions > 0.0) {
    double e_mu = cap - observed_spend / observed_conversions;
    double u_mu = pid_control(gains_mu, state.mu_channel, e_mu, dt);
    state.mu = std::max(kDualFloor, state.mu * std::exp(u_mu));
  }
  // Conversion-free intervals freeze the mu channel (signal sparsity).

  return (1.0 + state.mu * cap) / (state.lambda + state.mu) * pctr;
}

}  // namespace bidpace
