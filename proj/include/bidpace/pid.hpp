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

#ifndef BIDPACE_PID_HPP
#define BIDPACE_PID_HPP

#include "bidpace/core.hpp"

namespace bidpace {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double u_max = 0.5;  // saturation bound on the control signal
};

struct PidChannel {
  double cumulative_error = 0.0;
  double previous_error = 0.0;
};

/// Discrete PID step: accumulates the error, emits
/// clamp(kp*e + ki*CE + kd*(e - PE)/dt, +-u_max) and stores e as the previous
/// error. The integral is clamped to +-10*u_max against windup.
double pid_control(const PidGains& gains, PidChannel& channel, double error,
                   double dt);

/// Max-delivery bid modulation with the normalized error e = 1 - r/s and the
/// exponential actuator b <- b * exp(u). Returns the new bid per click.
/// Throws when the target s is not positive.
double pid_md_step(const PidGains& gains, PidChannel& channel,
                   double observed_spend, double target_spend,
                   double bid_per_click, double dt = 1.0);

/// Cost-Min bid upper bound U = (B - S) / ((B/C - N) * sigma). Returns +inf
/// once the conversion goal B/C has already been met.
double cost_min_bound(double budget, double cap, const SpendLedger& ledger,
                      double second_price_ratio);

/// Proportional cap update u <- max(0, u - eps * (cpa - cap)).
double dynamic_cap_update(double cap_u, double observed_cpa, double target_cap,
                          double gain_eps);

/// Dual-PID state for cost cap: multiplicative updates of lambda (budget) and
/// mu (cost), floored at 1e-6.
struct DualPidState {
  double lambda = 1.0;
  double mu = 0.0;
  PidChannel lambda_channel;
  PidChannel mu_channel;
};

/// One dual-PID interval: e_lambda = r_k - s_k, e_mu = C - r_k/n_k (mu frozen
/// when no conversions arrived), exp actuators on both duals. Returns the bid
/// per impression (1 + mu*C) / (lambda + mu) * pctr.
double dual_pid_step(DualPidState& state, const PidGains& gains_lambda,
                     const PidGains& gains_mu, double observed_spend,
                     double observed_conversions, double target_spend,
                     double cap, double pctr, double dt = 1.0);

}  // namespace bidpace

#endif  // BIDPACE_PID_HPP
