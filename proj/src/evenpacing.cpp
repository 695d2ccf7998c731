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

#include "bidpace/evenpacing.hpp"

#include <algorithm>
#include <stdexcept>

namespace bidpace {

PeriodPartition::PeriodPartition(std::int64_t periods, double end_of_day)
    : periods_(periods), end_of_day_(end_of_day) {
  if (periods <= 0 || end_of_day <= 0.0) {
    throw std::invalid_argument("partition: periods and day must be positive");
  }
}

std::int64_t PeriodPartition::period_of(double time) const {
  if (time < 0.0 || time >= end_of_day_) {
    throw std::out_of_range("partition: time outside the day");
  }
  auto idx = static_cast<std::int64_t>(time / period_length());
  return std::min(idx, periods_ - 1);
}

IntraPeriodState::IntraPeriodState(double lambda_init, std::int64_t periods,
                                   double cap_fraction_in)
    : lambda(lambda_init), cap_fraction(cap_fraction_in) {
  if (periods <= 0) throw std::invalid_argument("even pacing: periods must be > 0");
  if (cap_fraction <= 0.0 || cap_fraction > 1.0) {
    throw std::invalid_argument("even pacing: sigma must lie in (0,1]");
  }
  if (lambda_init < lambda_floor) {
    throw std::invalid_argument("even pacing: lambda_init below the floor");
  }
  period_duals.assign(static_cast<std::size_t>(periods), 0.0);
}

double even_dogd_step(IntraPeriodState& state, const AuctionOpportunity& opp,
                      std::int64_t period, bool won, double cost,
                      double budget, double horizon, double eps) {
  if (period < 0 ||
      period >= static_cast<std::int64_t>(state.period_duals.size())) {
    throw std::out_of_range("even pacing: unknown period");
  }
  if (horizon <= 0.0) throw std::invalid_argument("even pacing: horizon must be > 0");
  double spend = won ? cost : 0.0;
  state.lambda = std::max(state.lambda_floor,
                          state.lambda - eps * (budget / horizon - spend));
  double& dual = state.period_duals[static_cast<std::size_t>(period)];
  dual = std::max(
      0.0, dual - eps * (state.cap_fraction * budget / horizon - spend));
  return opp.pctr / (state.lambda + dual);
}

double even_mpc_budget(double budget_remaining, double remaining_weight,
                       double period_cap, double spent_in_period) {
  if (spent_in_period < 0.0) {
    throw std::invalid_argument("even pacing: spend must be >= 0");
  }
  if (remaining_weight < 0.0 || remaining_weight > 1.0) {
    throw std::invalid_argument("even pacing: weight must lie in [0,1]");
  }
  double horizon_budget = remaining_weight * budget_remaining;
  double period_budget = period_cap - spent_in_period;
  return std::min(horizon_budget, period_budget);
}

}  // namespace bidpace
