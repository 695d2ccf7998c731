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

#ifndef BIDPACE_EVENPACING_HPP
#define BIDPACE_EVENPACING_HPP

#include <cstdint>
#include <vector>

#include "bidpace/core.hpp"

namespace bidpace {

/// Equal consecutive sub-intervals covering [0, end_of_day).
class PeriodPartition {
 public:
  PeriodPartition(std::int64_t periods, double end_of_day);

  std::int64_t periods() const { return periods_; }
  double period_length() const { return end_of_day_ / periods_; }
  double end_of_day() const { return end_of_day_; }

  /// Index of the period containing `time`; throws when out of range.
  std::int64_t period_of(double time) const;

 private:
  std::int64_t periods_;
  double end_of_day_;
};

/// Even-pacing duals: the budget dual plus one non-negative dual per
/// intra-period. An active period cap raises the bid denominator
/// lambda + lambda_i.
struct IntraPeriodState {
  double lambda = 1.0;
  std::vector<double> period_duals;
  double cap_fraction = 1.0;  // sigma
  double lambda_floor = 1e-6;

  IntraPeriodState(double lambda_init, std::int64_t periods,
                   double cap_fraction);
};

/// Per-auction dual step: lambda follows the max-delivery gradient, the
/// active period's dual follows sigma B/T - cost * won, projected at zero.
/// Returns the bid r / (lambda + lambda_i) at the updated duals.
double even_dogd_step(IntraPeriodState& state, const AuctionOpportunity& opp,
                      std::int64_t period, bool won, double cost,
                      double budget, double horizon, double eps);

/// Receding-horizon effective budget min{B_tau, B_tau_i} where
/// B_tau = remaining_weight * budget_remaining and B_tau_i = period cap minus
/// the period's spend so far. Throws on negative spend.
double even_mpc_budget(double budget_remaining, double remaining_weight,
                       double period_cap, double spent_in_period);

}  // namespace bidpace

#endif  // BIDPACE_EVENPACING_HPP
