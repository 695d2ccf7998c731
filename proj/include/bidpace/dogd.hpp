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

#ifndef BIDPACE_DOGD_HPP
#define BIDPACE_DOGD_HPP

#include <cstdint>

#include "bidpace/core.hpp"

namespace bidpace {

/// Dual variables evolved by projected SGD. lambda stays above lambda_floor,
/// mu above zero. `normalize_gradients` divides every gradient by B/T so one
/// step size serves campaigns of any budget scale.
struct DualState {
  double lambda = 1.0;
  double mu = 0.0;
  StepSizeSchedule schedule = StepSizeSchedule::constant(0.01);
  double lambda_floor = 1e-6;
  bool normalize_gradients = false;
  std::int64_t step_count = 0;  // drives the schedule, t = 1, 2, ...
};

/// Per-auction max-delivery step. Gradient B/T - 1{r > lambda*c} * c, SGD on
/// lambda, then bid r / lambda at the updated dual. Returns the bid per
/// impression.
double dogd_md_step(DualState& state, const AuctionOpportunity& opp,
                    double budget, double horizon);

/// Mini-batch max-delivery step with gradient R/T * B - S. Returns the bid
/// per click 1 / lambda.
double dogd_md_batch(DualState& state, double requests, double spend,
                     double budget, double horizon);

/// Per-auction cost-cap step. Win test r - lambda*c - mu*c + mu*C*r > 0;
/// gradients B/T - 1{win}*c and (C*r - c)*1{win}. Returns the bid per
/// impression (1 + mu*C) / (lambda + mu) * r.
double dogd_costcap_step(DualState& state, const AuctionOpportunity& opp,
                         double budget, double horizon, double cap);

/// Mini-batch cost-cap step: lambda gradient R/T * B - S, mu gradient
/// C*N - S. Returns the bid per click (1 + mu*C) / (lambda + mu).
double dogd_costcap_batch(DualState& state, double requests, double spend,
                          double conversions, double budget, double horizon,
                          double cap);

}  // namespace bidpace

#endif  // BIDPACE_DOGD_HPP
