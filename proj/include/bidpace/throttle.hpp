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

#ifndef BIDPACE_THROTTLE_HPP
#define BIDPACE_THROTTLE_HPP

namespace bidpace {

struct ThrottleState {
  double participation = 1.0;  // p, clamped to [0,1]
  double adjust_rate = 0.10;   // lambda_adj in (0,1)
};

/// Multiplicative probability update: raise p by (1 + adjust_rate) when spend
/// trails the target, lower it by (1 - adjust_rate) otherwise. Clamped.
void throttle_update(ThrottleState& state, double spend_so_far,
                     double target_so_far);

/// Participation test against a uniform draw in [0,1).
bool throttle_decide(const ThrottleState& state, double uniform_draw);

/// Even-pacing safeguard: 0 below trigger_fraction * limit, rising linearly
/// to 1 at the limit.
double safeguard_probability(double spent_in_period, double period_limit,
                             double trigger_fraction);

}  // namespace bidpace

#endif  // BIDPACE_THROTTLE_HPP
