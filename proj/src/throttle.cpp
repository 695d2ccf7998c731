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

#include "bidpace/throttle.hpp"

#include <algorithm>
#include <stdexcept>

namespace bidpace {

void throttle_update(ThrottleState& state, double spend_so_far,
                     double target_so_far) {
  if (spend_so_far < 0.0 || target_so_far < 0.0) {
    throw std::invalid_argument("throttle: spend and target must be >= 0");
  }
  if (spend_so_far <= target_so_far) {
    state.participation =
        std::min(1.0, state.participation * (1.0 + state.adjust_rate));
  } else {
    state.participation =
        std::max(0.0, state.participation * (1.0 - state.adjust_rate));
  }
}

bool throttle_decide(const ThrottleState& state, double uniform_draw) {
  if (uniform_draw < 0.0 || uniform_draw >= 1.0) {
    throw std::invalid_argument("throttle: draw must lie in [0,1)");
  }
  return state.participation > 0.0 && uniform_draw <= state.participation;
}

double safeguard_probability(double spent_in_period, double period_limit,
                             double trigger_fraction) {
  if (period_limit <= 0.0) {
    throw std::invalid_argument("safeguard: limit must be > 0");
  }
  if (trigger_fraction < 0.0 || trigger_fraction >= 1.0) {
    throw std::invalid_argument("safeguard: trigger must lie in [0,1)");
  }
  double trigger = trigger_fraction * period_limit;
  if (spent_in_period <= trigger) return 0.0;
  if (spent_in_period >= period_limit) return 1.0;
  return (spent_in_period - trigger) / (period_limit - trigger);
}

}  // namespace bidpace
