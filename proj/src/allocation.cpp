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

#include "bidpace/allocation.hpp"

#include <stdexcept>

namespace bidpace {

TargetSpendPlan allocate_targets(double budget,
                                 const SupplyForecast& forecast) {
  if (budget < 0.0) throw std::invalid_argument("allocate: budget must be >= 0");
  double total = 0.0;
  for (double nr : forecast.requests_per_bucket) {
    if (nr < 0.0) throw std::invalid_argument("allocate: NR(t) must be >= 0");
    total += nr;
  }
  if (total <= 0.0) {
    throw std::invalid_argument("allocate: forecast must have positive mass");
  }
  TargetSpendPlan plan;
  plan.target_per_bucket.reserve(forecast.requests_per_bucket.size());
  for (double nr : forecast.requests_per_bucket) {
    plan.target_per_bucket.push_back(nr / total * budget);
  }
  return plan;
}

double interval_target(const TargetSpendPlan& plan, const PacingClock& clock,
                       std::int64_t update_index) {
  std::int64_t bucket = clock.bucket_of_update(update_index);
  if (bucket >= static_cast<std::int64_t>(plan.target_per_bucket.size())) {
    throw std::out_of_range("interval_target: bucket beyond the plan");
  }
  return clock.update_fraction() * plan.target_per_bucket[bucket];
}

}  // namespace bidpace
