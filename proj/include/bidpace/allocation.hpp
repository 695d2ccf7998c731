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

#ifndef BIDPACE_ALLOCATION_HPP
#define BIDPACE_ALLOCATION_HPP

#include <cstdint>
#include <vector>

#include "bidpace/core.hpp"

namespace bidpace {

/// Expected eligible requests per target bucket.
struct SupplyForecast {
  std::vector<double> requests_per_bucket;
};

/// Target spend per bucket; sums to the budget.
struct TargetSpendPlan {
  std::vector<double> target_per_bucket;
};

/// TS(t) = NR(t) / sum(NR) * B. Throws when the forecast is all zero or has
/// negative entries.
TargetSpendPlan allocate_targets(double budget, const SupplyForecast& forecast);

/// Target spend for the k-th bid-update interval: dt/dtau * TS(bucket of k),
/// assuming linear consumption within a bucket.
double interval_target(const TargetSpendPlan& plan, const PacingClock& clock,
                       std::int64_t update_index);

}  // namespace bidpace

#endif  // BIDPACE_ALLOCATION_HPP
