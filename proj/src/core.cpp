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

#include "bidpace/core.hpp"

#include <stdexcept>

namespace bidpace {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void CampaignConfig::validate() const {
  require(budget >= 0.0, "campaign: budget must be >= 0");
  require(horizon >= 1, "campaign: horizon must be >= 1");
  require(markup >= 0.0, "campaign: markup must be >= 0");
  if (const auto* cc = std::get_if<CostCap>(&objective)) {
    require(cc->cap_c > 0.0, "campaign: cost cap must be > 0");
  } else if (const auto* tc = std::get_if<TargetCpa>(&objective)) {
    require(tc->cap_c > 0.0, "campaign: target CPA must be > 0");
    require(tc->tolerance_delta >= 0.0, "campaign: tolerance must be >= 0");
  } else if (const auto* rf = std::get_if<ReachFrequency>(&objective)) {
    require(rf->freq_lower >= 0.0 && rf->freq_lower <= rf->freq_upper,
            "campaign: frequency bounds must satisfy 0 <= F_l <= F_u");
  } else if (const auto* gd = std::get_if<GuaranteedDelivery>(&objective)) {
    require(gd->goal_g >= 0.0 &&
                gd->goal_g <= static_cast<double>(horizon),
            "campaign: delivery goal must not exceed the horizon");
  } else if (const auto* dr = std::get_if<DeepRetention>(&objective)) {
    require(dr->cap_c > 0.0 && dr->deep_cap_d > 0.0,
            "campaign: deep retention caps must be > 0");
  }
}

void AuctionOpportunity::validate() const {
  require(pctr >= 0.0 && pctr <= 1.0, "auction: pctr must lie in [0,1]");
  require(competing_ecpm >= 0.0, "auction: competing eCPM must be >= 0");
  if (deep_rate) {
    require(*deep_rate >= 0.0 && *deep_rate <= 1.0,
            "auction: deep rate must lie in [0,1]");
  }
  for (std::size_t i = 1; i < ecpm_ladder.size(); ++i) {
    require(ecpm_ladder[i] <= ecpm_ladder[i - 1],
            "auction: eCPM ladder must be non-increasing");
  }
}

void SpendLedger::record(double spend, double conversions, double impressions,
                         double requests) {
  require(spend >= 0.0 && conversions >= 0.0 && impressions >= 0.0 &&
              requests >= 0.0,
          "ledger: deltas must be >= 0");
  open_.spend += spend;
  open_.conversions += conversions;
  open_.impressions += impressions;
  open_.requests += requests;
}

void SpendLedger::close_interval() {
  closed_.spend += open_.spend;
  closed_.conversions += open_.conversions;
  closed_.impressions += open_.impressions;
  closed_.requests += open_.requests;
  intervals_.push_back(open_);
  open_ = Interval{};
}

StepSizeSchedule StepSizeSchedule::constant(double eps0) {
  if (eps0 <= 0.0) throw std::invalid_argument("schedule: eps0 must be > 0");
  return {Kind::kConstant, eps0};
}

StepSizeSchedule StepSizeSchedule::harmonic(double eps0) {
  if (eps0 <= 0.0) throw std::invalid_argument("schedule: eps0 must be > 0");
  return {Kind::kHarmonic, eps0};
}

double schedule_value(const StepSizeSchedule& schedule, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("schedule: t must be >= 1");
  switch (schedule.kind) {
    case StepSizeSchedule::Kind::kConstant:
      return schedule.eps0;
    case StepSizeSchedule::Kind::kHarmonic:
      return schedule.eps0 / static_cast<double>(t);
  }
  throw std::logic_error("schedule: unknown kind");
}

PacingClock::PacingClock(std::int64_t update_dt, std::int64_t bucket_dtau,
                         std::int64_t end_of_day)
    : update_dt_(update_dt), bucket_dtau_(bucket_dtau), end_of_day_(end_of_day) {
  require(update_dt > 0 && bucket_dtau > 0 && end_of_day > 0,
          "clock: intervals must be positive");
  require(update_dt <= bucket_dtau, "clock: dt must not exceed dtau");
  require(bucket_dtau % update_dt == 0, "clock: dt must divide dtau");
  require(end_of_day % bucket_dtau == 0,
          "clock: dtau must divide the day evenly");
}

std::int64_t PacingClock::bucket_of_update(std::int64_t k) const {
  if (k < 0 || k >= num_updates()) {
    throw std::out_of_range("clock: update interval past end of day");
  }
  return (k * update_dt_) / bucket_dtau_;
}

}  // namespace bidpace
