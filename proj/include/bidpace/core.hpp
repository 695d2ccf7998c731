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

#ifndef BIDPACE_CORE_HPP
#define BIDPACE_CORE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bidpace {

enum class Charging { kOcpm, kPerResult };

struct MaxDelivery {};
struct CostCap {
  double cap_c = 0.0;  // upper bound on average cost per conversion
};
struct TargetCpa {
  double cap_c = 0.0;
  double tolerance_delta = 0.1;  // tolerated relative CPA deviation
};
struct ReachFrequency {
  double freq_lower = 0.0;
  double freq_upper = 0.0;
};
struct GuaranteedDelivery {
  double goal_g = 0.0;  // impressions to win
};
struct DeepRetention {
  double cap_c = 0.0;
  double deep_cap_d = 0.0;
};

using Objective = std::variant<MaxDelivery, CostCap, TargetCpa, ReachFrequency,
                               GuaranteedDelivery, DeepRetention>;

struct CampaignConfig {
  std::string id;
  double budget = 0.0;
  std::int64_t horizon = 1;  // forecast number of auction opportunities
  Objective objective = MaxDelivery{};
  Charging charging = Charging::kOcpm;
  double markup = 0.0;  // offsite margin factor m

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

/// One auction request. `competing_ecpm` is the highest competing bid per
/// impression; `ecpm_ladder`, when non-empty, holds the descending top-k
/// first-slot eCPMs for GSP replay.
struct AuctionOpportunity {
  std::int64_t index = 0;
  double time = 0.0;  // seconds since campaign start
  double pctr = 0.0;
  std::optional<double> deep_rate;
  double competing_ecpm = 0.0;
  std::vector<double> ecpm_ladder;
  int channel = 1;  // 1 = onsite

  void validate() const;
};

/// Per-interval and cumulative spend accounting. The cumulative getters are
/// running totals over closed intervals plus the open one, accumulated in
/// interval order, so the interval-sum identity holds exactly in floating
/// point.
class SpendLedger {
 public:
  struct Interval {
    double requests = 0.0;
    double spend = 0.0;
    double conversions = 0.0;
    double impressions = 0.0;
  };

  /// Adds one batch of observations to the open interval.
  /// Throws std::invalid_argument on any negative delta.
  void record(double spend, double conversions, double impressions,
              double requests);

  /// Closes the open interval and starts a new one.
  void close_interval();

  double spend() const { return closed_.spend + open_.spend; }
  double conversions() const { return closed_.conversions + open_.conversions; }
  double impressions() const { return closed_.impressions + open_.impressions; }
  double requests() const { return closed_.requests + open_.requests; }

  const std::vector<Interval>& intervals() const { return intervals_; }
  const Interval& open_interval() const { return open_; }

 private:
  std::vector<Interval> intervals_;
  Interval open_;
  Interval closed_;  // running totals over closed intervals
};

struct StepSizeSchedule {
  enum class Kind { kConstant, kHarmonic };
  Kind kind = Kind::kConstant;
  double eps0 = 1.0;

  static StepSizeSchedule constant(double eps0);
  static StepSizeSchedule harmonic(double eps0);
};

/// eps0 for the constant schedule, eps0 / t for the harmonic one. t >= 1.
double schedule_value(const StepSizeSchedule& schedule, std::int64_t t);

/// Bid-update interval dt, target-bucket interval dtau and day length, all in
/// seconds. dt divides dtau and dtau divides the day; checked at construction.
class PacingClock {
 public:
  PacingClock(std::int64_t update_dt, std::int64_t bucket_dtau,
              std::int64_t end_of_day);

  std::int64_t update_dt() const { return update_dt_; }
  std::int64_t bucket_dtau() const { return bucket_dtau_; }
  std::int64_t end_of_day() const { return end_of_day_; }
  std::int64_t num_buckets() const { return end_of_day_ / bucket_dtau_; }
  std::int64_t num_updates() const { return end_of_day_ / update_dt_; }
  double update_fraction() const {
    return static_cast<double>(update_dt_) / static_cast<double>(bucket_dtau_);
  }

  /// Bucket containing the k-th update interval (both 0-based).
  /// Throws std::out_of_range when k is past the end of the day.
  std::int64_t bucket_of_update(std::int64_t k) const;

 private:
  std::int64_t update_dt_;
  std::int64_t bucket_dtau_;
  std::int64_t end_of_day_;
};

}  // namespace bidpace

#endif  // BIDPACE_CORE_HPP
