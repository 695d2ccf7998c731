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

#ifndef BIDPACE_BRAND_HPP
#define BIDPACE_BRAND_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace bidpace {

using UserId = std::int64_t;

/// Reach & frequency duals: a global budget dual and per-user frequency
/// duals. Only the auctioning user's duals move on a step.
class RnfState {
 public:
  RnfState(double lambda_init, double freq_lower, double freq_upper);

  /// Declares a user's expected auction opportunities T_m (required before
  /// stepping that user).
  void set_user_forecast(UserId user, double forecast);

  double lambda() const { return lambda_; }
  double mu(UserId user) const;
  double gamma(UserId user) const;
  double freq_lower() const { return freq_lower_; }
  double freq_upper() const { return freq_upper_; }

  /// Per-auction update for user m: cost is counted only when the impression
  /// was won (x = 1). Returns the bid (1 - mu_m + gamma_m) / lambda with the
  /// numerator floored at zero.
  double step(UserId user, double cost, int impression, double budget,
              double total_forecast, double eps);

  struct UserAggregate {
    UserId user = 0;
    double requests = 0.0;     // R_m(t)
    double impressions = 0.0;  // I_m(t)
  };

  /// Mini-batch update: the lambda gradient uses group aggregates, each
  /// user's duals use that user's request/impression counts.
  void batch_update(const std::vector<UserAggregate>& per_user,
                    double group_requests, double group_spend, double budget,
                    double total_forecast, double eps_lambda, double eps_mu,
                    double eps_gamma);

  double bid(UserId user) const;

 private:
  double lambda_;
  double freq_lower_;
  double freq_upper_;
  std::unordered_map<UserId, double> mu_;
  std::unordered_map<UserId, double> gamma_;
  std::unordered_map<UserId, double> forecast_;
  double lambda_floor_ = 1e-6;
};

/// Fixed-frequency special case F_l = F_u = F: one dual per user, bid
/// (1 - mu_m) / lambda.
class FixedFrequencyState {
 public:
  FixedFrequencyState(double lambda_init, double target_frequency);

  void set_user_forecast(UserId user, double forecast);
  double lambda() const { return lambda_; }
  double mu(UserId user) const;

  double step(UserId user, double cost, int impression, double budget,
              double total_forecast, double eps);
  double bid(UserId user) const;

 private:
  double lambda_;
  double target_frequency_;
  std::unordered_map<UserId, double> mu_;
  std::unordered_map<UserId, double> forecast_;
  double lambda_floor_ = 1e-6;
};

/// Guaranteed delivery: the dual is ascended (the GD dual is maximized,
/// opposite in sign to the budgeted problems) and doubles as the bid.
struct GdState {
  double lambda = 0.0;  // bid per impression
  double goal = 0.0;    // G
  double inventory = 0.0;  // T, with G <= T
};

/// Batch ascent lambda <- lambda + eps (G/T * opportunities - wins),
/// projected at zero.
void gd_update(GdState& state, double opportunities, double wins, double eps);

/// Per-auction form; returns whether the auction was won at the pre-update
/// bid.
bool gd_step(GdState& state, double competing_ecpm, double eps);

}  // namespace bidpace

#endif  // BIDPACE_BRAND_HPP
