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

#ifndef BIDPACE_INITBID_HPP
#define BIDPACE_INITBID_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace bidpace {

/// Lognormal parameters of the clearing-price eCPM (mu, sigma) and the
/// conversion rate (mu', sigma').
struct LognormalParams {
  double ecpm_mu = 0.0;
  double ecpm_sigma = 0.0;
  double cvr_mu = 0.0;
  double cvr_sigma = 0.0;
};

/// Closed-form initial bid per conversion for the double-lognormal market:
/// ln b* = mu - mu' + sigma^2 + sqrt(sigma'^2 + sigma^2) * ppf(B / (T E[Z])).
/// Throws std::domain_error when the budget ratio leaves (0, 1).
double init_bid_parametric(const LognormalParams& params, double budget,
                           double horizon);

/// Cost-cap variant: min(b*, cap / second_price_ratio).
double init_bid_costcap(double parametric_bid, double cap,
                        double second_price_ratio);

struct AuctionRecord {
  double competing_ecpm = 0.0;
  double pctr = 0.0;
};

/// Binary search over replayed spend(b) = sum c_i 1{b r_i > c_i}. The result
/// never spends more than the budget on the log: if the converged midpoint
/// overshoots, the largest probed under-budget bid is returned instead.
double auction_replay_bid(std::span<const AuctionRecord> log, double budget,
                          double bid_lo, double bid_hi, double eps);

/// Replayed spend of one constant bid per conversion on the log.
double replay_spend(std::span<const AuctionRecord> log, double bid);

struct ConvergedWindow {
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // inclusive
  double mean = 0.0;
};

/// Two-pointer sliding-window scan over prefix sums for the longest run of
/// length >= min_length with variance <= threshold. The scan advances the
/// right pointer after every hit, which can miss longer windows that start
/// later at the same left edge; kept as a linear-time heuristic.
std::optional<ConvergedWindow> converged_bid_window(
    std::span<const double> bids, double variance_threshold,
    std::size_t min_length);

/// Reads `t,competing_ecpm,pctr` rows (extra ecpm_2..ecpm_k columns are
/// ignored here; GSP ladders are loaded by the bid-response reader).
std::vector<AuctionRecord> load_auction_log_csv(std::istream& in);

}  // namespace bidpace

#endif  // BIDPACE_INITBID_HPP
