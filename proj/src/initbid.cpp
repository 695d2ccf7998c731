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

#include "bidpace/initbid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bidpace/math.hpp"

namespace bidpace {

double init_bid_parametric(const LognormalParams& params, double budget,
                           double horizon) {
  if (params.ecpm_sigma < 0.0 || params.cvr_sigma < 0.0) {
    throw std::invalid_argument("init bid: sigmas must be >= 0");
  }
  if (horizon <= 0.0) throw std::invalid_argument("init bid: horizon must be > 0");
  double expected_clearing =
      std::exp(params.ecpm_mu + 0.5 * params.ecpm_sigma * params.ecpm_sigma);
  double rhs = budget / (horizon * expected_clearing);
  if (!(rhs > 0.0 && rhs < 1.0)) {
    throw std::domain_error(
        "init bid: budget per auction must lie strictly between zero and the "
        "expected clearing price");
  }
  double sd = std::sqrt(params.cvr_sigma * params.cvr_sigma +
                        params.ecpm_sigma * params.ecpm_sigma);
  double ln_bid = params.ecpm_mu - params.cvr_mu +
                  params.ecpm_sigma * params.ecpm_sigma + sd * norm_ppf(rhs);
  return std::exp(ln_bid);
}

double init_bid_costcap(double parametric_bid, double cap,
                        double second_price_ratio) {
  if (cap <= 0.0) throw std::invalid_argument("init bid: cap must be > 0");
  if (second_price_ratio <= 0.0 || second_price_ratio > 1.0) {
    throw std::invalid_argument("init bid: sigma ratio must lie in (0,1]");
  }
  return std::min(parametric_bid, cap / second_price_ratio);
}

double replay_spend(std::span<const AuctionRecord> log, double bid) {
  double spend = 0.0;
  for (const auto& rec : log) {
    if (bid * rec.pctr > rec.competing_ecpm) spend += rec.competing_ecpm;
  }
  return spend;
}

double auction_replay_bid(std::span<const AuctionRecord> log, double budget,
                          double bid_lo, double bid_hi, double eps) {
  if (log.empty()) throw std::invalid_argument("replay: empty auction log");
  if (budget < 0.0) throw std::invalid_argument("replay: budget must be >= 0");
  if (!(bid_lo < bid_hi) || eps <= 0.0) {
    throw std::invalid_argument("replay: invalid search interval");
  }
  double lo = bid_lo;
  double hi = bid_hi;
  double best_safe = replay_spend(log, lo) <= budget ? lo : 0.0;
  while (hi - lo > eps) {
    double mid = 0.5 * (lo + hi);
    double spend = replay_spend(log, mid);
    if (spend <= budget) best_safe = std::max(best_safe, mid);
    if (spend < budget) {
      lo = mid;  // spend more
    } else {
      hi = mid;  // spend less
    }
  }
  double mid = 0.5 * (lo + hi);
  if (replay_spend(log, mid) <= budget) return mid;
  return best_safe;
}

std::optional<ConvergedWindow> converged_bid_window(
    std::span<const double> bids, double variance_threshold,
    std::size_t min_length) {
  if (min_length < 2) {
    throw std::invalid_argument("window: min length must be >= 2");
  }
  if (min_length > bids.size()) {
    throw std::invalid_argument("window: min length exceeds the data");
  }
  std::size_t n = bids.size();
  std::vector<double> sum(n + 1, 0.0);
  std::vector<double> sumsq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i + 1] = sum[i] + bids[i];
    sumsq[i + 1] = sumsq[i] + bids[i] * bids[i];
  }
  auto stats = [&](std::size_t l, std::size_t r) {  // inclusive bounds
    double len = static_cast<double>(r - l + 1);
    double mean = (sum[r + 1] - sum[l]) / len;
    double var = (sumsq[r + 1] - sumsq[l]) / len - mean * mean;
    return std::pair<double, double>(mean, std::max(0.0, var));
  };

  std::optional<ConvergedWindow> best;
  std::size_t max_length = 0;
  std::size_t left = 0;
  for (std::size_t right = 0; right < n; ++right) {
    while (right + 1 >= min_length && right + 1 - left >= min_length) {
      auto [mean, var] = stats(left, right);
      if (var <= variance_threshold) {
        if (right - left + 1 > max_length) {
          max_length = right - left + 1;
          best = ConvergedWindow{left, right, mean};
        }
        break;  // grow the window from the right
      }
      ++left;  // shrink until the variance constraint holds
    }
  }
  return best;
}

std::vector<AuctionRecord> load_auction_log_csv(std::istream& in) {
  std::vector<AuctionRecord> log;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {  // skip `t,competing_ecpm,pctr`
      header = false;
      continue;
    }
    std::istringstream row(line);
    std::string field;
    AuctionRecord rec;
    if (!std::getline(row, field, ',')) continue;  // t, unused
    if (!std::getline(row, field, ',')) {
      throw std::runtime_error("auction log: missing competing_ecpm");
    }
    rec.competing_ecpm = std::stod(field);
    if (!std::getline(row, field, ',')) {
      throw std::runtime_error("auction log: missing pctr");
    }
    rec.pctr = std::stod(field);
    log.push_back(rec);
  }
  return log;
}

}  // namespace bidpace
