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

#include "bidpace/auctions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "bidpace/math.hpp"

namespace bidpace {

SlotConfig::SlotConfig(std::vector<double> discounts)
    : discounts_(std::move(discounts)) {
  if (discounts_.empty()) {
    throw std::invalid_argument("slots: at least one discount required");
  }
  // The top slot usually carries alpha_1 = 1 (pure position discounts), but
  // raw CTR ladders are accepted as well.
  if (discounts_.front() <= 0.0) {
    throw std::invalid_argument("slots: alpha_1 must be positive");
  }
  for (std::size_t i = 0; i < discounts_.size(); ++i) {
    if (discounts_[i] < 0.0 || discounts_[i] > 1.0) {
      throw std::invalid_argument("slots: discounts must lie in [0,1]");
    }
    if (i > 0 && discounts_[i] > discounts_[i - 1]) {
      throw std::invalid_argument("slots: discounts must be non-increasing");
    }
  }
}

SingleSlotOutcome settle_spa(double bid_ecpm, double competing_ecpm) {
  // Ties lose: the formulation is x_t = 1{b_t > c_t}.
  if (bid_ecpm > competing_ecpm) return {true, competing_ecpm};
  return {false, 0.0};
}

SingleSlotOutcome settle_fpa(double bid_ecpm, double competing_ecpm) {
  if (bid_ecpm > competing_ecpm) return {true, bid_ecpm};
  return {false, 0.0};
}

SettlementResult settle_gsp(const std::vector<double>& first_slot_ecpms,
                            const SlotConfig& slots,
                            const std::vector<double>& pctrs) {
  if (first_slot_ecpms.empty()) {
    throw std::invalid_argument("gsp: no bidders");
  }
  if (!pctrs.empty() && pctrs.size() != first_slot_ecpms.size()) {
    throw std::invalid_argument("gsp: pctr count must match bidder count");
  }
  std::vector<int> order(first_slot_ecpms.size());
  std::iota(order.begin(), order.end(), 0);
  // Equal eCPMs keep input order so replay is deterministic.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return first_slot_ecpms[a] > first_slot_ecpms[b];
  });

  const auto& alpha = slots.discounts();
  SettlementResult result;
  int winners = std::min<int>(slots.slots(), static_cast<int>(order.size()));
  for (int j = 0; j < winners; ++j) {
    int bidder = order[j];
    double next_ecpm = (j + 1 < static_cast<int>(order.size()))
                           ? first_slot_ecpms[order[j + 1]]
                           : 0.0;
    SettlementResult::Entry entry;
    entry.bidder = bidder;
    entry.slot = j;
    entry.pay_per_impression = next_ecpm * alpha[j];
    if (!pctrs.empty() && pctrs[bidder] > 0.0) {
      // Expected clicks per impression in slot j are pctr * alpha_j, so the
      // per-click price reduces to next_ecpm / pctr.
      entry.pay_per_click = next_ecpm / pctrs[bidder];
    }
    result.winners.push_back(entry);
  }
  return result;
}

std::vector<double> vcg_kslot_payments(const std::vector<double>& sorted_bids,
                                       const SlotConfig& slots) {
  for (std::size_t i = 1; i < sorted_bids.size(); ++i) {
    if (sorted_bids[i] > sorted_bids[i - 1]) {
      throw std::invalid_argument("vcg: bids must be sorted non-increasing");
    }
  }
  const auto& alpha = slots.discounts();
  int k = slots.slots();
  auto bid_at = [&](int j) {  // 1-based, zero-padded
    return (j >= 1 && j <= static_cast<int>(sorted_bids.size()))
               ? sorted_bids[j - 1]
               : 0.0;
  };
  auto alpha_at = [&](int j) {  // 1-based, alpha_{k+1} = 0
    return (j >= 1 && j <= k) ? alpha[j - 1] : 0.0;
  };
  int occupied = std::min<int>(k, static_cast<int>(sorted_bids.size()));
  std::vector<double> payments(occupied, 0.0);
  for (int i = 1; i <= occupied; ++i) {
    // Externality telescoped from the bidder's own slot downward.
    double p = 0.0;
    for (int j = i; j <= k; ++j) {
      p += (alpha_at(j) - alpha_at(j + 1)) * bid_at(j + 1);
    }
    payments[i - 1] = p;
  }
  return payments;
}

MyersonUniformResult myerson_uniform_reserve(std::uint64_t seed,
                                             std::int64_t draws) {
  if (draws <= 0) throw std::invalid_argument("myerson: draws must be > 0");
  MyersonUniformResult result;
  result.reserve = 0.5;  // phi(z) = 2z - 1 for U[0,1]
  Rng rng(seed);
  double no_reserve = 0.0;
  double with_reserve = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    double v1 = rng.uniform01();
    double v2 = rng.uniform01();
    double hi = std::max(v1, v2);
    double lo = std::min(v1, v2);
    no_reserve += lo;  // winner pays the second-highest value
    if (hi >= result.reserve) {
      with_reserve += std::max(lo, result.reserve);
    }
  }
  result.profit_no_reserve = no_reserve / static_cast<double>(draws);
  result.profit_with_reserve = with_reserve / static_cast<double>(draws);
  return result;
}

}  // namespace bidpace
