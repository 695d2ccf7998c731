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

#ifndef BIDPACE_AUCTIONS_HPP
#define BIDPACE_AUCTIONS_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace bidpace {

/// Position discounts alpha_1 = 1 >= alpha_2 >= ... >= alpha_k >= 0.
struct SlotConfig {
  explicit SlotConfig(std::vector<double> discounts);
  const std::vector<double>& discounts() const { return discounts_; }
  int slots() const { return static_cast<int>(discounts_.size()); }

 private:
  std::vector<double> discounts_;
};

struct SingleSlotOutcome {
  bool won = false;
  double cost = 0.0;  // per impression
};

/// Second price: win on strict inequality, pay the competing eCPM.
SingleSlotOutcome settle_spa(double bid_ecpm, double competing_ecpm);

/// First price: win on strict inequality, pay the own bid.
SingleSlotOutcome settle_fpa(double bid_ecpm, double competing_ecpm);

struct SettlementResult {
  struct Entry {
    int bidder = -1;                 // index into the input eCPM list
    int slot = -1;                   // 0-based slot
    double pay_per_impression = 0.0;
    std::optional<double> pay_per_click;  // set when pCTRs are supplied
  };
  std::vector<Entry> winners;  // one entry per slot, in slot order
};

/// GSP settlement over first-slot eCPMs. Ranking is a stable descending sort;
/// the slot-j winner pays ecpm_{j+1} * alpha_j per impression (missing
/// competitors pad with zero). Throws on empty input.
SettlementResult settle_gsp(const std::vector<double>& first_slot_ecpms,
                            const SlotConfig& slots,
                            const std::vector<double>& pctrs = {});

/// VCG payments for the k-slot auction, one per occupied slot. `sorted_bids`
/// are per-click bids in non-increasing order (throws otherwise); the slot-i
/// winner pays sum_{j=i..k} (alpha_j - alpha_{j+1}) * b_{j+1} per impression,
/// with alpha_{k+1} = 0 and absent bids padded with zero.
std::vector<double> vcg_kslot_payments(const std::vector<double>& sorted_bids,
                                       const SlotConfig& slots);

struct MyersonUniformResult {
  double reserve = 0.0;
  double profit_no_reserve = 0.0;
  double profit_with_reserve = 0.0;
};

/// The two-bidder i.i.d. U[0,1] case: reserve phi^{-1}(0) = 1/2, expected
/// profits estimated by Monte Carlo settlement with and without the reserve.
MyersonUniformResult myerson_uniform_reserve(std::uint64_t seed,
                                             std::int64_t draws);

}  // namespace bidpace

#endif  // BIDPACE_AUCTIONS_HPP
