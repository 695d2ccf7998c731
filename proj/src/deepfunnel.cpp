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

#include "bidpace/deepfunnel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bidpace {

double deep_bid(const DeepPidState& state, double cap_c, double deep_cap_d,
                double pctr, double deep_rate) {
  if (pctr < 0.0 || pctr > 1.0 || deep_rate < 0.0 || deep_rate > 1.0) {
    throw std::invalid_argument("deep bid: rates must lie in [0,1]");
  }
  return state.alpha * (state.beta1 * cap_c * pctr +
                        state.beta2 * deep_cap_d * deep_rate * pctr);
}

void deep_pid_update(DeepPidState& state, double observed_spend,
                     double observed_cost_per_conversion,
                     double observed_deep_metric, double target_spend,
                     double target_c, double target_deep_metric,
                     const PidGains& gains) {
  if (target_spend <= 0.0 || target_c <= 0.0 || target_deep_metric <= 0.0) {
    throw std::invalid_argument("deep pid: targets must be > 0");
  }
  double e_alpha = target_spend - observed_spend;
  double e_beta1 = target_c - observed_cost_per_conversion;
  double e_beta2 = target_deep_metric - observed_deep_metric;
  state.alpha *= std::exp(pid_control(gains, state.alpha_channel, e_alpha, 1.0));
  state.beta1 *= std::exp(pid_control(gains, state.beta1_channel, e_beta1, 1.0));
  state.beta2 *= std::exp(pid_control(gains, state.beta2_channel, e_beta2, 1.0));
}

double variant_bid(const DeepPidState& state, double cap_c, double deep_cap_d,
                   double pctr, double deep_rate) {
  if (cap_c <= 0.0 || deep_cap_d <= 0.0) {
    throw std::invalid_argument("variant bid: caps must be > 0");
  }
  double target_rate = cap_c / deep_cap_d;
  double adjustment =
      std::max(0.0, 1.0 + state.beta2 * (deep_rate / target_rate - 1.0));
  return state.alpha * state.beta1 * cap_c * pctr * adjustment;
}

CpxEstimate predicted_cpx(std::span<const WonAuction> won) {
  double cost = 0.0;
  double rate = 0.0;
  double deep_rate = 0.0;
  for (const auto& w : won) {
    cost += w.cost;
    rate += w.pctr;
    deep_rate += w.pctr * w.deep_rate;
  }
  CpxEstimate estimate;
  if (rate > 0.0) estimate.cost_per_conversion = cost / rate;
  if (deep_rate > 0.0) estimate.cost_per_deep_conversion = cost / deep_rate;
  return estimate;
}

namespace {

void check_ladder(const GspLogRow& row) {
  if (row.ladder.empty()) {
    throw std::invalid_argument("gsp replay: empty eCPM ladder");
  }
  for (std::size_t j = 1; j < row.ladder.size(); ++j) {
    if (row.ladder[j] > row.ladder[j - 1]) {
      throw std::invalid_argument("gsp replay: ladder must be non-increasing");
    }
  }
}

template <typename Contribution>
SampledCurve replay_curve(std::span<const GspLogRow> log,
                          const SlotConfig& slots, double bid_lo,
                          double bid_hi, double bid_step,
                          Contribution&& contribution) {
  if (!(bid_lo <= bid_hi) || bid_step <= 0.0) {
    throw std::invalid_argument("gsp replay: invalid bid grid");
  }
  for (const auto& row : log) check_ladder(row);
  const auto& alpha = slots.discounts();
  SampledCurve curve;
  for (double b = bid_lo; b <= bid_hi + 0.5 * bid_step; b += bid_step) {
    double bid = std::min(b, bid_hi);
    double total = 0.0;
    for (const auto& row : log) {
      std::size_t ladder_slots =
          std::min<std::size_t>(row.ladder.size(), alpha.size());
      double ecpm = bid * row.pctr;
      if (ecpm < row.ladder[ladder_slots - 1]) continue;  // loses outright
      // Lowest slot the campaign qualifies for: first ladder entry it meets.
      std::size_t slot = 0;
      while (slot < ladder_slots && row.ladder[slot] > ecpm) ++slot;
      if (slot >= ladder_slots) slot = ladder_slots - 1;
      total += contribution(row, slot, alpha[slot]);
    }
    curve.bids.push_back(bid);
    curve.values.push_back(total);
    if (bid >= bid_hi) break;
  }
  return curve;
}

}  // namespace

SampledCurve bid_cost_curve(std::span<const GspLogRow> log,
                            const SlotConfig& slots, double bid_lo,
                            double bid_hi, double bid_step) {
  return replay_curve(log, slots, bid_lo, bid_hi, bid_step,
                      [](const GspLogRow& row, std::size_t slot, double a) {
                        return row.ladder[slot] * a;
                      });
}

SampledCurve bid_conversion_curve(std::span<const GspLogRow> log,
                                  const SlotConfig& slots, double bid_lo,
                                  double bid_hi, double bid_step) {
  return replay_curve(log, slots, bid_lo, bid_hi, bid_step,
                      [](const GspLogRow& row, std::size_t, double a) {
                        return row.pctr * a;
                      });
}

std::vector<GspLogRow> load_gsp_log_csv(std::istream& in) {
  std::vector<GspLogRow> log;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {  // `t,pctr,ecpm_1,...,ecpm_k`
      header = false;
      continue;
    }
    std::istringstream row_stream(line);
    std::string field;
    GspLogRow row;
    if (!std::getline(row_stream, field, ',')) continue;  // t, unused
    if (!std::getline(row_stream, field, ',')) {
      throw std::runtime_error("gsp log: missing pctr");
    }
    row.pctr = std::stod(field);
    while (std::getline(row_stream, field, ',')) {
      row.ladder.push_back(std::stod(field));
    }
    if (row.ladder.empty()) {
      throw std::runtime_error("gsp log: missing eCPM ladder");
    }
    log.push_back(std::move(row));
  }
  return log;
}

}  // namespace bidpace
