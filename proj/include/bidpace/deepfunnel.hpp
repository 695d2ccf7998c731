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

#ifndef BIDPACE_DEEPFUNNEL_HPP
#define BIDPACE_DEEPFUNNEL_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bidpace/auctions.hpp"
#include "bidpace/pid.hpp"

namespace bidpace {

/// Deep-retention PID parameters: alpha paces delivery, beta1 the conversion
/// cost, beta2 the deep-conversion channel. Multiplicative exp updates keep
/// all three positive.
struct DeepPidState {
  double alpha = 1.0;
  double beta1 = 1.0;
  double beta2 = 1.0;
  PidChannel alpha_channel;
  PidChannel beta1_channel;
  PidChannel beta2_channel;
};

/// Primary bid decomposition: alpha (beta1 C r + beta2 D d r).
double deep_bid(const DeepPidState& state, double cap_c, double deep_cap_d,
                double pctr, double deep_rate);

/// One pacing cycle of the three PID channels. Errors are target minus
/// observation on each channel; all channels share the gains, as does the
/// variant formulation when the caller passes the target deep rate C/D and
/// the observed deep rate instead of the cost pair.
void deep_pid_update(DeepPidState& state, double observed_spend,
                     double observed_cost_per_conversion,
                     double observed_deep_metric, double target_spend,
                     double target_c, double target_deep_metric,
                     const PidGains& gains);

/// Variant decomposition: alpha beta1 C r [1 + beta2 (d / (C/D) - 1)], with
/// the bracket floored at zero.
double variant_bid(const DeepPidState& state, double cap_c, double deep_cap_d,
                   double pctr, double deep_rate);

struct WonAuction {
  double cost = 0.0;       // winning price paid
  double pctr = 0.0;       // predicted conversion rate
  double deep_rate = 0.0;  // predicted deep rate conditioned on conversion
};

struct CpxEstimate {
  std::optional<double> cost_per_conversion;       // sum c / sum r
  std::optional<double> cost_per_deep_conversion;  // sum c / sum r d
};

/// Predicted-rate smoothing of the observed CPX pair; a missing value tells
/// the PID loop to freeze that channel.
CpxEstimate predicted_cpx(std::span<const WonAuction> won);

/// One GSP auction snapshot: the campaign's first-slot pCTR and the
/// descending top-k competitor eCPMs.
struct GspLogRow {
  double pctr = 0.0;
  std::vector<double> ladder;
};

struct SampledCurve {
  std::vector<double> bids;
  std::vector<double> values;
};

/// Auction replay of a hypothetical constant bid per click over the log:
/// per-impression cost accumulated at the displaced slot. Win test is
/// eCPM >= ladder back (last slot displaced on ties).
SampledCurve bid_cost_curve(std::span<const GspLogRow> log,
                            const SlotConfig& slots, double bid_lo,
                            double bid_hi, double bid_step);

/// Same replay accumulating position-adjusted pCTR (expected conversions).
SampledCurve bid_conversion_curve(std::span<const GspLogRow> log,
                                  const SlotConfig& slots, double bid_lo,
                                  double bid_hi, double bid_step);

/// Reads `t,pctr,ecpm_1,...,ecpm_k` rows with a header line.
std::vector<GspLogRow> load_gsp_log_csv(std::istream& in);

}  // namespace bidpace

#endif  // BIDPACE_DEEPFUNNEL_HPP
