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

#ifndef BIDPACE_MPC_HPP
#define BIDPACE_MPC_HPP

#include <cstddef>
#include <vector>

namespace bidpace {

/// One pacing interval's observation: the bid held over the interval and the
/// spend / conversions it produced.
struct BidObservation {
  double bid = 0.0;
  double spend = 0.0;
  double conversions = 0.0;
};

/// Longest non-decreasing-spend subsequence, O(N log N). Among equally long
/// answers, returns the one anchored at the earliest end. Throws on empty
/// input.
std::vector<BidObservation> lis_extract(
    const std::vector<BidObservation>& observations);

/// Weighted L2 projection onto the non-decreasing cone, expanded back to the
/// input length. Throws on length mismatch or non-positive weights.
std::vector<double> pava_fit(const std::vector<double>& values,
                             const std::vector<double>& weights);

enum class FitMethod { kLis, kPava };
enum class CurveTarget { kSpend, kConversions };

/// Piecewise-linear non-decreasing function with two-sided linear
/// extrapolation; evaluation and inversion clamp at zero.
class MonotoneCurve {
 public:
  static MonotoneCurve from_knots(std::vector<double> xs,
                                  std::vector<double> ys);

  double eval(double x) const;
  double invert(double y) const;
  MonotoneCurve scaled(double factor) const;  // scales the y axis

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

 private:
  MonotoneCurve() = default;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Fits a monotone bid->spend (or bid->conversions) curve from interval
/// observations. LIS keeps the longest monotone subset of bid-sorted points;
/// PAVA projects all of them. Throws when fewer than two distinct bids
/// survive.
MonotoneCurve curve_from_pairs(std::vector<BidObservation> observations,
                               FitMethod method,
                               CurveTarget target = CurveTarget::kSpend);

/// Discretized eCPM p.d.f. over equal-width buckets together with the
/// cumulative conditional first-moment table g_j (bucket midpoints carry the
/// mass).
struct EcpmHistogram {
  std::vector<double> edges;          // z_0 .. z_N
  std::vector<double> probabilities;  // p_1 .. p_N, sum to 1
  std::vector<double> midpoints;
  std::vector<double> cum_mean;       // g_j, non-decreasing
};

EcpmHistogram histogram_fit(const std::vector<double>& samples, int buckets);

/// Picks the bucket whose g_k is nearest the target cost per impression and
/// returns its midpoint divided by the average CTR (a bid per click).
double histogram_bid(const EcpmHistogram& histogram,
                     double target_cost_per_impression, double avg_ctr);

/// Receding-horizon cost-cap search. f and g must already be normalized to
/// the horizon. Returns the largest grid bid whose projected spend fits the
/// horizon budget NR/TR * B_rem and whose projected cost per conversion
/// respects B_rem / (B/C - NC); falls back to bid_lo when nothing is
/// feasible.
double mpc_costcap_bid(const MonotoneCurve& f, const MonotoneCurve& g,
                       double budget_remaining, double budget_total,
                       double cap, double conversions_so_far,
                       double total_remaining_requests,
                       double horizon_requests, double bid_lo, double bid_hi,
                       double bid_step);

/// Target-CPA deviation repayment. Scans bids and repayment windows for the
/// largest bid whose projected deviation offset R(b) * Omega/dt + D crosses
/// zero. When the offset never changes sign: always negative takes the
/// largest bid among its maximizers, always positive the smallest bid among
/// its minimizers. f and g are normalized to one pacing interval.
double mpc_targetcpa_bid(const MonotoneCurve& f, const MonotoneCurve& g,
                         double spend_so_far, double conversions_so_far,
                         double budget_total, double target_cpa,
                         double pacing_dt, double remaining_lifetime,
                         double bid_lo, double bid_hi, double bid_step,
                         double zero_tol = 1e-9);

}  // namespace bidpace

#endif  // BIDPACE_MPC_HPP
