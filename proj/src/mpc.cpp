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

#include "bidpace/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bidpace {

std::vector<BidObservation> lis_extract(
    const std::vector<BidObservation>& observations) {
  if (observations.empty()) {
    throw std::invalid_argument("lis: at least one observation required");
  }
  std::size_t n = observations.size();
  std::vector<std::size_t> tails;           // index with smallest tail spend per length
  std::vector<std::size_t> predecessor(n);
  std::vector<std::size_t> first_of_length;  // earliest index reaching each length
  for (std::size_t i = 0; i < n; ++i) {
    double s = observations[i].spend;
    // First tail strictly greater than s: equal spends extend the run.
    auto it = std::upper_bound(
        tails.begin(), tails.end(), s,
        [&](double value, std::size_t idx) { return value < observations[idx].spend; });
    std::size_t pos = static_cast<std::size_t>(it - tails.begin());
    predecessor[i] = pos > 0 ? tails[pos - 1] : n;
    if (it == tails.end()) {
      tails.push_back(i);
      first_of_length.push_back(i);
    } else {
      *it = i;
    }
  }
  // Backtrack from the earliest index that reached the maximal length so ties
  // resolve to the first subsequence.
  std::vector<BidObservation> result;
  std::size_t idx = first_of_length.back();
  while (idx != n) {
    result.push_back(observations[idx]);
    idx = predecessor[idx];
  }
  std::reverse(result.begin(), result.end());
  return result;
}

std::vector<double> pava_fit(const std::vector<double>& values,
                             const std::vector<double>& weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("pava: values and weights differ in length");
  }
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("pava: weights must be > 0");
  }
  std::size_t n = values.size();
  std::vector<double> block_value;
  std::vector<double> block_weight;
  std::vector<std::size_t> block_size;
  for (std::size_t i = 0; i < n; ++i) {
    block_value.push_back(values[i]);
    block_weight.push_back(weights[i]);
    block_size.push_back(1);
    // Merge backwards while the tail violates monotonicity.
    while (block_value.size() > 1 &&
           block_value[block_value.size() - 2] > block_value.back()) {
      double w = block_weight[block_weight.size() - 2] + block_weight.back();
      double v = (block_weight[block_weight.size() - 2] *
                      block_value[block_value.size() - 2] +
                  block_weight.back() * block_value.back()) /
                 w;
      std::size_t s = block_size[block_size.size() - 2] + block_size.back();
      block_value.pop_back();
      block_weight.pop_back();
      block_size.pop_back();
      block_value.back() = v;
      block_weight.back() = w;
      block_size.back() = s;
    }
  }
  std::vector<double> fit;
  fit.reserve(n);
  for (std::size_t b = 0; b < block_value.size(); ++b) {
    fit.insert(fit.end(), block_size[b], block_value[b]);
  }
  return fit;
}

MonotoneCurve MonotoneCurve::from_knots(std::vector<double> xs,
                                        std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("curve: need >= 2 knots of equal length");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] <= xs[i - 1]) {
      throw std::invalid_argument("curve: knot x values must be increasing");
    }
    if (ys[i] < ys[i - 1]) {
      throw std::invalid_argument("curve: knot y values must be non-decreasing");
    }
  }
  MonotoneCurve curve;
  curve.xs_ = std::move(xs);
  curve.ys_ = std::move(ys);
  return curve;
}

double MonotoneCurve::eval(double x) const {
  std::size_t n = xs_.size();
  double y;
  if (x <= xs_.front()) {
    double slope = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
    y = ys_[0] + slope * (x - xs_[0]);
  } else if (x >= xs_.back()) {
    double slope = (ys_[n - 1] - ys_[n - 2]) / (xs_[n - 1] - xs_[n - 2]);
    y = ys_[n - 1] + slope * (x - xs_[n - 1]);
  } else {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    y = ys_[i] + t * (ys_[i + 1] - ys_[i]);
  }
  return std::max(0.0, y);
}

double MonotoneCurve::invert(double y) const {
  std::size_t n = xs_.size();
  if (y < ys_.front()) {
    double dy = ys_[1] - ys_[0];
    if (dy <= 0.0) return std::max(0.0, xs_.front());
    double x = xs_[0] + (y - ys_[0]) / dy * (xs_[1] - xs_[0]);
    return std::max(0.0, x);  // extrapolated bids clamp at zero
  }
  if (y > ys_.back()) {
    double dy = ys_[n - 1] - ys_[n - 2];
    if (dy <= 0.0) return xs_.back();
    double x = xs_[n - 1] + (y - ys_[n - 1]) / dy * (xs_[n - 1] - xs_[n - 2]);
    return std::max(0.0, x);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (y <= ys_[i + 1]) {
      if (y <= ys_[i]) return xs_[i];  // flat block: leftmost preimage
      double t = (y - ys_[i]) / (ys_[i + 1] - ys_[i]);
      return xs_[i] + t * (xs_[i + 1] - xs_[i]);
    }
  }
  return xs_.back();
}

MonotoneCurve MonotoneCurve::scaled(double factor) const {
  if (factor < 0.0) throw std::invalid_argument("curve: scale must be >= 0");
  MonotoneCurve curve;
  curve.xs_ = xs_;
  curve.ys_ = ys_;
  for (double& y : curve.ys_) y *= factor;
  return curve;
}

MonotoneCurve curve_from_pairs(std::vector<BidObservation> observations,
                               FitMethod method, CurveTarget target) {
  if (observations.empty()) {
    throw std::invalid_argument("curve: no observations");
  }
  auto value_of = [target](const BidObservation& o) {
    return target == CurveTarget::kSpend ? o.spend : o.conversions;
  };
  std::stable_sort(observations.begin(), observations.end(),
                   [](const BidObservation& a, const BidObservation& b) {
                     return a.bid < b.bid;
                   });
  std::vector<double> xs;
  std::vector<double> ys;
  if (method == FitMethod::kLis) {
    std::vector<BidObservation> ordered = observations;
    if (target == CurveTarget::kConversions) {
      for (auto& o : ordered) o.spend = o.conversions;
    }
    std::vector<BidObservation> kept = lis_extract(ordered);
    for (const auto& o : kept) {
      if (!xs.empty() && o.bid == xs.back()) {
        ys.back() = std::max(ys.back(), o.spend);
        continue;
      }
      xs.push_back(o.bid);
      ys.push_back(o.spend);
    }
  } else {
    // Collapse duplicate bids first; the duplicate count becomes the weight.
    std::vector<double> values;
    std::vector<double> weights;
    for (const auto& o : observations) {
      double v = value_of(o);
      if (!xs.empty() && o.bid == xs.back()) {
        double w = weights.back();
        values.back() = (values.back() * w + v) / (w + 1.0);
        weights.back() = w + 1.0;
        continue;
      }
      xs.push_back(o.bid);
      values.push_back(v);
      weights.push_back(1.0);
    }
    ys = pava_fit(values, weights);
  }
  if (xs.size() < 2) {
    throw std::invalid_argument("curve: need >= 2 distinct bids");
  }
  return MonotoneCurve::from_knots(std::move(xs), std::move(ys));
}

EcpmHistogram histogram_fit(const std::vector<double>& samples, int buckets) {
  if (samples.empty()) throw std::invalid_argument("histogram: no samples");
  if (buckets < 1) throw std::invalid_argument("histogram: buckets must be >= 1");
  auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it;
  double hi = *hi_it;
  EcpmHistogram hist;
  if (lo == hi) {
    // Degenerate sample: one full bucket around the single value.
    hist.edges = {lo, hi};
    hist.probabilities = {1.0};
    hist.midpoints = {lo};
    hist.cum_mean = {lo};
    return hist;
  }
  double width = (hi - lo) / buckets;
  hist.edges.resize(buckets + 1);
  for (int j = 0; j <= buckets; ++j) hist.edges[j] = lo + width * j;
  hist.edges.back() = hi;
  std::vector<double> counts(buckets, 0.0);
  for (double v : samples) {
    int j = std::min<int>(buckets - 1,
                          static_cast<int>((v - lo) / width));
    counts[j] += 1.0;
  }
  hist.probabilities.resize(buckets);
  hist.midpoints.resize(buckets);
  hist.cum_mean.resize(buckets);
  double total = static_cast<double>(samples.size());
  double mass = 0.0;
  double moment = 0.0;
  for (int j = 0; j < buckets; ++j) {
    hist.probabilities[j] = counts[j] / total;
    hist.midpoints[j] = 0.5 * (hist.edges[j] + hist.edges[j + 1]);
    mass += hist.probabilities[j];
    moment += hist.midpoints[j] * hist.probabilities[j];
    hist.cum_mean[j] = mass > 0.0 ? moment / mass : hist.midpoints[j];
  }
  return hist;
}

double histogram_bid(const EcpmHistogram& histogram,
                     double target_cost_per_impression, double avg_ctr) {
  if (avg_ctr <= 0.0) throw std::invalid_argument("histogram: ctr must be > 0");
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < histogram.cum_mean.size(); ++j) {
    double gap = std::fabs(histogram.cum_mean[j] - target_cost_per_impression);
    if (gap < best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return histogram.midpoints[best] / avg_ctr;
}

namespace {

void check_grid(double bid_lo, double bid_hi, double bid_step) {
  if (!(bid_lo < bid_hi) || bid_step <= 0.0) {
    throw std::invalid_argument("mpc: invalid bid grid");
  }
}

}  // namespace

double mpc_costcap_bid(const MonotoneCurve& f, const MonotoneCurve& g,
                       double budget_remaining, double budget_total,
                       double cap, double conversions_so_far,
                       double total_remaining_requests,
                       double horizon_requests, double bid_lo, double bid_hi,
                       double bid_step) {
  check_grid(bid_lo, bid_hi, bid_step);
  if (cap <= 0.0 || total_remaining_requests <= 0.0) {
    throw std::invalid_argument("mpc: cap and remaining requests must be > 0");
  }
  double horizon_budget =
      horizon_requests / total_remaining_requests * budget_remaining;
  double remaining_goal = budget_total / cap - conversions_so_far;
  bool cap_binds = remaining_goal > 0.0;
  double horizon_cap = cap_binds
                           ? budget_remaining / remaining_goal
                           : std::numeric_limits<double>::infinity();

  double best = bid_lo;
  // Full scan: monotonicity of noisy fitted curves is not trusted enough for
  // an early exit.
  for (double b = bid_lo; b <= bid_hi + 0.5 * bid_step; b += bid_step) {
    double bid = std::min(b, bid_hi);
    double spend = f.eval(bid);
    double conv = g.eval(bid);
    bool within_budget = spend <= horizon_budget;
    bool within_cap = !cap_binds || spend <= horizon_cap * conv;
    if (within_budget && within_cap) best = std::max(best, bid);
  }
  return best;
}

double mpc_targetcpa_bid(const MonotoneCurve& f, const MonotoneCurve& g,
                         double spend_so_far, double conversions_so_far,
                         double budget_total, double target_cpa,
                         double pacing_dt, double remaining_lifetime,
                         double bid_lo, double bid_hi, double bid_step,
                         double zero_tol) {
  check_grid(bid_lo, bid_hi, bid_step);
  if (target_cpa <= 0.0 || pacing_dt <= 0.0 || remaining_lifetime < pacing_dt) {
    throw std::invalid_argument("mpc: bad target-CPA configuration");
  }
  (void)budget_total;  // remaining budget does not enter the repayment search
  double deviation = spend_so_far - target_cpa * conversions_so_far;

  double best_zero = -std::numeric_limits<double>::infinity();
  double best_negative_p = -std::numeric_limits<double>::infinity();
  double best_negative_bid = bid_lo;
  double best_positive_p = std::numeric_limits<double>::infinity();
  double best_positive_bid = bid_hi;
  bool any_negative = false;
  bool any_positive = false;

  for (double b = bid_lo; b <= bid_hi + 0.5 * bid_step; b += bid_step) {
    double bid = std::min(b, bid_hi);
    double repay_rate = f.eval(bid) - target_cpa * g.eval(bid);
    double p_min = std::numeric_limits<double>::infinity();
    double p_max = -std::numeric_limits<double>::infinity();
    for (double omega = pacing_dt; omega <= remaining_lifetime + 0.5 * pacing_dt;
         omega += pacing_dt) {
      double w = std::min(omega, remaining_lifetime);
      double projected = repay_rate * (w / pacing_dt) + deviation;
      p_min = std::min(p_min, projected);
      p_max = std::max(p_max, projected);
    }
    // A window with a zero crossing (or a value within tolerance) means this
    // bid can fully repay the deviation.
    if (p_min <= zero_tol && p_max >= -zero_tol) {
      best_zero = std::max(best_zero, bid);
    } else if (p_max < 0.0) {
      any_negative = true;
      if (p_max > best_negative_p ||
          (p_max == best_negative_p && bid > best_negative_bid)) {
        best_negative_p = p_max;
        best_negative_bid = bid;
      }
    } else {
      any_positive = true;
      if (p_min < best_positive_p ||
          (p_min == best_positive_p && bid < best_positive_bid)) {
        best_positive_p = p_min;
        best_positive_bid = bid;
      }
    }
  }
  if (best_zero > -std::numeric_limits<double>::infinity()) return best_zero;
  if (any_negative && !any_positive) return best_negative_bid;
  if (any_positive && !any_negative) return best_positive_bid;
  // Mixed signs without a crossing can only straddle between grid bids; the
  // under-repaying side is the safe choice.
  return any_negative ? best_negative_bid : bid_lo;
}

}  // namespace bidpace
