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

#ifndef BIDPACE_SHADING_HPP
#define BIDPACE_SHADING_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bidpace/core.hpp"

namespace bidpace {

/// Sigmoid win-probability model P(b) = sigmoid(w0 + w.x + beta * ln b).
/// beta must be positive; that is exactly the log-concavity condition the
/// stationarity solvers rely on.
class WinProbModel {
 public:
  WinProbModel(double intercept, std::vector<double> weights,
               double log_bid_coef);

  struct Eval {
    double p = 0.0;   // win probability
    double dp = 0.0;  // derivative d P / d b = P (1-P) beta / b
  };

  /// Throws std::domain_error when bid <= 0 or the feature count mismatches.
  Eval eval(std::span<const double> features, double bid) const;

  double intercept() const { return intercept_; }
  double log_bid_coef() const { return log_bid_coef_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  double intercept_;
  std::vector<double> weights_;
  double log_bid_coef_;
};

struct SolveOptions {
  double bracket_lo = 1e-4;
  double bracket_hi = 0.0;  // 0 means 1e4 * RHS
  double tol = 1e-8;
  int max_iter = 100;
};

/// Root of b + P(b)/P'(b) = 1/lambda by binary search on the monotone
/// residual; clamps to the bracket when the RHS falls outside its range.
double solve_welfare_bid(const WinProbModel& model,
                         std::span<const double> features, double lambda,
                         const SolveOptions& options = {});

/// Same residual with RHS v / (1 + lambda).
double solve_utility_bid(const WinProbModel& model,
                         std::span<const double> features, double value,
                         double lambda, const SolveOptions& options = {});

/// Same residual with RHS 1 / (lambda * (1 + markup)).
double solve_margin_bid(const WinProbModel& model,
                        std::span<const double> features, double lambda,
                        double markup, const SolveOptions& options = {});

/// Win-probability and expected-cost curves of an arbitrary auction, with
/// derivatives.
struct AuctionResponse {
  std::function<double(double)> win_prob;        // G(b)
  std::function<double(double)> win_prob_deriv;  // g(b)
  std::function<double(double)> expected_cost;   // H(b)
  std::function<double(double)> cost_deriv;      // h(b)
};

/// First-price response G = P, H = P * b for a sigmoid model.
AuctionResponse fpa_response(const WinProbModel& model,
                             std::vector<double> features);

/// Any dominant-strategy incentive-compatible auction: the payment identity
/// forces h/g = b, so only the win curve is needed.
AuctionResponse dsic_response(std::function<double(double)> win_prob,
                              std::function<double(double)> win_prob_deriv);

/// Solves (h/g)(b) = pctr / lambda by monotone root-finding; boundary when
/// the target leaves the ratio's range over the bracket.
double solve_general_bid(const AuctionResponse& response, double pctr,
                         double lambda, const SolveOptions& options = {});

/// Dual step under any auction: lambda <- lambda - eps_t (B/T - H(b)),
/// projected onto [lambda_floor, inf).
double fpa_lambda_step(double lambda, const StepSizeSchedule& schedule,
                       std::int64_t step, double budget, double horizon,
                       double realized_expected_cost,
                       double lambda_floor = 1e-6);

}  // namespace bidpace

#endif  // BIDPACE_SHADING_HPP
