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

#include "bidpace/shading.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace bidpace {

WinProbModel::WinProbModel(double intercept, std::vector<double> weights,
                           double log_bid_coef)
    : intercept_(intercept),
      weights_(std::move(weights)),
      log_bid_coef_(log_bid_coef) {
  if (!(log_bid_coef_ > 0.0)) {
    throw std::invalid_argument(
        "win model: the log-bid coefficient must be positive");
  }
}

WinProbModel::Eval WinProbModel::eval(std::span<const double> features,
                                      double bid) const {
  if (bid <= 0.0) throw std::domain_error("win model: bid must be > 0");
  if (features.size() != weights_.size()) {
    throw std::domain_error("win model: feature count mismatch");
  }
  double z = intercept_ + log_bid_coef_ * std::log(bid);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    z += weights_[i] * features[i];
  }
  double p = 1.0 / (1.0 + std::exp(-z));
  return {p, p * (1.0 - p) * log_bid_coef_ / bid};
}

namespace {

SolveOptions resolve_bracket(SolveOptions options, double rhs) {
  if (options.bracket_hi <= 0.0) {
    options.bracket_hi = std::max(options.bracket_lo * 2.0, 1e4 * rhs);
  }
  if (!(options.bracket_lo > 0.0) ||
      options.bracket_lo >= options.bracket_hi) {
    throw std::invalid_argument("solver: invalid bracket");
  }
  return options;
}

/// Binary search for residual(b) = 0 where residual is strictly increasing.
double solve_monotone(const std::function<double(double)>& residual,
                      const SolveOptions& options) {
  double lo = options.bracket_lo;
  double hi = options.bracket_hi;
  if (residual(lo) > 0.0) return lo;
  if (residual(hi) < 0.0) return hi;
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < options.max_iter; ++i) {
    mid = 0.5 * (lo + hi);
    double r = residual(mid);
    if (std::fabs(r) < options.tol) return mid;
    if (r > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return mid;
}

double solve_stationarity(const WinProbModel& model,
                          std::span<const double> features, double rhs,
                          SolveOptions options) {
  options = resolve_bracket(options, rhs);
  auto residual = [&](double b) {
    auto e = model.eval(features, b);
    return b + e.p / e.dp - rhs;
  };
  return solve_monotone(residual, options);
}

}  // namespace

double solve_welfare_bid(const WinProbModel& model,
                         std::span<const double> features, double lambda,
                         const SolveOptions& options) {
  if (lambda <= 0.0) throw std::invalid_argument("welfare: lambda must be > 0");
  return solve_stationarity(model, features, 1.0 / lambda, options);
}

double solve_utility_bid(const WinProbModel& model,
                         std::span<const double> features, double value,
                         double lambda, const SolveOptions& options) {
  if (value <= 0.0) throw std::invalid_argument("utility: value must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("utility: lambda must be >= 0");
  return solve_stationarity(model, features, value / (1.0 + lambda), options);
}

double solve_margin_bid(const WinProbModel& model,
                        std::span<const double> features, double lambda,
                        double markup, const SolveOptions& options) {
  if (lambda <= 0.0) throw std::invalid_argument("margin: lambda must be > 0");
  if (markup < 0.0) throw std::invalid_argument("margin: markup must be >= 0");
  return solve_stationarity(model, features, 1.0 / (lambda * (1.0 + markup)),
                            options);
}

AuctionResponse fpa_response(const WinProbModel& model,
                             std::vector<double> features) {
  auto shared = std::make_shared<std::vector<double>>(std::move(features));
  AuctionResponse response;
  response.win_prob = [model, shared](double b) {
    return model.eval(*shared, b).p;
  };
  response.win_prob_deriv = [model, shared](double b) {
    return model.eval(*shared, b).dp;
  };
  response.expected_cost = [model, shared](double b) {
    return model.eval(*shared, b).p * b;
  };
  response.cost_deriv = [model, shared](double b) {
    auto e = model.eval(*shared, b);
    return e.p + e.dp * b;
  };
  return response;
}

AuctionResponse dsic_response(std::function<double(double)> win_prob,
                              std::function<double(double)> win_prob_deriv) {
  AuctionResponse response;
  response.win_prob = win_prob;
  response.win_prob_deriv = win_prob_deriv;
  response.expected_cost = [win_prob, win_prob_deriv](double b) {
    // H(b) = b G(b) - int_0^b G, evaluated by coarse quadrature; callers only
    // need the derivative identity below, so this stays an auxiliary curve.
    const int kSteps = 256;
    double h = b / kSteps;
    double integral = 0.0;
    for (int i = 0; i < kSteps; ++i) {
      integral += win_prob((i + 0.5) * h) * h;
    }
    return b * win_prob(b) - integral;
  };
  response.cost_deriv = [win_prob_deriv](double b) {
    return b * win_prob_deriv(b);  // h = g * b for any DSIC payment rule
  };
  return response;
}

double solve_general_bid(const AuctionResponse& response, double pctr,
                         double lambda, const SolveOptions& options_in) {
  if (pctr <= 0.0 || lambda <= 0.0) {
    throw std::invalid_argument("general: pctr and lambda must be > 0");
  }
  double target = pctr / lambda;
  SolveOptions options = resolve_bracket(options_in, target);
  auto ratio = [&](double b) {
    double g = response.win_prob_deriv(b);
    double h = response.cost_deriv(b);
    if (g <= 0.0) throw std::domain_error("general: g(b) must be positive");
    return h / g;
  };
  // When the target is its own preimage (DSIC: h/g is the identity) return it
  // without bisection error.
  if (target >= options.bracket_lo && target <= options.bracket_hi) {
    if (std::fabs(ratio(target) - target) <=
        1e-12 * std::max(1.0, std::fabs(target))) {
      return target;
    }
  }
  auto residual = [&](double b) { return ratio(b) - target; };
  return solve_monotone(residual, options);
}

double fpa_lambda_step(double lambda, const StepSizeSchedule& schedule,
                       std::int64_t step, double budget, double horizon,
                       double realized_expected_cost, double lambda_floor) {
  if (horizon <= 0.0) throw std::invalid_argument("fpa: horizon must be > 0");
  double eps = schedule_value(schedule, step);
  double grad = budget / horizon - realized_expected_cost;
  return std::max(lambda_floor, lambda - eps * grad);
}

}  // namespace bidpace
