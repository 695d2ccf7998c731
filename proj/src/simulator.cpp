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

#include "bidpace/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <stdexcept>

#include "bidpace/allocation.hpp"
#include "bidpace/auctions.hpp"
#include "bidpace/brand.hpp"
#include "bidpace/dogd.hpp"
#include "bidpace/evenpacing.hpp"
#include "bidpace/math.hpp"
#include "bidpace/mpc.hpp"
#include "bidpace/throttle.hpp"

namespace bidpace::sim {

std::vector<AuctionOpportunity> generate_stream(const MarketSpec& market,
                                                const PacingClock& clock,
                                                std::int64_t horizon) {
  if (horizon <= 0) throw std::invalid_argument("stream: horizon must be > 0");
  std::vector<double> supply = market.supply;
  if (supply.empty()) {
    supply.assign(static_cast<std::size_t>(clock.num_buckets()), 1.0);
  }
  if (static_cast<std::int64_t>(supply.size()) != clock.num_buckets()) {
    throw std::invalid_argument("stream: supply size must match the buckets");
  }
  double total = 0.0;
  for (double s : supply) {
    if (s < 0.0) throw std::invalid_argument("stream: supply must be >= 0");
    total += s;
  }
  if (total <= 0.0) throw std::invalid_argument("stream: empty supply");

  std::vector<double> cumulative(supply.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < supply.size(); ++i) {
    acc += supply[i] / total;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  Rng rng(market.seed);
  double bucket_len = static_cast<double>(clock.bucket_dtau());
  std::vector<AuctionOpportunity> stream;
  stream.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 0; t < horizon; ++t) {
    double u = rng.uniform01();
    std::size_t bucket =
        std::lower_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin();
    AuctionOpportunity opp;
    opp.time = (static_cast<double>(bucket) + rng.uniform01()) * bucket_len;
    opp.pctr = std::min(1.0, rng.lognormal(market.pctr_mu, market.pctr_sigma));
    opp.competing_ecpm = rng.lognormal(market.ecpm_mu, market.ecpm_sigma);
    if (market.ladder_depth > 1) {
      opp.ecpm_ladder.resize(static_cast<std::size_t>(market.ladder_depth));
      opp.ecpm_ladder[0] = opp.competing_ecpm;
      for (int j = 1; j < market.ladder_depth; ++j) {
        opp.ecpm_ladder[static_cast<std::size_t>(j)] =
            rng.lognormal(market.ecpm_mu, market.ecpm_sigma);
      }
      std::sort(opp.ecpm_ladder.begin(), opp.ecpm_ladder.end(),
                std::greater<>());
      opp.competing_ecpm = opp.ecpm_ladder.front();
    }
    stream.push_back(std::move(opp));
  }
  std::stable_sort(stream.begin(), stream.end(),
                   [](const AuctionOpportunity& a, const AuctionOpportunity& b) {
                     return a.time < b.time;
                   });
  for (std::size_t i = 0; i < stream.size(); ++i) {
    stream[i].index = static_cast<std::int64_t>(i);
  }
  return stream;
}

namespace {

double objective_cap(const CampaignConfig& config) {
  if (const auto* cc = std::get_if<CostCap>(&config.objective)) return cc->cap_c;
  if (const auto* tc = std::get_if<TargetCpa>(&config.objective)) return tc->cap_c;
  return 0.0;
}

void check_pairing(const CampaignConfig& config,
                   const ControllerSettings& settings) {
  bool needs_cap = settings.kind == ControllerKind::kDogdCostCap ||
                   settings.kind == ControllerKind::kDogdCostCapBatch ||
                   settings.kind == ControllerKind::kDualPid ||
                   settings.kind == ControllerKind::kCostMinPid ||
                   settings.kind == ControllerKind::kMpcCostCap ||
                   settings.kind == ControllerKind::kMpcTargetCpa;
  if (needs_cap && objective_cap(config) <= 0.0) {
    throw std::invalid_argument(
        "run: cost-cap controllers need a CostCap or TargetCPA objective");
  }
  bool is_gd = settings.kind == ControllerKind::kGd;
  bool gd_objective =
      std::holds_alternative<GuaranteedDelivery>(config.objective);
  if (is_gd != gd_objective) {
    throw std::invalid_argument(
        "run: the GD controller pairs only with the GuaranteedDelivery "
        "objective");
  }
}

// Mutable controller bundle for the pacing loop.
struct ControllerRuntime {
  DualState dual;                  // dogd family
  PidChannel pid_channel;          // pid md
  DualPidState dual_pid;           // dual pid
  ThrottleState throttle;          // throttle
  IntraPeriodState even{1.0, 1, 1.0};
  GdState gd;
  double bid_per_click = 1.0;
  // MPC landscape memory.
  std::deque<BidObservation> observations;
  double even_lambda = 1.0;  // effective-budget dual for the even-MPC rule
};

double current_lambda(const ControllerRuntime& rt,
                      const ControllerSettings& settings) {
  switch (settings.kind) {
    case ControllerKind::kDogdMd:
    case ControllerKind::kDogdMdBatch:
    case ControllerKind::kDogdCostCap:
    case ControllerKind::kDogdCostCapBatch:
      return rt.dual.lambda;
    case ControllerKind::kDualPid:
      return rt.dual_pid.lambda;
    case ControllerKind::kEvenMpc:
      return rt.even_lambda;
    case ControllerKind::kGd:
      return rt.gd.lambda;
    default:
      return 0.0;
  }
}

double current_mu(const ControllerRuntime& rt,
                  const ControllerSettings& settings) {
  switch (settings.kind) {
    case ControllerKind::kDogdCostCap:
    case ControllerKind::kDogdCostCapBatch:
      return rt.dual.mu;
    case ControllerKind::kDualPid:
      return rt.dual_pid.mu;
    default:
      return 0.0;
  }
}

// The experiment aggressiveness hook applies to the controllers whose bid is
// pctr * bid_per_click; per-auction dual steppers and GD derive bids from
// their own state.
bool uses_multiplier(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kDogdMd:
    case ControllerKind::kDogdCostCap:
    case ControllerKind::kEvenMpc:
    case ControllerKind::kGd:
      return false;
    default:
      return true;
  }
}

}  // namespace

RunReport run_campaign(const CampaignConfig& config,
                       const ControllerSettings& settings,
                       const MarketSpec& market, const PacingClock& clock,
                       const std::vector<AuctionOpportunity>& stream) {
  config.validate();
  check_pairing(config, settings);

  double budget = config.budget;
  double horizon = static_cast<double>(config.horizon);
  double cap = objective_cap(config);

  std::vector<double> supply = market.supply;
  if (supply.empty()) {
    supply.assign(static_cast<std::size_t>(clock.num_buckets()), 1.0);
  }
  TargetSpendPlan plan = allocate_targets(budget, SupplyForecast{supply});
  double supply_total = 0.0;
  for (double s : supply) supply_total += s;

  ControllerRuntime rt;
  rt.dual.lambda = settings.lambda_init;
  rt.dual.schedule = settings.schedule;
  rt.dual.normalize_gradients = settings.normalize_gradients;
  rt.dual_pid.lambda = settings.lambda_init;
  rt.dual_pid.mu = cap > 0.0 ? 1.0 / cap : 0.0;
  rt.throttle.adjust_rate = settings.throttle_adjust;
  rt.even = IntraPeriodState(settings.lambda_init, settings.periods,
                             settings.sigma_cap);
  rt.even_lambda = settings.lambda_init;
  if (const auto* gd = std::get_if<GuaranteedDelivery>(&config.objective)) {
    rt.gd.goal = gd->goal_g;
    rt.gd.inventory = horizon;
    rt.gd.lambda = settings.lambda_init;
  }
  rt.bid_per_click = settings.kind == ControllerKind::kFixedBid ||
                             settings.kind == ControllerKind::kThrottle
                         ? settings.fixed_bid_per_click
                         : 1.0 / settings.lambda_init;

  PeriodPartition periods(settings.periods,
                          static_cast<double>(clock.end_of_day()));
  std::vector<double> period_spend(static_cast<std::size_t>(settings.periods),
                                   0.0);
  double period_cap = settings.sigma_cap * budget;

  // Throttle draws come after stream generation on the same seed.
  Rng rng(market.seed + 0x9e3779b97f4a7c15ULL);

  SpendLedger ledger;
  RunReport report;
  report.trace.reserve(static_cast<std::size_t>(clock.num_updates()));

  std::size_t cursor = 0;
  bool stopped = false;
  double cumulative_target = 0.0;

  for (std::int64_t k = 0; k < clock.num_updates() && !stopped; ++k) {
    double interval_end = static_cast<double>((k + 1) * clock.update_dt());
    double target = interval_target(plan, clock, k);
    cumulative_target += target;

    while (cursor < stream.size() && stream[cursor].time < interval_end) {
      const AuctionOpportunity& opp = stream[cursor];
      if (ledger.spend() >= budget &&
          !std::holds_alternative<GuaranteedDelivery>(config.objective)) {
        stopped = true;  // budget check strictly before settlement
        break;
      }
      ++cursor;

      std::int64_t period = periods.period_of(opp.time);
      if (settings.kind == ControllerKind::kEvenMpc &&
          period_spend[static_cast<std::size_t>(period)] >= period_cap) {
        ledger.record(0.0, 0.0, 0.0, 1.0);  // allowance exhausted, sit out
        continue;
      }
      if (settings.kind == ControllerKind::kThrottle &&
          !throttle_decide(rt.throttle, rng.uniform01())) {
        ledger.record(0.0, 0.0, 0.0, 1.0);
        continue;
      }

      double bid_per_impression = 0.0;
      switch (settings.kind) {
        case ControllerKind::kDogdMd:
          bid_per_impression = dogd_md_step(rt.dual, opp, budget, horizon);
          rt.bid_per_click = 1.0 / rt.dual.lambda;
          break;
        case ControllerKind::kDogdCostCap:
          bid_per_impression =
              dogd_costcap_step(rt.dual, opp, budget, horizon, cap);
          rt.bid_per_click =
              (1.0 + rt.dual.mu * cap) / (rt.dual.lambda + rt.dual.mu);
          break;
        case ControllerKind::kEvenMpc:
          bid_per_impression = opp.pctr * rt.bid_per_click;
          break;
        case ControllerKind::kGd:
          bid_per_impression = rt.gd.lambda;
          break;
        default:
          bid_per_impression =
              opp.pctr * rt.bid_per_click * settings.bid_multiplier;
          break;
      }

      if (settings.kind == ControllerKind::kGd) {
        bool won = gd_step(rt.gd, opp.competing_ecpm, schedule_value(
                                settings.schedule, opp.index + 1));
        double cost = won ? opp.competing_ecpm : 0.0;
        ledger.record(cost, won ? 1.0 : 0.0, won ? 1.0 : 0.0, 1.0);
        report.max_single_cost = std::max(report.max_single_cost, cost);
        continue;
      }

      auto outcome = settle_spa(bid_per_impression, opp.competing_ecpm);
      double conversions = outcome.won ? opp.pctr : 0.0;
      ledger.record(outcome.cost, conversions, outcome.won ? 1.0 : 0.0, 1.0);
      period_spend[static_cast<std::size_t>(period)] += outcome.cost;
      report.max_single_cost = std::max(report.max_single_cost, outcome.cost);
    }

    const SpendLedger::Interval& open = ledger.open_interval();
    double interval_requests = open.requests;
    double interval_spend = open.spend;
    double interval_conversions = open.conversions;
    double interval_impressions = open.impressions;

    switch (settings.kind) {
      case ControllerKind::kThrottle:
        throttle_update(rt.throttle, ledger.spend(), cumulative_target);
        break;
      case ControllerKind::kPidMd:
        if (target > 0.0) {
          rt.bid_per_click = pid_md_step(settings.gains, rt.pid_channel,
                                         interval_spend, target,
                                         rt.bid_per_click);
        }
        break;
      case ControllerKind::kCostMinPid: {
        if (target > 0.0) {
          rt.bid_per_click = pid_md_step(settings.gains, rt.pid_channel,
                                         interval_spend, target,
                                         rt.bid_per_click);
        }
        double bound =
            cost_min_bound(budget, cap, ledger, settings.cost_min_sigma);
        rt.bid_per_click = std::min(rt.bid_per_click, bound);
        break;
      }
      case ControllerKind::kDogdMdBatch:
        rt.bid_per_click = dogd_md_batch(rt.dual, interval_requests,
                                         interval_spend, budget, horizon);
        break;
      case ControllerKind::kDogdCostCapBatch:
        rt.bid_per_click =
            dogd_costcap_batch(rt.dual, interval_requests, interval_spend,
                               interval_conversions, budget, horizon, cap);
        break;
      case ControllerKind::kDualPid:
        if (target > 0.0) {
          dual_pid_step(rt.dual_pid, settings.gains, settings.mu_gains,
                        interval_spend, interval_conversions, target, cap,
                        1.0);
          rt.bid_per_click = (1.0 + rt.dual_pid.mu * cap) /
                             (rt.dual_pid.lambda + rt.dual_pid.mu);
        }
        break;
      case ControllerKind::kMpcCostCap:
      case ControllerKind::kMpcTargetCpa: {
        rt.observations.push_back(BidObservation{
            rt.bid_per_click, interval_spend, interval_conversions});
        while (rt.observations.size() >
               static_cast<std::size_t>(settings.mpc_window)) {
          rt.observations.pop_front();
        }
        double distinct_lo = rt.observations.front().bid;
        double distinct_hi = distinct_lo;
        for (const auto& o : rt.observations) {
          distinct_lo = std::min(distinct_lo, o.bid);
          distinct_hi = std::max(distinct_hi, o.bid);
        }
        if (distinct_hi <= distinct_lo * (1.0 + 1e-9)) {
          // Not enough landscape variation yet: nudge to explore.
          rt.bid_per_click *= interval_spend < target ? 1.05 : 0.95;
          break;
        }
        std::vector<BidObservation> obs(rt.observations.begin(),
                                        rt.observations.end());
        MonotoneCurve f = curve_from_pairs(obs, FitMethod::kPava,
                                           CurveTarget::kSpend);
        MonotoneCurve g = curve_from_pairs(obs, FitMethod::kPava,
                                           CurveTarget::kConversions);
        double lo = rt.bid_per_click * (1.0 - settings.mpc_band);
        double hi = rt.bid_per_click * (1.0 + settings.mpc_band);
        double step = (hi - lo) / (settings.mpc_grid_points - 1);
        double remaining_intervals =
            static_cast<double>(clock.num_updates() - (k + 1));
        if (remaining_intervals < 1.0) break;
        if (settings.kind == ControllerKind::kMpcCostCap) {
          rt.bid_per_click = mpc_costcap_bid(
              f, g, budget - ledger.spend(), budget, cap,
              ledger.conversions(),
              horizon / static_cast<double>(clock.num_updates()) *
                  remaining_intervals,
              horizon / static_cast<double>(clock.num_updates()), lo, hi,
              step);
        } else {
          rt.bid_per_click = mpc_targetcpa_bid(
              f, g, ledger.spend(), ledger.conversions(), budget, cap,
              static_cast<double>(clock.update_dt()),
              remaining_intervals * static_cast<double>(clock.update_dt()),
              lo, hi, step);
        }
        break;
      }
      case ControllerKind::kEvenMpc: {
        if (interval_end >= static_cast<double>(clock.end_of_day())) break;
        // Receding horizon anchored at the start of the next interval.
        std::int64_t period = periods.period_of(interval_end);
        double period_end = (static_cast<double>(period) + 1.0) *
                            periods.period_length();
        double remaining_in_period = period_end - interval_end;
        double remaining_lifetime =
            static_cast<double>(clock.end_of_day()) - interval_end;
        double weight = std::min(1.0, remaining_in_period / remaining_lifetime);
        double effective = even_mpc_budget(
            std::max(0.0, budget - ledger.spend()), weight, period_cap,
            period_spend[static_cast<std::size_t>(period)]);
        double intervals_left_in_period = std::max(
            1.0, remaining_in_period / static_cast<double>(clock.update_dt()));
        double ts = std::max(0.0, effective / intervals_left_in_period);
        double eps = schedule_value(settings.schedule, k + 1);
        rt.even_lambda = std::max(1e-6, rt.even_lambda -
                                            eps * (ts - interval_spend));
        rt.bid_per_click = 1.0 / rt.even_lambda;
        break;
      }
      case ControllerKind::kDogdMd:
      case ControllerKind::kDogdCostCap:
      case ControllerKind::kGd:
      case ControllerKind::kFixedBid:
        break;
    }

    ledger.close_interval();

    TraceRow row;
    row.interval = k;
    row.requests = interval_requests;
    row.spend = interval_spend;
    row.target_spend = target;
    row.bid_per_click = uses_multiplier(settings.kind)
                            ? rt.bid_per_click * settings.bid_multiplier
                            : rt.bid_per_click;
    row.lambda = current_lambda(rt, settings);
    row.mu = current_mu(rt, settings);
    row.impressions = interval_impressions;
    row.conversions = interval_conversions;
    report.trace.push_back(row);
  }

  report.total_spend = ledger.spend();
  report.total_conversions = ledger.conversions();
  report.total_impressions = ledger.impressions();
  report.total_requests = ledger.requests();
  report.utilization = budget > 0.0 ? ledger.spend() / budget : 0.0;
  report.realized_cpc = ledger.conversions() > 0.0
                            ? ledger.spend() / ledger.conversions()
                            : 0.0;
  report.final_lambda = current_lambda(rt, settings);
  report.final_mu = current_mu(rt, settings);
  report.budget_exhausted = stopped;
  for (double s : period_spend) {
    report.max_period_spend = std::max(report.max_period_spend, s);
  }
  return report;
}

RunReport run_campaign(const CampaignConfig& config,
                       const ControllerSettings& settings,
                       const MarketSpec& market, const PacingClock& clock) {
  return run_campaign(config, settings, market, clock,
                      generate_stream(market, clock, config.horizon));
}

void write_trace_csv(std::ostream& out, const RunReport& report) {
  out << "interval,requests,spend,target_spend,bid_per_click,lambda,mu,"
         "impressions,conversions\n";
  char buffer[512];
  for (const TraceRow& row : report.trace) {
    std::snprintf(buffer, sizeof(buffer),
                  "%lld,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                  static_cast<long long>(row.interval), row.requests,
                  row.spend, row.target_spend, row.bid_per_click, row.lambda,
                  row.mu, row.impressions, row.conversions);
    out << buffer;
  }
}

double replay_lambda_spend(const std::vector<AuctionOpportunity>& stream,
                           double lambda) {
  double spend = 0.0;
  for (const auto& opp : stream) {
    if (opp.pctr > lambda * opp.competing_ecpm) spend += opp.competing_ecpm;
  }
  return spend;
}

double grid_search_lambda(const std::vector<AuctionOpportunity>& stream,
                          double budget) {
  double lo = 1e-9;
  double hi = 1.0;
  while (replay_lambda_spend(stream, hi) > budget && hi < 1e12) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (replay_lambda_spend(stream, mid) > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ConstantBidOutcome replay_constant_bid(
    const std::vector<AuctionOpportunity>& stream, double bid_per_click,
    double budget) {
  ConstantBidOutcome outcome;
  for (const auto& opp : stream) {
    if (outcome.spend >= budget) break;
    auto settled = settle_spa(bid_per_click * opp.pctr, opp.competing_ecpm);
    if (settled.won) {
      outcome.spend += settled.cost;
      outcome.conversions += opp.pctr;
      outcome.impressions += 1.0;
    }
  }
  return outcome;
}

}  // namespace bidpace::sim
