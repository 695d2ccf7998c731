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

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bidpace/auctions.hpp"
#include "bidpace/config.hpp"
#include "bidpace/deepfunnel.hpp"
#include "bidpace/experiments.hpp"
#include "bidpace/initbid.hpp"
#include "bidpace/shading.hpp"
#include "bidpace/simulator.hpp"

namespace {

using namespace bidpace;

constexpr int kConfigError = 2;

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

int run_simulate(const std::string& config_path, const std::string& out_path) {
  auto config_stream = open_or_throw(config_path);
  sim::SimConfig config = sim::load_sim_config(config_stream);
  auto report = sim::run_campaign(config.campaign, config.controller,
                                  config.market, config.clock);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    sim::write_trace_csv(out, report);
  }
  std::printf("campaign         %s\n", config.campaign.id.c_str());
  std::printf("total_spend      %.6f\n", report.total_spend);
  std::printf("utilization      %.4f\n", report.utilization);
  std::printf("impressions      %.0f\n", report.total_impressions);
  std::printf("conversions      %.4f\n", report.total_conversions);
  std::printf("realized_cpc     %.6f\n", report.realized_cpc);
  std::printf("final_lambda     %.6f\n", report.final_lambda);
  std::printf("final_mu         %.6f\n", report.final_mu);
  return 0;
}

int run_replay(const std::string& log_path, const std::string& discounts_arg,
               double bid_lo, double bid_hi, double bid_step,
               const std::string& out_path) {
  auto log_stream = open_or_throw(log_path);
  auto log = load_gsp_log_csv(log_stream);

  std::vector<double> discounts;
  std::istringstream discount_stream(discounts_arg);
  std::string item;
  while (std::getline(discount_stream, item, ',')) {
    discounts.push_back(std::stod(item));
  }
  SlotConfig slots(discounts);

  auto cost = bid_cost_curve(log, slots, bid_lo, bid_hi, bid_step);
  auto conversions = bid_conversion_curve(log, slots, bid_lo, bid_hi, bid_step);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    out = &file;
  }
  (*out) << "bid,spend,conversions\n";
  char buffer[128];
  for (std::size_t i = 0; i < cost.bids.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.10g,%.10g,%.10g\n", cost.bids[i],
                  cost.values[i], conversions.values[i]);
    (*out) << buffer;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget pacing and bidding toolkit"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one campaign");
  std::string sim_config;
  std::string sim_out;
  simulate->add_option("--config", sim_config, "Run configuration file")
      ->required();
  simulate->add_option("--out", sim_out, "Trace CSV path");

  // replay
  auto* replay =
      app.add_subcommand("replay", "Bid-response curves from a GSP log");
  std::string replay_log;
  std::string replay_discounts = "1.0";
  std::string replay_out;
  double replay_lo = 0.1;
  double replay_hi = 10.0;
  double replay_step = 0.1;
  replay->add_option("--log", replay_log, "GSP log CSV")->required();
  replay->add_option("--discounts", replay_discounts,
                     "Comma-separated position discounts");
  replay->add_option("--bid-min", replay_lo, "Grid lower bound");
  replay->add_option("--bid-max", replay_hi, "Grid upper bound");
  replay->add_option("--bid-step", replay_step, "Grid step");
  replay->add_option("--out", replay_out, "Output CSV (default stdout)");

  // init-bid
  auto* init = app.add_subcommand("init-bid", "Initial bid estimation");
  std::string init_log;
  double init_budget = 0.0;
  double init_horizon = 0.0;
  double init_lo = 1e-4;
  double init_hi = 1e4;
  double init_eps = 1e-6;
  double ecpm_mu = 0.0;
  double ecpm_sigma = 0.0;
  double cvr_mu = 0.0;
  double cvr_sigma = 0.0;
  double init_cap = 0.0;
  double init_sigma_ratio = 1.0;
  init->add_option("--log", init_log, "Auction log CSV (replay mode)");
  init->add_option("--budget", init_budget, "Budget")->required();
  init->add_option("--horizon", init_horizon,
                   "Opportunity forecast (parametric mode)");
  init->add_option("--ecpm-mu", ecpm_mu, "Clearing price lognormal mu");
  init->add_option("--ecpm-sigma", ecpm_sigma, "Clearing price lognormal sigma");
  init->add_option("--cvr-mu", cvr_mu, "Conversion rate lognormal mu");
  init->add_option("--cvr-sigma", cvr_sigma, "Conversion rate lognormal sigma");
  init->add_option("--cap", init_cap, "Cost cap (0 = none)");
  init->add_option("--sigma-ratio", init_sigma_ratio,
                   "Second-price ratio for the cap");
  init->add_option("--bid-min", init_lo, "Replay search lower bound");
  init->add_option("--bid-max", init_hi, "Replay search upper bound");
  init->add_option("--eps", init_eps, "Replay convergence threshold");

  // shade
  auto* shade = app.add_subcommand("shade", "First-price shading solvers");
  std::string shade_objective = "welfare";
  double shade_w0 = 0.0;
  double shade_beta = 1.0;
  double shade_lambda = 1.0;
  double shade_value = 1.0;
  double shade_markup = 0.0;
  double shade_pctr = 1.0;
  shade->add_option("--objective", shade_objective,
                    "welfare | utility | margin | general");
  shade->add_option("--w0", shade_w0, "Sigmoid intercept");
  shade->add_option("--beta", shade_beta, "Sigmoid log-bid coefficient");
  shade->add_option("--lambda", shade_lambda, "Budget dual");
  shade->add_option("--value", shade_value, "Conversion value (utility)");
  shade->add_option("--markup", shade_markup, "Markup factor (margin)");
  shade->add_option("--pctr", shade_pctr, "Conversion rate (general)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "A/B harness and t-test");
  std::string exp_config;
  std::string exp_a;
  std::string exp_b;
  std::string exp_metric;
  std::string exp_out;
  double exp_alpha = 0.05;
  experiment->add_option("--config", exp_config, "Simulation config");
  experiment->add_option("--a", exp_a, "Results CSV for arm A");
  experiment->add_option("--b", exp_b, "Results CSV for arm B");
  experiment->add_option("--metric", exp_metric, "Metric filter");
  experiment->add_option("--alpha", exp_alpha, "Significance level");
  experiment->add_option("--out", exp_out, "Results CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(sim_config, sim_out);
    }
    if (replay->parsed()) {
      return run_replay(replay_log, replay_discounts, replay_lo, replay_hi,
                        replay_step, replay_out);
    }
    if (init->parsed()) {
      double bid = 0.0;
      if (!init_log.empty()) {
        auto log_stream = open_or_throw(init_log);
        auto log = load_auction_log_csv(log_stream);
        bid = auction_replay_bid(log, init_budget, init_lo, init_hi, init_eps);
      } else {
        if (init_horizon <= 0.0) {
          throw std::runtime_error(
              "parametric mode needs --horizon (or pass --log)");
        }
        LognormalParams params{ecpm_mu, ecpm_sigma, cvr_mu, cvr_sigma};
        bid = init_bid_parametric(params, init_budget, init_horizon);
      }
      if (init_cap > 0.0) {
        bid = init_bid_costcap(bid, init_cap, init_sigma_ratio);
      }
      std::printf("%.10g\n", bid);
      return 0;
    }
    if (shade->parsed()) {
      WinProbModel model(shade_w0, {}, shade_beta);
      double bid = 0.0;
      if (shade_objective == "welfare") {
        bid = solve_welfare_bid(model, {}, shade_lambda);
      } else if (shade_objective == "utility") {
        bid = solve_utility_bid(model, {}, shade_value, shade_lambda);
      } else if (shade_objective == "margin") {
        bid = solve_margin_bid(model, {}, shade_lambda, shade_markup);
      } else if (shade_objective == "general") {
        auto response = fpa_response(model, {});
        bid = solve_general_bid(response, shade_pctr, shade_lambda);
      } else {
        throw std::runtime_error("unknown objective: " + shade_objective);
      }
      std::printf("%.10g\n", bid);
      return 0;
    }
    if (experiment->parsed()) {
      std::vector<double> samples_a;
      std::vector<double> samples_b;
      if (!exp_a.empty() && !exp_b.empty()) {
        auto in_a = open_or_throw(exp_a);
        auto in_b = open_or_throw(exp_b);
        samples_a = load_results_csv(in_a, "", exp_metric);
        samples_b = load_results_csv(in_b, "", exp_metric);
      } else if (!exp_config.empty()) {
        auto config_stream = open_or_throw(exp_config);
        auto config = sim::load_sim_config(config_stream);
        ArmSamples samples;
        if (config.experiment.design == "budget_split") {
          samples = budget_split_run(
              config.campaign, config.market, config.clock,
              config.experiment.strategy_a, config.experiment.strategy_b,
              config.experiment.replicas, config.market.seed);
        } else if (config.experiment.design == "campaign_split") {
          samples = campaign_split_run(
              config.campaign, config.market, config.clock,
              config.experiment.strategy_a, config.experiment.strategy_b,
              config.experiment.replicas, config.market.seed);
        } else {
          throw std::runtime_error("unknown design: " +
                                   config.experiment.design);
        }
        exp_alpha = config.experiment.alpha;
        if (!exp_out.empty()) {
          std::ofstream out(exp_out);
          if (!out) throw std::runtime_error("cannot write " + exp_out);
          write_results_csv(out, samples, "utilization");
        }
        samples_a = samples.arm_a;
        samples_b = samples.arm_b;
      } else {
        throw std::runtime_error(
            "experiment needs --config or both --a and --b");
      }
      auto result = pooled_t(SampleSummary::from(samples_a),
                             SampleSummary::from(samples_b));
      bool reject = decide_reject(result.t, result.dof, exp_alpha);
      std::printf("n_a        %zu\n", samples_a.size());
      std::printf("n_b        %zu\n", samples_b.size());
      std::printf("t          %.6f\n", result.t);
      std::printf("dof        %lld\n", static_cast<long long>(result.dof));
      std::printf("alpha      %.4f\n", exp_alpha);
      std::printf("decision   %s\n",
                  reject ? "reject H0" : "fail to reject H0");
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  return kConfigError;
}
