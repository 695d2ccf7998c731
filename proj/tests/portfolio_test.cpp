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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bidpace/dogd.hpp"
#include "bidpace/math.hpp"
#include "bidpace/portfolio.hpp"

using namespace bidpace;

namespace {

AuctionOpportunity make_opp(double pctr, double ecpm) {
  AuctionOpportunity opp;
  opp.pctr = pctr;
  opp.competing_ecpm = ecpm;
  return opp;
}

}  // namespace

TEST_CASE("group construction rejects infeasible minimum shares") {
  std::vector<GroupCampaign> campaigns{{100.0, 0.6, 0.0, 1.0},
                                       {100.0, 0.5, 0.0, 1.0}};
  CHECK_THROWS_AS(GroupState(campaigns, 1.0, StepSizeSchedule::constant(0.01)),
                  std::invalid_argument);
}

TEST_CASE("shared lambda bids scale with campaign quality") {
  GroupState group({{100.0, 0.0, 0.0, 1.0}, {100.0, 0.0, 0.0, 1.0}}, 2.0,
                   StepSizeSchedule::constant(0.01));
  CHECK(group.md_bid(0, 0.1) == doctest::Approx(0.05));
  CHECK(group.md_bid(1, 0.2) == doctest::Approx(0.10));
}

TEST_CASE("group aggregates on target leave lambda unchanged") {
  GroupState group({{500.0, 0.0, 0.0, 1.0}, {500.0, 0.0, 0.0, 1.0}}, 1.0,
                   StepSizeSchedule::constant(0.05));
  // R/T * B = S exactly.
  group.md_batch_update(100.0, 100.0 / 1000.0 * 50.0, 50.0);
  CHECK(group.lambda() == doctest::Approx(1.0));
}

TEST_CASE("a group of one matches the single-campaign controller exactly") {
  GroupState group({{1000.0, 0.0, 0.0, 1.0}}, 1.0,
                   StepSizeSchedule::harmonic(0.5));
  DualState single;
  single.lambda = 1.0;
  single.schedule = StepSizeSchedule::harmonic(0.5);

  Rng rng(127);
  for (int i = 0; i < 400; ++i) {
    double requests = std::floor(rng.uniform01() * 50.0);
    double spend = rng.uniform01() * 3.0;
    group.md_batch_update(requests, spend, 100.0);
    dogd_md_batch(single, requests, spend, 100.0, 1000.0);
    CHECK(group.lambda() == single.lambda);  // bit-for-bit
  }
}

TEST_CASE("after any update sequence all campaigns read the same lambda") {
  GroupState group({{500.0, 0.0, 0.0, 1.0}, {300.0, 0.0, 0.0, 1.0},
                    {200.0, 0.0, 0.0, 1.0}},
                   1.0, StepSizeSchedule::constant(0.02));
  Rng rng(131);
  for (int i = 0; i < 100; ++i) {
    group.md_batch_update(std::floor(rng.uniform01() * 20.0),
                          rng.uniform01(), 60.0);
  }
  double pctr = 0.15;
  double reference = group.md_bid(0, pctr);
  CHECK(group.md_bid(1, pctr) == reference);
  CHECK(group.md_bid(2, pctr) == reference);
}

TEST_CASE("minimum delivery bids and gradients") {
  GroupState group({{1000.0, 0.3, 0.0, 1.0}, {1000.0, 0.0, 0.0, 1.0}}, 1.0,
                   StepSizeSchedule::constant(0.01));

  // gamma = 0 keeps the plain max-delivery bid r / lambda.
  double plain = group.min_delivery_step(1, make_opp(0.1, 1e9), 0.0, 0.0, 0.0);
  CHECK(plain == doctest::Approx(0.1 / group.lambda()));

  // Spend rate exactly on the campaign floor freezes gamma: the win costs
  // c = s_i B / T_i per auction.
  GroupState frozen({{1000.0, 0.5, 0.0, 1.0}}, 1.0,
                    StepSizeSchedule::constant(0.01));
  double budget = 100.0;
  double floor_cost = 0.5 * budget / 1000.0;  // 0.05
  group.min_delivery_step(0, make_opp(1.0, floor_cost), budget, 0.0, 0.1);
  CHECK(group.gamma(0) == doctest::Approx(0.0));

  // Deterministic bid value with gamma raised.
  GroupState direct({{1000.0, 0.3, 0.0, 1.0}}, 1.0,
                    StepSizeSchedule::constant(0.01));
  // Drive gamma up by starving the campaign (loses: spend 0 < floor).
  for (int i = 0; i < 100; ++i) {
    direct.min_delivery_step(0, make_opp(1e-9, 1e9), 100.0, 0.0, 0.0667);
  }
  CHECK(direct.gamma(0) == doctest::Approx(0.2).epsilon(0.01));
  double bid = direct.min_delivery_step(0, make_opp(0.1, 1e9), 100.0, 0.0, 0.0);
  CHECK(bid == doctest::Approx(0.1 / (1.0 - direct.gamma(0))).epsilon(1e-9));
}

TEST_CASE("group cost cap search reduces to the single-campaign search") {
  auto f = MonotoneCurve::from_knots({1.0, 5.0}, {1.0, 5.0});
  auto g = MonotoneCurve::from_knots({1.0, 5.0}, {1.0, 1.0});
  GroupMpcCampaign campaign;
  campaign.bid_spend = &f;
  campaign.bid_conversions = &g;
  campaign.forecast = 1000.0;
  campaign.cost_cap = 1.25;
  campaign.conversions_so_far = 3.0;
  campaign.horizon_requests = 10.0;
  campaign.remaining_requests = 10.0;

  double group_bid =
      group_costcap_mpc({campaign}, 10.0, 10.0, 1.0, 5.0, 0.01);
  double single_bid =
      mpc_costcap_bid(f, g, 10.0, 10.0, 1.25, 3.0, 10.0, 10.0, 1.0, 5.0, 0.01);
  CHECK(group_bid == doctest::Approx(single_bid));
}

TEST_CASE("the tightest campaign cap limits the group bid") {
  auto f1 = MonotoneCurve::from_knots({1.0, 5.0}, {0.5, 2.5});
  auto g1 = MonotoneCurve::from_knots({1.0, 5.0}, {1.0, 1.0});
  auto f2 = MonotoneCurve::from_knots({1.0, 5.0}, {0.5, 2.5});
  auto g2 = MonotoneCurve::from_knots({1.0, 5.0}, {1.0, 1.0});

  GroupMpcCampaign loose;
  loose.bid_spend = &f1;
  loose.bid_conversions = &g1;
  loose.forecast = 500.0;
  loose.cost_cap = 100.0;  // effectively no cap
  loose.horizon_requests = 5.0;
  loose.remaining_requests = 5.0;

  GroupMpcCampaign tight = loose;
  tight.bid_spend = &f2;
  tight.bid_conversions = &g2;
  tight.cost_cap = 0.2;  // remaining cap binds well inside the grid
  tight.conversions_so_far = 45.0;

  // Oracle: scan the same grid with the tight campaign's constraint.
  double budget_total = 20.0;
  double budget_remaining = 10.0;
  double share = 0.5;
  double remaining_goal =
      share * budget_total / tight.cost_cap - tight.conversions_so_far;
  double cap_horizon = share * budget_remaining / remaining_goal;
  double oracle = 1.0;
  for (double b = 1.0; b <= 5.0 + 0.005; b += 0.01) {
    double spend_sum = f1.eval(b) + f2.eval(b);
    bool ok = spend_sum <= budget_remaining &&
              f2.eval(b) <= cap_horizon * g2.eval(b);
    if (ok) oracle = std::max(oracle, std::min(b, 5.0));
  }

  double bid = group_costcap_mpc({loose, tight}, budget_total,
                                 budget_remaining, 1.0, 5.0, 0.01);
  CHECK(bid == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(bid < 5.0);  // the cap actually binds

  // With both caps unbounded the search is spend-only.
  GroupMpcCampaign open_a = loose;
  open_a.cost_cap = 0.0;
  GroupMpcCampaign open_b = tight;
  open_b.cost_cap = 0.0;
  double unconstrained = group_costcap_mpc({open_a, open_b}, budget_total,
                                           budget_remaining, 1.0, 5.0, 0.01);
  CHECK(unconstrained == doctest::Approx(5.0));
}

TEST_CASE("channel validation") {
  ChannelSpec onsite;
  onsite.kind = ChannelSpec::Kind::kOnsiteSpa;
  CHECK_NOTHROW(onsite.validate());
  onsite.markup = 0.2;
  CHECK_THROWS_AS(onsite.validate(), std::invalid_argument);

  ChannelSpec offsite;
  offsite.kind = ChannelSpec::Kind::kOffsiteFpa;
  CHECK_THROWS_AS(offsite.validate(), std::invalid_argument);  // no model
  offsite.win_model = WinProbModel(0.0, {}, 1.0);
  CHECK_NOTHROW(offsite.validate());
}

TEST_CASE("multichannel bids by channel kind") {
  ChannelSpec onsite;
  onsite.kind = ChannelSpec::Kind::kOnsiteSpa;

  MultiChannelState state;
  state.lambda = 2.0;
  state.schedule = StepSizeSchedule::constant(1e-12);
  auto bid = multichannel_step(state, 1.0, 1000.0, make_opp(0.1, 1e9), onsite);
  CHECK(bid.bid == doctest::Approx(0.05));

  // Offsite with the beta = 1 model: lambda (1+m) / r = 0.5 makes the RHS 2
  // and recovers the welfare quadratic root.
  ChannelSpec offsite;
  offsite.kind = ChannelSpec::Kind::kOffsiteFpa;
  offsite.markup = 0.25;
  offsite.win_model = WinProbModel(0.0, {}, 1.0);
  MultiChannelState fpa_state;
  fpa_state.lambda = 0.1 * 0.5 / 1.25;  // lambda (1+m) = 0.05, r = 0.1
  fpa_state.schedule = StepSizeSchedule::constant(1e-12);
  auto offsite_bid =
      multichannel_step(fpa_state, 1.0, 1000.0, make_opp(0.1, 0.0), offsite);
  CHECK(offsite_bid.bid == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-6));
  CHECK(offsite_bid.realized_cost ==
        doctest::Approx(offsite.win_model->eval({}, offsite_bid.bid).p *
                        offsite_bid.bid * 1.25));
}

TEST_CASE("on-target spend keeps the multichannel dual fixed") {
  ChannelSpec onsite;
  onsite.kind = ChannelSpec::Kind::kOnsiteSpa;
  MultiChannelState state;
  state.lambda = 1.0;
  state.schedule = StepSizeSchedule::constant(0.1);
  // Win with cost exactly B/T.
  double target = 10.0 / 1000.0;
  multichannel_step(state, 10.0, 1000.0, make_opp(0.5, target), onsite);
  CHECK(state.lambda == doctest::Approx(1.0));
}
