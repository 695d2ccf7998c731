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

#include "bidpace/config.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace bidpace::sim {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile config;
  std::string line;
  std::string section;
  while (std::getline(in, line)) {
    std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[' && text.back() == ']') {
      section = trim(text.substr(1, text.size() - 2));
      continue;
    }
    std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected key = value, got: " + text);
    }
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config: empty key");
    config.sections_[section][key] = value;
  }
  return config;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double ConfigFile::get_number(const std::string& section,
                              const std::string& key, double fallback) const {
  if (!has(section, key)) return fallback;
  return std::stod(get(section, key, ""));
}

std::int64_t ConfigFile::get_int(const std::string& section,
                                 const std::string& key,
                                 std::int64_t fallback) const {
  if (!has(section, key)) return fallback;
  return std::stoll(get(section, key, ""));
}

std::vector<double> ConfigFile::get_list(const std::string& section,
                                         const std::string& key) const {
  std::vector<double> values;
  if (!has(section, key)) return values;
  std::istringstream stream(get(section, key, ""));
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) values.push_back(std::stod(item));
  }
  return values;
}

namespace {

ControllerKind parse_controller(const std::string& name) {
  if (name == "fixed_bid") return ControllerKind::kFixedBid;
  if (name == "throttle") return ControllerKind::kThrottle;
  if (name == "pid_md") return ControllerKind::kPidMd;
  if (name == "dogd_md") return ControllerKind::kDogdMd;
  if (name == "dogd_md_batch") return ControllerKind::kDogdMdBatch;
  if (name == "dogd_costcap") return ControllerKind::kDogdCostCap;
  if (name == "dogd_costcap_batch") return ControllerKind::kDogdCostCapBatch;
  if (name == "dual_pid") return ControllerKind::kDualPid;
  if (name == "cost_min_pid") return ControllerKind::kCostMinPid;
  if (name == "mpc_costcap") return ControllerKind::kMpcCostCap;
  if (name == "mpc_target_cpa") return ControllerKind::kMpcTargetCpa;
  if (name == "even_mpc") return ControllerKind::kEvenMpc;
  if (name == "gd") return ControllerKind::kGd;
  throw std::invalid_argument("config: unknown controller: " + name);
}

Objective parse_objective(const ConfigFile& file) {
  std::string name = file.get("campaign", "objective", "max_delivery");
  if (name == "max_delivery") return MaxDelivery{};
  if (name == "cost_cap") {
    return CostCap{file.get_number("campaign", "cap", 0.0)};
  }
  if (name == "target_cpa") {
    return TargetCpa{file.get_number("campaign", "cap", 0.0),
                     file.get_number("campaign", "tolerance", 0.1)};
  }
  if (name == "reach_frequency") {
    return ReachFrequency{file.get_number("campaign", "freq_lower", 0.0),
                          file.get_number("campaign", "freq_upper", 0.0)};
  }
  if (name == "guaranteed") {
    return GuaranteedDelivery{file.get_number("campaign", "goal", 0.0)};
  }
  if (name == "deep_retention") {
    return DeepRetention{file.get_number("campaign", "cap", 0.0),
                         file.get_number("campaign", "deep_cap", 0.0)};
  }
  throw std::invalid_argument("config: unknown objective: " + name);
}

StepSizeSchedule parse_schedule(const ConfigFile& file,
                                const std::string& section) {
  std::string kind = file.get(section, "schedule", "constant");
  double eps0 = file.get_number(section, "eps0", 0.01);
  if (kind == "constant") return StepSizeSchedule::constant(eps0);
  if (kind == "harmonic") return StepSizeSchedule::harmonic(eps0);
  throw std::invalid_argument("config: unknown schedule: " + kind);
}

ExperimentStrategy parse_strategy(const ConfigFile& file,
                                  const std::string& section) {
  ExperimentStrategy strategy;
  std::string kind = file.get(section, "kind", "fixed_bid");
  strategy.kind = parse_controller(kind);
  strategy.bid_per_click = file.get_number(section, "bid", 1.0);
  strategy.bid_multiplier = file.get_number(section, "multiplier", 1.0);
  strategy.lambda_init = file.get_number(section, "lambda_init", 1.0);
  strategy.schedule = parse_schedule(file, section);
  return strategy;
}

}  // namespace

SimConfig load_sim_config(std::istream& in) {
  ConfigFile file = ConfigFile::parse(in);

  SimConfig config{
      MarketSpec{},
      CampaignConfig{},
      ControllerSettings{},
      PacingClock(file.get_int("clock", "update_dt", 60),
                  file.get_int("clock", "bucket_dtau", 900),
                  file.get_int("clock", "end_of_day", 86400)),
      ExperimentSettings{},
  };

  config.market.pctr_mu = file.get_number("market", "pctr_mu", -4.6);
  config.market.pctr_sigma = file.get_number("market", "pctr_sigma", 0.3);
  config.market.ecpm_mu = file.get_number("market", "ecpm_mu", -3.0);
  config.market.ecpm_sigma = file.get_number("market", "ecpm_sigma", 0.5);
  config.market.supply = file.get_list("market", "supply");
  config.market.ladder_depth =
      static_cast<int>(file.get_int("market", "ladder_depth", 1));
  config.market.seed =
      static_cast<std::uint64_t>(file.get_int("market", "seed", 1));

  config.campaign.id = file.get("campaign", "id", "campaign");
  config.campaign.budget = file.get_number("campaign", "budget", 0.0);
  config.campaign.horizon = file.get_int("campaign", "horizon", 1);
  config.campaign.objective = parse_objective(file);
  config.campaign.markup = file.get_number("campaign", "markup", 0.0);
  std::string charging = file.get("campaign", "charging", "ocpm");
  if (charging == "ocpm") {
    config.campaign.charging = Charging::kOcpm;
  } else if (charging == "per_result") {
    config.campaign.charging = Charging::kPerResult;
  } else {
    throw std::invalid_argument("config: unknown charging: " + charging);
  }
  config.campaign.validate();

  config.controller.kind =
      parse_controller(file.get("controller", "kind", "dogd_md_batch"));
  config.controller.lambda_init =
      file.get_number("controller", "lambda_init", 1.0);
  config.controller.fixed_bid_per_click =
      file.get_number("controller", "bid", 1.0);
  config.controller.bid_multiplier =
      file.get_number("controller", "multiplier", 1.0);
  config.controller.schedule = parse_schedule(file, "controller");
  config.controller.normalize_gradients =
      file.get_int("controller", "normalize", 0) != 0;
  config.controller.gains.kp = file.get_number("controller", "kp", 0.4);
  config.controller.gains.ki = file.get_number("controller", "ki", 0.02);
  config.controller.gains.kd = file.get_number("controller", "kd", 0.0);
  config.controller.gains.u_max = file.get_number("controller", "u_max", 0.5);
  config.controller.mu_gains.kp = file.get_number("controller", "mu_kp", 0.2);
  config.controller.mu_gains.ki = file.get_number("controller", "mu_ki", 0.01);
  config.controller.mu_gains.kd = file.get_number("controller", "mu_kd", 0.0);
  config.controller.mu_gains.u_max =
      file.get_number("controller", "mu_u_max", 0.5);
  config.controller.throttle_adjust =
      file.get_number("controller", "throttle_adjust", 0.10);
  config.controller.cost_min_sigma =
      file.get_number("controller", "cost_min_sigma", 1.0);
  config.controller.mpc_band = file.get_number("controller", "mpc_band", 0.10);
  config.controller.mpc_window =
      static_cast<int>(file.get_int("controller", "mpc_window", 16));
  config.controller.mpc_grid_points =
      static_cast<int>(file.get_int("controller", "mpc_grid_points", 21));
  config.controller.periods =
      static_cast<int>(file.get_int("controller", "periods", 1));
  config.controller.sigma_cap =
      file.get_number("controller", "sigma_cap", 1.0);

  config.experiment.design =
      file.get("experiment", "design", "budget_split");
  config.experiment.replicas =
      static_cast<int>(file.get_int("experiment", "replicas", 16));
  config.experiment.alpha = file.get_number("experiment", "alpha", 0.05);
  config.experiment.strategy_a = parse_strategy(file, "experiment.a");
  config.experiment.strategy_b = parse_strategy(file, "experiment.b");

  return config;
}

}  // namespace bidpace::sim
