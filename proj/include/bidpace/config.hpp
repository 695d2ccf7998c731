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

#ifndef BIDPACE_CONFIG_HPP
#define BIDPACE_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <string>

#include "bidpace/core.hpp"
#include "bidpace/experiments.hpp"
#include "bidpace/simulator.hpp"

namespace bidpace::sim {

/// Flat `key = value` text grouped into [section] blocks; no nesting.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_number(const std::string& section, const std::string& key,
                    double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  /// Comma-separated list of numbers.
  std::vector<double> get_list(const std::string& section,
                               const std::string& key) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct ExperimentSettings {
  std::string design = "budget_split";  // or campaign_split
  int replicas = 16;
  double alpha = 0.05;
  ExperimentStrategy strategy_a;
  ExperimentStrategy strategy_b;
};

struct SimConfig {
  MarketSpec market;
  CampaignConfig campaign;
  ControllerSettings controller;
  PacingClock clock{60, 900, 86400};
  ExperimentSettings experiment;
};

/// Builds the full simulation configuration from the [market], [campaign],
/// [controller], [clock] and [experiment] sections. Throws
/// std::invalid_argument on unknown enum values or violated invariants.
SimConfig load_sim_config(std::istream& in);

}  // namespace bidpace::sim

#endif  // BIDPACE_CONFIG_HPP
