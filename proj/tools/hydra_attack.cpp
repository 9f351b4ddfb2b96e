/*
 *
 * Copyright 2026 The HYDRA-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

// Runs adversary scenarios. Exit status 0 means every property held.

#include <iostream>

#include "CLI11.hpp"
#include "hydra/advsim/scenarios.hpp"

int main(int argc, char** argv) {
  using namespace hydra::advsim;
  CLI::App app{"HYDRA adversary simulator"};
  std::string name;
  ScenarioOptions options;
  bool weaken = false, verbose = false;
  std::vector<std::string> names{"all"};
  for (Scenario s : kAllScenarios) names.emplace_back(ScenarioName(s));
  app.add_option("--scenario", name, "Scenario name or \"all\"")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--seed", options.seed, "Random seed");
  app.add_option("--forge-attempts", options.forge_attempts, "Requests sent by forge_request");
  app.add_flag("--weaken", weaken, "Switch off the protection the scenario relies on");
  app.add_flag("--misgrant-key-frame", options.misgrant_key_frame,
               "key_steal: give the attacker a capability to the key frame");
  app.add_flag("-v,--verbose", verbose, "Print transcripts");
  CLI11_PARSE(app, argc, argv);

  std::vector<Scenario> selected;
  if (name == "all") {
    selected.assign(std::begin(kAllScenarios), std::end(kAllScenarios));
  } else {
    selected.push_back(*ParseScenario(name));
  }

  bool all_held = true;
  for (Scenario s : selected) {
    ScenarioOptions run = options;
    if (weaken) run.protections = WeakenedFor(s);
    ScenarioResult result;
    try {
      result = RunScenario(s, run);
    } catch (const std::exception& e) {
      std::cerr << "hydra-attack: " << ScenarioName(s) << ": " << e.what() << "\n";
      return 2;
    }
    std::cout << ScenarioName(s) << " " << (result.passed ? "HELD" : "VIOLATED") << "\n";
    if (verbose || !result.passed) {
      for (const auto& line : result.transcript) std::cout << "  " << line << "\n";
    }
    all_held = all_held && result.passed;
  }
  return all_held ? 0 : 1;
}
