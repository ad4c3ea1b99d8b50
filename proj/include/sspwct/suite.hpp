// Copyright 2026 The SSPwCT Authors
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

// Batch drivers shared by the C API and the command-line tool.

#ifndef SSPWCT_SUITE_HPP_
#define SSPWCT_SUITE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sspwct/model.hpp"
#include "sspwct/oracles.hpp"

namespace sspwct {

// Suite names accepted by run_oracle_suite, in report order.
const std::vector<std::string>& oracle_suite_names();

struct SuiteOptions {
  std::vector<std::string> suites;  // empty or {"all"} = every suite
  int trials = 20;                  // improvements per agent
  int order_seeds = 20;             // random proposal orders per instance
  std::uint64_t seed = 1;
  int jobs = 1;                     // worker threads across instances
  int choice_bound = kChoiceOracleBound;
  int blocking_bound = kDefaultBlockingBound;
  int misreport_bound = kMisreportBound;
};

SuiteOptions suite_options_from_json(const nlohmann::json& doc);

// One merged verdict per selected suite. Choice-rule suites run on every
// branch of every market. Throws kInvalidArgument for an unknown suite name.
std::vector<PropertyVerdict> run_oracle_suite(const std::vector<Market>& markets,
                                              const SuiteOptions& options);

// Experiment kinds accepted by run_experiment, matching the report's
// "experiment" field.
const std::vector<std::string>& experiment_kinds();

// Runs one comparative-statics experiment described by `params`:
//   {"kind": "transfer-flexibility", "branch": id, "slot": k}
//   {"kind": "capacity-expansion", "branch": id, "priority": [ids],
//    "position": p}
//   {"kind": "contract-addition-bottom" | "contract-addition-single-agent",
//    "additions": [{"id", "agent", "branch", "terms",
//       "preference_position": p | null,
//       "slots": [{"slot": "o1", "position": p}]}]}
// Omitted parameters are drawn from "seed". Returns the report document;
// transfer-flexibility also carries the improvement-chain reconstruction.
nlohmann::json run_experiment(const Market& market,
                              const nlohmann::json& params);

}  // namespace sspwct

#endif  // SSPWCT_SUITE_HPP_
