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

#ifndef SSPWCT_GENERATOR_HPP_
#define SSPWCT_GENERATOR_HPP_

#include <cstdint>
#include <string>

#include "sspwct/model.hpp"
#include "sspwct/rng.hpp"

namespace sspwct {

enum class LocationPolicy : std::uint8_t {
  kAdjacent,     // l_k = k
  kTerminal,     // l_k = n
  kRandomValid,
};

const char* to_string(LocationPolicy policy);
LocationPolicy location_policy_from_string(const std::string& name);

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int agents = 4;
  int branches = 2;
  int min_capacity = 1;
  int max_capacity = 2;
  int min_contracts_per_pair = 0;  // per (agent, branch)
  int max_contracts_per_pair = 2;
  double acceptability = 0.8;      // P(contract listed by its agent)
  double slot_acceptability = 0.7; // P(contract listed by a slot)
  double transfer_density = 0.5;
  LocationPolicy location = LocationPolicy::kRandomValid;
  bool ensure_acceptable = true;   // every agent with contracts lists >= 1
  int max_contracts = 0;           // > 0 caps the universe size
};

// Throws kInvalidArgument on an inconsistent config. The result always
// passes validate_instance.
Instance generate_instance(const GeneratorConfig& config);
Instance generate_instance(const GeneratorConfig& config, Rng& rng);

}  // namespace sspwct

#endif  // SSPWCT_GENERATOR_HPP_
