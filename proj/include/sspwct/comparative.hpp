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

// Comparative statics: run the cumulative offer process on a market and on a
// modified copy, then compare every agent's assignment.

#ifndef SSPWCT_COMPARATIVE_HPP_
#define SSPWCT_COMPARATIVE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "sspwct/model.hpp"
#include "sspwct/rng.hpp"

namespace sspwct {

enum class Change : std::uint8_t { kBetter, kEqual, kWorse };

struct AgentComparison {
  std::string agent;
  std::optional<std::string> before;  // contract id, nullopt = unmatched
  std::optional<std::string> after;
  Change change = Change::kEqual;
};

enum class ComparisonVerdict : std::uint8_t {
  kParetoDominates,    // nobody worse off
  kWeaklyImprovesFor,  // protected agents not worse, someone else is
  kViolates,           // a protected agent is worse off
};

const char* to_string(Change change);
const char* to_string(ComparisonVerdict verdict);

struct ComparisonReport {
  std::string experiment;
  std::vector<std::string> baseline;  // sorted contract ids
  std::vector<std::string> modified;
  std::vector<AgentComparison> agents;
  std::vector<std::string> protected_agents;
  ComparisonVerdict verdict = ComparisonVerdict::kParetoDominates;
  bool strict_gain = false;  // some agent strictly better off
  std::string detail;        // experiment-specific case label
};

// Compares the COM outcomes of two markets agent by agent, using the
// preferences of `modified` (which extend those of `baseline`). Agents absent
// from `protected_agents` may lose without producing kViolates; an empty list
// protects everybody.
ComparisonReport compare_markets(const std::string& experiment,
                                 const Market& baseline,
                                 const Market& modified,
                                 std::vector<std::string> protected_agents);

// Sets transfer bit k (1-based) of `branch` and compares. `detail` is one of
// "original-filled", "shadow-vacant" or "shadow-filled".
// Throws kAlreadyFlexible when the bit is already 1.
ComparisonReport flexibility_compare(const Market& market, BranchIdx branch,
                                     int k);

Instance with_transfer(const Instance& instance, const std::string& branch,
                       int k);

struct ChainLink {
  ContractIdx gained = kNone;  // x_t
  ContractIdx given_up = kNone;  // z_t, kNone when the chain ends
};

struct ImprovementChain {
  Outcome outcome;  // indices of the (shared) contract universe
  std::vector<ChainLink> links;
  bool matches_com = false;  // outcome equals the modified COM outcome
};

// Rebuilds the modified outcome from the baseline one by following the chain
// of replacements started by the newly activated shadow seat. Seats are read
// from the modified run's final choice, and a vacated original hands over to
// its shadow when the original stays empty. `baseline` must be the COM
// outcome of `market` (kPreconditionUnmet otherwise, and also when the shadow
// remains vacant in the modified run).
ImprovementChain improvement_chain(const Market& market,
                                   const Outcome& baseline, BranchIdx branch,
                                   int k);

// Inserts a new original seat at precedence `position` (0-based, default
// last) together with an inert shadow (transfer 0, empty ranking) at the same
// position. Existing location entries are shifted so that every old seat
// keeps its place in the processing sequence.
Instance with_original_slot(const Instance& instance, const std::string& branch,
                            const std::vector<std::string>& priority,
                            std::optional<int> position = std::nullopt);

ComparisonReport add_original_slot(const Market& market, BranchIdx branch,
                                   const std::vector<std::string>& priority,
                                   std::optional<int> position = std::nullopt);

enum class AdditionMode : std::uint8_t { kBottom, kSingleAgentAnywhere };

struct SlotPlacement {
  SlotId slot;
  std::size_t position = 0;  // index in the new ranking
};

struct AddedContract {
  Contract contract;
  // Index in the agent's new ranking; nullopt leaves it unacceptable.
  std::optional<std::size_t> preference_position;
  std::vector<SlotPlacement> slots;  // slots of contract.branch that list it
};

// Inserts the contracts in order (positions refer to the list as it stands
// when each contract is inserted, clamped to its length). Agents without a
// preference record get one.
Instance with_contracts(const Instance& instance,
                        const std::vector<AddedContract>& added);

// Checks the addition conditions pairwise: old contracts keep their relative
// order in every agent ranking and slot ranking, old acceptability is
// unchanged, and in kBottom mode every new contract sits below all old
// contracts of each slot that lists it; in kSingleAgentAnywhere mode all new
// contracts share one agent. Throws kConditionViolation.
void verify_contract_addition(const Instance& base, const Instance& modified,
                              const std::vector<std::string>& new_ids,
                              AdditionMode mode);

ComparisonReport add_contracts(const Market& market,
                               const std::vector<AddedContract>& added,
                               AdditionMode mode);

// Random parameters for batch experiments.
std::vector<std::string> sample_slot_priority(const Market& market,
                                              BranchIdx branch, Rng& rng);
std::vector<AddedContract> sample_additions(const Market& market,
                                            AdditionMode mode, Rng& rng,
                                            int max_new = 2);

}  // namespace sspwct

#endif  // SSPWCT_COMPARATIVE_HPP_
