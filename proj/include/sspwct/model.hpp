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

// Market description: contracts, agent preferences and branch configurations.
//
// `Instance` is the plain value that is read from and written to JSON; every
// identifier is a string. `Market` is the validated, index-based view that the
// algorithms run on. A contract is acceptable to an agent (or to a slot) iff it
// appears in the corresponding ranking; the outside option sits implicitly at
// the end of every list.

#ifndef SSPWCT_MODEL_HPP_
#define SSPWCT_MODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sspwct {

// Dense indices into a compiled Market.
using ContractIdx = std::int32_t;
using AgentIdx = std::int32_t;
using BranchIdx = std::int32_t;
inline constexpr std::int32_t kNone = -1;

enum class SlotKind : std::uint8_t { kOriginal, kShadow };

// A seat of a branch. `index` is 1-based and doubles as the precedence
// position inside its kind; shadow k is associated with original k.
struct SlotId {
  SlotKind kind = SlotKind::kOriginal;
  int index = 1;

  friend bool operator==(const SlotId&, const SlotId&) = default;
  friend auto operator<=>(const SlotId&, const SlotId&) = default;
};

std::string to_string(const SlotId& slot);  // "o1", "e3", ...

struct Contract {
  std::string id;
  std::string agent;
  std::string branch;
  std::string terms;

  friend bool operator==(const Contract&, const Contract&) = default;
};

struct AgentPreference {
  std::string agent;
  std::vector<std::string> ranking;  // most preferred first

  friend bool operator==(const AgentPreference&,
                         const AgentPreference&) = default;
};

struct BranchConfig {
  std::string id;
  int n = 0;                   // physical capacity
  std::vector<int> location;   // l_k: originals preceding shadow k
  std::vector<int> transfer;   // 1 = vacancy of original k moves to shadow k
  // Index = precedence position; entry = slot priority ranking.
  std::vector<std::vector<std::string>> original_priorities;
  std::vector<std::vector<std::string>> shadow_priorities;

  const std::vector<std::string>& priority(const SlotId& slot) const;
  std::vector<std::string>& priority(const SlotId& slot);

  friend bool operator==(const BranchConfig&, const BranchConfig&) = default;
};

struct Instance {
  std::vector<Contract> contracts;
  std::vector<AgentPreference> preferences;
  std::vector<BranchConfig> branches;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Violation {
  std::string code;     // stable machine-readable tag
  std::string message;  // human-readable detail
};

using ValidationReport = std::vector<Violation>;

// Lists every invariant violation. An empty report means well-formed.
ValidationReport validate_instance(const Instance& instance);

// Outcome: a set of contracts, kept sorted by contract index.
struct Outcome {
  std::vector<ContractIdx> contracts;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

class BranchRule;

// Validated, index-based view of an Instance. Agents and branches are indexed
// in ascending id order; contracts keep their order from the instance.
class Market {
 public:
  // Throws Error(kValidation) listing every violation.
  explicit Market(Instance instance);

  Market(const Market&);
  Market(Market&&) noexcept;
  Market& operator=(const Market&);
  Market& operator=(Market&&) noexcept;
  ~Market();

  const Instance& instance() const { return instance_; }

  int num_contracts() const { return static_cast<int>(contract_agent_.size()); }
  int num_agents() const { return static_cast<int>(agent_ids_.size()); }
  int num_branches() const { return static_cast<int>(branch_ids_.size()); }

  const std::string& contract_id(ContractIdx c) const {
    return instance_.contracts[c].id;
  }
  const std::string& agent_id(AgentIdx a) const { return agent_ids_[a]; }
  const std::string& branch_id(BranchIdx b) const { return branch_ids_[b]; }

  std::optional<ContractIdx> find_contract(std::string_view id) const;
  std::optional<AgentIdx> find_agent(std::string_view id) const;
  std::optional<BranchIdx> find_branch(std::string_view id) const;

  AgentIdx agent_of(ContractIdx c) const { return contract_agent_[c]; }
  BranchIdx branch_of(ContractIdx c) const { return contract_branch_[c]; }
  // Position of the contract inside branch_contracts(branch_of(c)).
  int local_index(ContractIdx c) const { return contract_local_[c]; }

  const std::vector<ContractIdx>& branch_contracts(BranchIdx b) const {
    return branch_contracts_[b];
  }
  const std::vector<ContractIdx>& agent_contracts(AgentIdx a) const {
    return agent_contracts_[a];
  }

  // Truthful preference ranking of an agent.
  const std::vector<ContractIdx>& ranking(AgentIdx a) const {
    return rankings_[a];
  }
  const std::vector<std::vector<ContractIdx>>& rankings() const {
    return rankings_;
  }

  const BranchRule& rule(BranchIdx b) const;
  const BranchConfig& config(BranchIdx b) const;

  // Converts contract ids to a sorted outcome; throws kInvalidArgument on an
  // unknown id.
  Outcome outcome_from_ids(const std::vector<std::string>& ids) const;
  std::vector<std::string> ids(const Outcome& outcome) const;

 private:
  Instance instance_;
  std::vector<std::string> agent_ids_;
  std::vector<std::string> branch_ids_;
  std::map<std::string, ContractIdx, std::less<>> contract_lookup_;
  std::map<std::string, AgentIdx, std::less<>> agent_lookup_;
  std::map<std::string, BranchIdx, std::less<>> branch_lookup_;
  std::vector<AgentIdx> contract_agent_;
  std::vector<BranchIdx> contract_branch_;
  std::vector<int> contract_local_;
  std::vector<int> branch_config_index_;
  std::vector<std::vector<ContractIdx>> branch_contracts_;
  std::vector<std::vector<ContractIdx>> agent_contracts_;
  std::vector<std::vector<ContractIdx>> rankings_;
  std::vector<BranchRule> rules_;
};

// Rank of `c` in `ranking` (0 = best), or nullopt when unacceptable.
std::optional<int> rank_in(const std::vector<ContractIdx>& ranking,
                           ContractIdx c);

// Strict preference of an agent between two assignments, where kNone stands
// for the outside option: -1 when `lhs` is worse, 0 equal, +1 better.
int compare_assignments(const std::vector<ContractIdx>& ranking,
                        ContractIdx lhs, ContractIdx rhs);

// The contract of agent `a` in `outcome`, or kNone.
ContractIdx assignment_of(const Market& market, const Outcome& outcome,
                          AgentIdx a);

// At most one contract per agent and at most n_b per branch.
bool is_feasible(const Market& market, const Outcome& outcome);

}  // namespace sspwct

#endif  // SSPWCT_MODEL_HPP_
