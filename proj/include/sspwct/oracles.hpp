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

// Executable property checks. Choice-rule checks enumerate every offer set of
// one branch; mechanism checks run the cumulative offer process on many
// variations of an instance. A failing verdict always carries a witness that
// can be replayed through the public API.

#ifndef SSPWCT_ORACLES_HPP_
#define SSPWCT_ORACLES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sspwct/choice.hpp"
#include "sspwct/mechanism.hpp"
#include "sspwct/model.hpp"

namespace sspwct {

struct PropertyVerdict {
  std::string property;
  bool passed = true;
  nlohmann::json witness;  // null when passed
  std::int64_t instances_checked = 0;  // configs or markets examined
  std::int64_t cases_checked = 0;      // offer sets, misreports, trials, ...

  // Folds another verdict for the same property into this one; the first
  // witness wins.
  void merge(const PropertyVerdict& other);
};

inline constexpr int kChoiceOracleBound = 8;

// Checks run against `mutation` so the tests can confirm that a broken rule
// is caught. Each throws kInstanceTooLarge when the branch has more than
// `bound` contracts.

// C̄(X) = C(X), or C̄(X) holds two contracts of one agent, for every X.
PropertyVerdict check_completion(const Market& market, BranchIdx branch,
                                 int bound = kChoiceOracleBound,
                                 RuleMutation mutation = RuleMutation::kNone);

// z rejected from Y u {z} stays rejected from Y u {z, z'}.
PropertyVerdict check_substitutability(
    const Market& market, BranchIdx branch, int bound = kChoiceOracleBound,
    RuleMutation mutation = RuleMutation::kNone,
    RuleVariant variant = RuleVariant::kCompletion);

// Dropping a rejected contract leaves the choice unchanged.
PropertyVerdict check_irc(const Market& market, BranchIdx branch,
                          int bound = kChoiceOracleBound,
                          RuleMutation mutation = RuleMutation::kNone,
                          RuleVariant variant = RuleVariant::kCompletion);

// |C̄(X \ {x})| <= |C̄(X)|; by induction this covers every nested pair.
PropertyVerdict check_lad(const Market& market, BranchIdx branch,
                          int bound = kChoiceOracleBound,
                          RuleMutation mutation = RuleMutation::kNone,
                          RuleVariant variant = RuleVariant::kCompletion);

// The COM outcome is individually rational and unblocked.
PropertyVerdict check_stability(const Market& market,
                                int bound = kDefaultBlockingBound);

inline constexpr int kMisreportBound = 4;

// Every strict ranking of every subset of an agent's contracts, including the
// empty ranking. Throws kInstanceTooLarge above `bound` contracts.
std::vector<std::vector<ContractIdx>> enumerate_misreports(
    const Market& market, AgentIdx agent, int bound = kMisreportBound);

// No agent obtains a strictly better (truthful) assignment by misreporting.
PropertyVerdict check_strategy_proofness(const Market& market,
                                         int bound = kMisreportBound);

// Raises some contracts of `agent` in slot priorities, one promotion at a
// time: an unlisted contract is appended to the end of a slot list, a listed
// one swaps with a preceding contract of another agent. The count of
// promotions is drawn from [1, max_promotions]. Returns the input unchanged
// when no promotion exists.
Instance generate_improvement(const Instance& instance,
                              const std::string& agent, std::uint64_t seed,
                              int max_promotions = 4);

// Both conditions of an improvement for `agent`, checked pairwise on every
// slot: other agents keep their relative order, and the agent's contracts
// keep every win they had (including over the outside option).
bool is_improvement(const Instance& before, const Instance& after,
                    const std::string& agent);

// The improved agent's COM assignment is weakly preferred in every trial.
PropertyVerdict check_respects_improvements(const Market& market,
                                            AgentIdx agent, int trials,
                                            std::uint64_t seed);

// Lexicographic and every seeded-random proposal order give the same outcome.
PropertyVerdict check_order_independence(
    const Market& market, const std::vector<std::uint64_t>& seeds);

}  // namespace sspwct

#endif  // SSPWCT_ORACLES_HPP_
