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

// Re-evaluates a choice-oracle witness from its JSON alone: rebuild the
// market, pick the named rule and mutation, and test the violated condition
// again with BranchRule::choose.

#ifndef SSPWCT_TESTS_WITNESS_REPLAY_HPP_
#define SSPWCT_TESTS_WITNESS_REPLAY_HPP_

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "sspwct/choice.hpp"
#include "sspwct/json_io.hpp"
#include "sspwct/model.hpp"

namespace witness_replay {

inline sspwct::RuleMutation mutation_named(const std::string& name) {
  using sspwct::RuleMutation;
  for (auto m : {RuleMutation::kNone, RuleMutation::kNoActivationGuard,
                 RuleMutation::kCompletionIgnoresGuard,
                 RuleMutation::kInvertedGuard, RuleMutation::kSecondChoice,
                 RuleMutation::kOriginalBlocksNext}) {
    if (name == sspwct::to_string(m)) return m;
  }
  return RuleMutation::kNone;
}

// True when the witness still shows a violation of `property`.
inline bool refails(const std::string& property, const nlohmann::json& w) {
  using namespace sspwct;
  const Market market(instance_from_json(w.at("instance")));
  const BranchIdx b = *market.find_branch(w.at("branch").get<std::string>());
  const BranchRule& rule = market.rule(b);
  const RuleVariant variant = w.at("rule") == "completion"
                                  ? RuleVariant::kCompletion
                                  : RuleVariant::kSspwct;
  const RuleMutation mutation = mutation_named(w.at("mutation"));

  auto set_of = [&](const nlohmann::json& ids) {
    return market.outcome_from_ids(ids.get<std::vector<std::string>>())
        .contracts;
  };
  auto choose = [&](const std::vector<ContractIdx>& offers, RuleVariant v) {
    return rule.choose(offers, v, mutation).chosen;
  };
  auto contains = [](const std::vector<ContractIdx>& s, ContractIdx c) {
    return std::find(s.begin(), s.end(), c) != s.end();
  };
  auto with = [](std::vector<ContractIdx> s, ContractIdx c) {
    s.push_back(c);
    std::sort(s.begin(), s.end());
    return s;
  };
  auto id = [&](const char* key) {
    return *market.find_contract(w.at(key).get<std::string>());
  };

  if (property == "completion") {
    const auto offers = set_of(w.at("offers"));
    const auto plain = choose(offers, RuleVariant::kSspwct);
    const auto full = choose(offers, RuleVariant::kCompletion);
    std::set<AgentIdx> agents;
    for (ContractIdx c : full) agents.insert(market.agent_of(c));
    return plain != full && agents.size() == full.size();
  }
  if (property == "substitutability") {
    const auto y = set_of(w.at("y"));
    const ContractIdx z = id("z");
    const ContractIdx zp = id("z_prime");
    return !contains(choose(with(y, z), variant), z) &&
           contains(choose(with(with(y, z), zp), variant), z);
  }
  if (property == "irc") {
    const auto offers = set_of(w.at("offers"));
    const ContractIdx x = id("removed");
    const auto chosen = choose(offers, variant);
    std::vector<ContractIdx> smaller;
    for (ContractIdx c : offers) {
      if (c != x) smaller.push_back(c);
    }
    return !contains(chosen, x) && choose(smaller, variant) != chosen;
  }
  if (property == "lad") {
    return choose(set_of(w.at("smaller")), variant).size() >
           choose(set_of(w.at("larger")), variant).size();
  }
  return false;
}

}  // namespace witness_replay

#endif  // SSPWCT_TESTS_WITNESS_REPLAY_HPP_
