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

#include "sspwct/oracles.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "sspwct/error.hpp"
#include "sspwct/json_io.hpp"
#include "sspwct/rng.hpp"

namespace sspwct {

using nlohmann::json;

void PropertyVerdict::merge(const PropertyVerdict& other) {
  if (passed && !other.passed) witness = other.witness;
  passed = passed && other.passed;
  instances_checked += other.instances_checked;
  cases_checked += other.cases_checked;
}

namespace {

// Every choice of one branch's rule, indexed by offer mask.
class ChoiceTable {
 public:
  ChoiceTable(const Market& market, BranchIdx branch, int bound,
              RuleVariant variant, RuleMutation mutation)
      : rule_(market.rule(branch)) {
    const int m = rule_.num_contracts();
    if (m > bound || m > 20) {
      throw Error(ErrorCode::kInstanceTooLarge,
                  "branch '" + market.branch_id(branch) + "' has " +
                      std::to_string(m) + " contracts, oracle bound is " +
                      std::to_string(bound));
    }
    table_.resize(std::size_t{1} << m);
    for (OfferMask x = 0; x < table_.size(); ++x) {
      table_[x] = rule_.choose_mask(x, variant, mutation);
    }
  }

  int size() const { return rule_.num_contracts(); }
  OfferMask full() const { return (OfferMask{1} << size()) - 1; }
  OfferMask operator[](OfferMask x) const { return table_[x]; }

 private:
  const BranchRule& rule_;
  std::vector<OfferMask> table_;
};

json mask_ids(const Market& market, BranchIdx branch, OfferMask mask) {
  std::vector<std::string> ids;
  for (ContractIdx c : market.rule(branch).from_mask(mask)) {
    ids.push_back(market.contract_id(c));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string contract_at(const Market& market, BranchIdx branch, int j) {
  return market.contract_id(market.rule(branch).contracts()[j]);
}

bool has_agent_duplicate(const Market& market, BranchIdx branch,
                         OfferMask mask) {
  std::vector<AgentIdx> agents;
  for (ContractIdx c : market.rule(branch).from_mask(mask)) {
    agents.push_back(market.agent_of(c));
  }
  std::sort(agents.begin(), agents.end());
  return std::adjacent_find(agents.begin(), agents.end()) != agents.end();
}

PropertyVerdict start(const char* name) {
  PropertyVerdict v;
  v.property = name;
  v.instances_checked = 1;
  return v;
}

json base_witness(const Market& market, BranchIdx branch, RuleVariant variant,
                  RuleMutation mutation) {
  return {{"instance", instance_to_json(market.instance())},
          {"branch", market.branch_id(branch)},
          {"rule", to_string(variant)},
          {"mutation", to_string(mutation)}};
}

json outcome_ids(const Market& market, const Outcome& outcome) {
  return market.ids(outcome);
}

json assignment_json(const Market& market, ContractIdx c) {
  if (c == kNone) return nullptr;
  return market.contract_id(c);
}

}  // namespace

PropertyVerdict check_completion(const Market& market, BranchIdx branch,
                                 int bound, RuleMutation mutation) {
  PropertyVerdict v = start("completion");
  const ChoiceTable plain(market, branch, bound, RuleVariant::kSspwct,
                          mutation);
  const ChoiceTable completed(market, branch, bound, RuleVariant::kCompletion,
                              mutation);
  for (OfferMask x = 0; x <= plain.full(); ++x) {
    ++v.cases_checked;
    if (plain[x] == completed[x]) continue;
    if (has_agent_duplicate(market, branch, completed[x])) continue;
    v.passed = false;
    v.witness = base_witness(market, branch, RuleVariant::kCompletion, mutation);
    v.witness["offers"] = mask_ids(market, branch, x);
    v.witness["sspwct"] = mask_ids(market, branch, plain[x]);
    v.witness["completion"] = mask_ids(market, branch, completed[x]);
    break;
  }
  return v;
}

PropertyVerdict check_substitutability(const Market& market, BranchIdx branch,
                                       int bound, RuleMutation mutation,
                                       RuleVariant variant) {
  PropertyVerdict v = start("substitutability");
  const ChoiceTable choice(market, branch, bound, variant, mutation);
  const int m = choice.size();
  // Offer set s = Y u {z}; z' ranges over contracts outside s.
  for (OfferMask s = 0; s <= choice.full(); ++s) {
    const OfferMask rejected = s & ~choice[s];
    for (int z = 0; z < m; ++z) {
      if (!((rejected >> z) & 1U)) continue;
      for (int zp = 0; zp < m; ++zp) {
        if ((s >> zp) & 1U) continue;
        ++v.cases_checked;
        const OfferMask bigger = s | (OfferMask{1} << zp);
        if (!((choice[bigger] >> z) & 1U)) continue;
        v.passed = false;
        v.witness = base_witness(market, branch, variant, mutation);
        v.witness["y"] = mask_ids(market, branch, s & ~(OfferMask{1} << z));
        v.witness["z"] = contract_at(market, branch, z);
        v.witness["z_prime"] = contract_at(market, branch, zp);
        v.witness["chosen_without"] = mask_ids(market, branch, choice[s]);
        v.witness["chosen_with"] = mask_ids(market, branch, choice[bigger]);
        return v;
      }
    }
  }
  return v;
}

PropertyVerdict check_irc(const Market& market, BranchIdx branch, int bound,
                          RuleMutation mutation, RuleVariant variant) {
  PropertyVerdict v = start("irc");
  const ChoiceTable choice(market, branch, bound, variant, mutation);
  const int m = choice.size();
  for (OfferMask x = 0; x <= choice.full(); ++x) {
    const OfferMask rejected = x & ~choice[x];
    for (int j = 0; j < m; ++j) {
      if (!((rejected >> j) & 1U)) continue;
      ++v.cases_checked;
      const OfferMask smaller = x & ~(OfferMask{1} << j);
      if (choice[smaller] == choice[x]) continue;
      v.passed = false;
      v.witness = base_witness(market, branch, variant, mutation);
      v.witness["offers"] = mask_ids(market, branch, x);
      v.witness["removed"] = contract_at(market, branch, j);
      v.witness["chosen"] = mask_ids(market, branch, choice[x]);
      v.witness["chosen_after_removal"] = mask_ids(market, branch,
                                                   choice[smaller]);
      return v;
    }
  }
  return v;
}

PropertyVerdict check_lad(const Market& market, BranchIdx branch, int bound,
                          RuleMutation mutation, RuleVariant variant) {
  PropertyVerdict v = start("lad");
  const ChoiceTable choice(market, branch, bound, variant, mutation);
  const int m = choice.size();
  for (OfferMask x = 0; x <= choice.full(); ++x) {
    for (int j = 0; j < m; ++j) {
      if (!((x >> j) & 1U)) continue;
      ++v.cases_checked;
      const OfferMask smaller = x & ~(OfferMask{1} << j);
      if (std::popcount(choice[smaller]) <= std::popcount(choice[x])) continue;
      v.passed = false;
      v.witness = base_witness(market, branch, variant, mutation);
      v.witness["smaller"] = mask_ids(market, branch, smaller);
      v.witness["larger"] = mask_ids(market, branch, x);
      v.witness["chosen_smaller"] = mask_ids(market, branch, choice[smaller]);
      v.witness["chosen_larger"] = mask_ids(market, branch, choice[x]);
      return v;
    }
  }
  return v;
}

PropertyVerdict check_stability(const Market& market, int bound) {
  PropertyVerdict v = start("stability");
  v.cases_checked = 1;
  const Outcome out = com_outcome(market);
  const bool rational = is_individually_rational(market, out);
  const auto block = rational ? find_blocking_set(market, out, bound)
                              : std::optional<BlockingSet>{};
  if (!rational || block) {
    v.passed = false;
    v.witness = {{"instance", instance_to_json(market.instance())},
                 {"outcome", outcome_ids(market, out)},
                 {"individually_rational", rational},
                 {"blocking", blocking_to_json(market, block)}};
  }
  return v;
}

std::vector<std::vector<ContractIdx>> enumerate_misreports(const Market& market,
                                                           AgentIdx agent,
                                                           int bound) {
  const auto& mine = market.agent_contracts(agent);
  const int m = static_cast<int>(mine.size());
  if (m > bound) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "agent '" + market.agent_id(agent) + "' has " +
                    std::to_string(m) + " contracts, misreport bound is " +
                    std::to_string(bound));
  }
  std::vector<std::vector<ContractIdx>> out;
  for (unsigned subset = 0; subset < (1U << m); ++subset) {
    std::vector<ContractIdx> pick;
    for (int j = 0; j < m; ++j) {
      if ((subset >> j) & 1U) pick.push_back(mine[j]);
    }
    std::sort(pick.begin(), pick.end());
    do {
      out.push_back(pick);
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return out;
}

PropertyVerdict check_strategy_proofness(const Market& market, int bound) {
  PropertyVerdict v = start("strategy-proofness");
  const Outcome truthful = com_outcome(market);
  auto reported = market.rankings();
  for (AgentIdx a = 0; a < market.num_agents(); ++a) {
    const ContractIdx honest = assignment_of(market, truthful, a);
    const auto& truth = market.ranking(a);
    for (const auto& lie : enumerate_misreports(market, a, bound)) {
      if (lie == truth) continue;
      ++v.cases_checked;
      reported[a] = lie;
      const Outcome out = com_outcome(market, reported);
      const ContractIdx got = assignment_of(market, out, a);
      if (compare_assignments(truth, got, honest) > 0) {
        json lie_ids = json::array();
        for (ContractIdx c : lie) lie_ids.push_back(market.contract_id(c));
        v.passed = false;
        v.witness = {{"instance", instance_to_json(market.instance())},
                     {"agent", market.agent_id(a)},
                     {"misreport", lie_ids},
                     {"truthful_assignment", assignment_json(market, honest)},
                     {"manipulated_assignment", assignment_json(market, got)}};
        return v;
      }
    }
    reported[a] = truth;
  }
  return v;
}

Instance generate_improvement(const Instance& instance,
                              const std::string& agent, std::uint64_t seed,
                              int max_promotions) {
  Instance out = instance;
  std::map<std::string, std::string> owner;
  for (const auto& c : instance.contracts) owner[c.id] = c.agent;

  struct Move {
    std::vector<std::string>* list;
    std::string contract;
  };

  Rng rng(seed);
  const int count = rng.uniform(1, std::max(1, max_promotions));
  for (int step = 0; step < count; ++step) {
    std::vector<Move> moves;
    for (auto& b : out.branches) {
      std::vector<std::string> mine;
      for (const auto& c : out.contracts) {
        if (c.agent == agent && c.branch == b.id) mine.push_back(c.id);
      }
      if (mine.empty()) continue;
      for (auto* lists : {&b.original_priorities, &b.shadow_priorities}) {
        for (auto& list : *lists) {
          for (const auto& id : mine) {
            auto it = std::find(list.begin(), list.end(), id);
            if (it == list.end() ||
                (it != list.begin() && owner[*(it - 1)] != agent)) {
              moves.push_back({&list, id});
            }
          }
        }
      }
    }
    if (moves.empty()) break;
    const Move& mv = moves[static_cast<std::size_t>(
        rng.uniform(0, static_cast<int>(moves.size()) - 1))];
    auto it = std::find(mv.list->begin(), mv.list->end(), mv.contract);
    if (it == mv.list->end()) {
      mv.list->push_back(mv.contract);
    } else {
      std::iter_swap(it, it - 1);
    }
  }
  return out;
}

namespace {

// Position in a slot list with the outside option at list.size(); unlisted
// contracts sit below it.
std::size_t slot_rank(const std::vector<std::string>& list,
                      const std::string& id) {
  auto it = std::find(list.begin(), list.end(), id);
  return it == list.end() ? list.size() + 1
                          : static_cast<std::size_t>(it - list.begin());
}

bool slot_is_improvement(const std::vector<std::string>& before,
                         const std::vector<std::string>& after,
                         const std::vector<std::string>& mine,
                         const std::vector<std::string>& others) {
  const std::string kOutside;  // empty id stands for the outside option
  auto rank = [](const std::vector<std::string>& list, const std::string& id) {
    return id.empty() ? list.size() : slot_rank(list, id);
  };
  std::vector<std::string> rivals = others;
  rivals.push_back(kOutside);
  for (const auto& x : mine) {
    for (const auto& y : rivals) {
      if (rank(before, x) < rank(before, y) &&
          !(rank(after, x) < rank(after, y))) {
        return false;
      }
    }
  }
  // Other agents' contracts and the outside option keep their relative
  // order. Two unlisted contracts have no order to keep.
  for (std::size_t i = 0; i < rivals.size(); ++i) {
    for (std::size_t j = 0; j < rivals.size(); ++j) {
      if (i == j) continue;
      const auto bi = rank(before, rivals[i]);
      const auto bj = rank(before, rivals[j]);
      if (bi > before.size() && bj > before.size()) continue;
      if ((bi < bj) != (rank(after, rivals[i]) < rank(after, rivals[j]))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_improvement(const Instance& before, const Instance& after,
                    const std::string& agent) {
  if (before.contracts != after.contracts ||
      before.preferences != after.preferences ||
      before.branches.size() != after.branches.size()) {
    return false;
  }
  for (std::size_t i = 0; i < before.branches.size(); ++i) {
    const BranchConfig& b = before.branches[i];
    const BranchConfig& a = after.branches[i];
    if (b.id != a.id || b.n != a.n || b.location != a.location ||
        b.transfer != a.transfer ||
        b.original_priorities.size() != a.original_priorities.size() ||
        b.shadow_priorities.size() != a.shadow_priorities.size()) {
      return false;
    }
    std::vector<std::string> mine;
    std::vector<std::string> others;
    for (const auto& c : before.contracts) {
      if (c.branch != b.id) continue;
      (c.agent == agent ? mine : others).push_back(c.id);
    }
    for (std::size_t k = 0; k < b.original_priorities.size(); ++k) {
      if (!slot_is_improvement(b.original_priorities[k],
                               a.original_priorities[k], mine, others)) {
        return false;
      }
    }
    for (std::size_t k = 0; k < b.shadow_priorities.size(); ++k) {
      if (!slot_is_improvement(b.shadow_priorities[k], a.shadow_priorities[k],
                               mine, others)) {
        return false;
      }
    }
  }
  return true;
}

PropertyVerdict check_respects_improvements(const Market& market,
                                            AgentIdx agent, int trials,
                                            std::uint64_t seed) {
  PropertyVerdict v = start("respects-improvements");
  const std::string& id = market.agent_id(agent);
  const Outcome base = com_outcome(market);
  const ContractIdx before = assignment_of(market, base, agent);
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    ++v.cases_checked;
    const Instance improved =
        generate_improvement(market.instance(), id, rng.next());
    const bool valid = is_improvement(market.instance(), improved, id);
    const Market other(improved);
    const Outcome out = com_outcome(other);
    const ContractIdx after = assignment_of(other, out, agent);
    if (valid && compare_assignments(market.ranking(agent), after, before) >= 0) {
      continue;
    }
    v.passed = false;
    v.witness = {{"agent", id},
                 {"valid_improvement", valid},
                 {"instance", instance_to_json(market.instance())},
                 {"improved_instance", instance_to_json(improved)},
                 {"assignment_before", assignment_json(market, before)},
                 {"assignment_after", assignment_json(other, after)}};
    return v;
  }
  return v;
}

PropertyVerdict check_order_independence(
    const Market& market, const std::vector<std::uint64_t>& seeds) {
  PropertyVerdict v = start("order-independence");
  const Outcome reference = com_outcome(market);
  for (std::uint64_t seed : seeds) {
    ++v.cases_checked;
    const Outcome out = com_outcome(market, ProposalPolicy::random(seed));
    if (out == reference) continue;
    v.passed = false;
    v.witness = {{"instance", instance_to_json(market.instance())},
                 {"seed", seed},
                 {"lexicographic", outcome_ids(market, reference)},
                 {"seeded", outcome_ids(market, out)}};
    return v;
  }
  return v;
}

}  // namespace sspwct
