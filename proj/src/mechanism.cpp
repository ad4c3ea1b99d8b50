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

#include "sspwct/mechanism.hpp"

#include <algorithm>
#include <bit>

#include "sspwct/error.hpp"
#include "sspwct/rng.hpp"

namespace sspwct {

ComTrace cumulative_offer(const Market& market, const ComOptions& options) {
  return cumulative_offer(market, market.rankings(), options);
}

ComTrace cumulative_offer(const Market& market,
                          const std::vector<std::vector<ContractIdx>>& rankings,
                          const ComOptions& options) {
  const auto num_agents = static_cast<std::size_t>(market.num_agents());
  const auto num_branches = static_cast<std::size_t>(market.num_branches());
  if (rankings.size() != num_agents) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected one ranking per agent");
  }

  ComTrace trace;
  std::vector<std::size_t> next(num_agents, 0);
  std::vector<int> held_count(num_agents, 0);
  std::vector<std::vector<ContractIdx>> pools(num_branches);
  std::vector<std::vector<ContractIdx>> held(num_branches);
  Rng rng(options.policy.seed);
  std::vector<AgentIdx> eligible;

  for (int t = 1;; ++t) {
    eligible.clear();
    for (std::size_t a = 0; a < num_agents; ++a) {
      if (held_count[a] == 0 && next[a] < rankings[a].size()) {
        eligible.push_back(static_cast<AgentIdx>(a));
      }
    }
    if (eligible.empty()) break;

    AgentIdx agent = eligible.front();
    if (options.policy.kind == ProposalPolicy::Kind::kSeededRandom) {
      agent = eligible[static_cast<std::size_t>(
          rng.uniform(0, static_cast<int>(eligible.size()) - 1))];
    }
    const ContractIdx x = rankings[agent][next[agent]++];
    if (market.agent_of(x) != agent) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ranking of agent '" + market.agent_id(agent) +
                      "' lists a contract of another agent");
    }
    const BranchIdx b = market.branch_of(x);
    pools[b].push_back(x);

    for (ContractIdx c : held[b]) --held_count[market.agent_of(c)];
    held[b] = market.rule(b).choose(pools[b]).chosen;
    for (ContractIdx c : held[b]) ++held_count[market.agent_of(c)];

    ComStep step;
    step.t = t;
    step.agent = agent;
    step.contract = x;
    step.verdict = std::binary_search(held[b].begin(), held[b].end(), x)
                       ? Verdict::kHeld
                       : Verdict::kRejected;
    if (options.record_pools) step.pools = pools;
    trace.steps.push_back(std::move(step));
  }

  for (const auto& h : held) {
    trace.outcome.contracts.insert(trace.outcome.contracts.end(), h.begin(),
                                   h.end());
  }
  std::sort(trace.outcome.contracts.begin(), trace.outcome.contracts.end());
  trace.final_pools = std::move(pools);
  return trace;
}

Outcome com_outcome(const Market& market, ProposalPolicy policy) {
  return com_outcome(market, market.rankings(), policy);
}

Outcome com_outcome(const Market& market,
                    const std::vector<std::vector<ContractIdx>>& rankings,
                    ProposalPolicy policy) {
  return cumulative_offer(market, rankings, {policy, false}).outcome;
}

namespace {

std::vector<std::vector<ContractIdx>> split_by_branch(const Market& market,
                                                      const Outcome& outcome) {
  std::vector<std::vector<ContractIdx>> by_branch(
      static_cast<std::size_t>(market.num_branches()));
  for (ContractIdx c : outcome.contracts) {
    by_branch[market.branch_of(c)].push_back(c);
  }
  return by_branch;
}

}  // namespace

bool is_individually_rational(const Market& market, const Outcome& outcome) {
  if (!is_feasible(market, outcome)) return false;
  for (ContractIdx c : outcome.contracts) {
    if (!rank_in(market.ranking(market.agent_of(c)), c)) return false;
  }
  const auto by_branch = split_by_branch(market, outcome);
  for (BranchIdx b = 0; b < market.num_branches(); ++b) {
    if (market.rule(b).choose(by_branch[b]).chosen != by_branch[b]) {
      return false;
    }
  }
  return true;
}

std::optional<BlockingSet> find_blocking_set(const Market& market,
                                             const Outcome& outcome,
                                             int bound) {
  for (BranchIdx b = 0; b < market.num_branches(); ++b) {
    const int m = market.rule(b).num_contracts();
    if (m > bound || m > 63) {
      throw Error(ErrorCode::kInstanceTooLarge,
                  "branch '" + market.branch_id(b) + "' has " +
                      std::to_string(m) + " contracts, enumeration bound is " +
                      std::to_string(bound));
    }
  }

  const auto by_branch = split_by_branch(market, outcome);
  for (BranchIdx b = 0; b < market.num_branches(); ++b) {
    const BranchRule& rule = market.rule(b);
    const auto& contracts = rule.contracts();
    const int m = rule.num_contracts();
    const OfferMask held = rule.to_mask(by_branch[b]);
    const OfferMask current = rule.choose_mask(held, RuleVariant::kSspwct);

    // Contracts an agent would sign given her current assignment.
    OfferMask wanted = 0;
    std::vector<AgentIdx> agent(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      const ContractIdx c = contracts[j];
      agent[j] = market.agent_of(c);
      const auto& ranking = market.ranking(agent[j]);
      const ContractIdx mine = assignment_of(market, outcome, agent[j]);
      if (rank_in(ranking, c) && compare_assignments(ranking, c, mine) >= 0) {
        wanted |= OfferMask{1} << j;
      }
    }

    for (OfferMask y = 1; y < (OfferMask{1} << m); ++y) {
      if (y == current || (y & ~wanted) != 0) continue;
      if (std::popcount(y) > rule.capacity()) continue;
      bool one_per_agent = true;
      for (int j = 0; j < m && one_per_agent; ++j) {
        if (!((y >> j) & 1U)) continue;
        for (int k = j + 1; k < m; ++k) {
          if (((y >> k) & 1U) && agent[k] == agent[j]) {
            one_per_agent = false;
            break;
          }
        }
      }
      if (!one_per_agent) continue;
      if (rule.choose_mask(held | y, RuleVariant::kSspwct) == y) {
        return BlockingSet{b, rule.from_mask(y)};
      }
    }
  }
  return std::nullopt;
}

bool is_stable(const Market& market, const Outcome& outcome, int bound) {
  return is_individually_rational(market, outcome) &&
         !find_blocking_set(market, outcome, bound).has_value();
}

}  // namespace sspwct
