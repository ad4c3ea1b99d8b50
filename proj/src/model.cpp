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

#include "sspwct/model.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

#include "sspwct/choice.hpp"
#include "sspwct/error.hpp"

namespace sspwct {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kForeignContract: return "ForeignContract";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kAlreadyFlexible: return "AlreadyFlexible";
    case ErrorCode::kPreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::kConditionViolation: return "ConditionViolation";
  }
  return "Unknown";
}

std::string to_string(const SlotId& slot) {
  return (slot.kind == SlotKind::kOriginal ? "o" : "e") +
         std::to_string(slot.index);
}

const std::vector<std::string>& BranchConfig::priority(
    const SlotId& slot) const {
  const auto& lists = slot.kind == SlotKind::kOriginal ? original_priorities
                                                       : shadow_priorities;
  return lists.at(static_cast<std::size_t>(slot.index - 1));
}

std::vector<std::string>& BranchConfig::priority(const SlotId& slot) {
  auto& lists = slot.kind == SlotKind::kOriginal ? original_priorities
                                                 : shadow_priorities;
  return lists.at(static_cast<std::size_t>(slot.index - 1));
}

namespace {

class Reporter {
 public:
  template <typename... Parts>
  void add(const char* code, const Parts&... parts) {
    std::ostringstream msg;
    (msg << ... << parts);
    report_.push_back({code, msg.str()});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

void check_ranking(const std::vector<std::string>& ranking,
                   const std::string& where,
                   const std::map<std::string, const Contract*>& contracts,
                   const std::function<bool(const Contract&)>& belongs,
                   const std::string& owner_kind, Reporter& out) {
  std::set<std::string> seen;
  for (const auto& id : ranking) {
    if (!seen.insert(id).second) {
      out.add("strict-order", where, ": strict order violated, '", id,
              "' listed twice");
      continue;
    }
    auto it = contracts.find(id);
    if (it == contracts.end()) {
      out.add("unknown-contract", where, ": unknown contract '", id, "'");
    } else if (!belongs(*it->second)) {
      out.add("foreign-contract", where, ": contract '", id,
              "' does not belong to this ", owner_kind);
    }
  }
}

}  // namespace

ValidationReport validate_instance(const Instance& instance) {
  Reporter out;

  std::map<std::string, const BranchConfig*> branches;
  for (const auto& b : instance.branches) {
    if (b.id.empty()) out.add("empty-id", "branch with empty id");
    if (!branches.emplace(b.id, &b).second) {
      out.add("duplicate-branch", "branch '", b.id, "' declared twice");
    }
  }

  std::map<std::string, const Contract*> contracts;
  std::set<std::tuple<std::string, std::string, std::string>> triples;
  std::set<std::string> owning_agents;
  for (const auto& c : instance.contracts) {
    if (c.id.empty()) out.add("empty-id", "contract with empty id");
    if (c.agent.empty()) {
      out.add("empty-id", "contract '", c.id, "' has an empty agent");
    }
    if (!contracts.emplace(c.id, &c).second) {
      out.add("duplicate-contract", "contract '", c.id, "' declared twice");
    }
    if (!triples.emplace(c.agent, c.branch, c.terms).second) {
      out.add("duplicate-triple", "contract '", c.id,
              "' repeats (agent, branch, terms) = (", c.agent, ", ", c.branch,
              ", ", c.terms, ")");
    }
    if (!branches.contains(c.branch)) {
      out.add("unknown-branch", "contract '", c.id, "' names unknown branch '",
              c.branch, "'");
    }
    owning_agents.insert(c.agent);
  }

  std::set<std::string> preference_agents;
  for (const auto& p : instance.preferences) {
    if (p.agent.empty()) out.add("empty-id", "preference with empty agent");
    if (!preference_agents.insert(p.agent).second) {
      out.add("duplicate-preference", "agent '", p.agent,
              "' has two preference records");
    }
    check_ranking(
        p.ranking, "preference of '" + p.agent + "'", contracts,
        [&](const Contract& c) { return c.agent == p.agent; }, "agent", out);
  }
  for (const auto& agent : owning_agents) {
    if (!preference_agents.contains(agent)) {
      out.add("missing-preference", "agent '", agent,
              "' owns contracts but has no preference record");
    }
  }

  for (const auto& b : instance.branches) {
    const std::string where = "branch '" + b.id + "'";
    if (b.n < 1) {
      out.add("capacity", where, ": capacity n must be positive, got ", b.n);
      continue;
    }
    const auto n = static_cast<std::size_t>(b.n);
    if (b.location.size() != n) {
      out.add("location-size", where, ": location has ", b.location.size(),
              " entries, expected ", n);
    } else {
      for (std::size_t k = 1; k <= n; ++k) {
        const int l = b.location[k - 1];
        if (l < static_cast<int>(k)) {
          out.add("location-lower-bound", where,
                  ": location lower bound k <= l_k violated at k=", k,
                  " (l_k=", l, ")");
        }
        if (l > b.n) {
          out.add("location-upper-bound", where,
                  ": location upper bound l_k <= n violated at k=", k,
                  " (l_k=", l, ")");
        }
        if (k >= 2 && l < b.location[k - 2]) {
          out.add("location-monotone", where,
                  ": location must be non-decreasing, l_", k, "=", l,
                  " < l_", k - 1, "=", b.location[k - 2]);
        }
      }
    }
    if (b.transfer.size() != n) {
      out.add("transfer-size", where, ": transfer has ", b.transfer.size(),
              " entries, expected ", n);
    }
    for (std::size_t k = 0; k < b.transfer.size(); ++k) {
      if (b.transfer[k] != 0 && b.transfer[k] != 1) {
        out.add("transfer-binary", where, ": transfer entry ", k + 1,
                " must be 0 or 1, got ", b.transfer[k]);
      }
    }
    if (b.original_priorities.size() != n) {
      out.add("priority-count", where, ": ", b.original_priorities.size(),
              " original priorities, expected ", n);
    }
    if (b.shadow_priorities.size() != n) {
      out.add("priority-count", where, ": ", b.shadow_priorities.size(),
              " shadow priorities, expected ", n);
    }
    auto belongs = [&](const Contract& c) { return c.branch == b.id; };
    for (std::size_t k = 0; k < b.original_priorities.size(); ++k) {
      check_ranking(b.original_priorities[k],
                    where + " slot o" + std::to_string(k + 1), contracts,
                    belongs, "branch", out);
    }
    for (std::size_t k = 0; k < b.shadow_priorities.size(); ++k) {
      check_ranking(b.shadow_priorities[k],
                    where + " slot e" + std::to_string(k + 1), contracts,
                    belongs, "branch", out);
    }
  }
  return out.take();
}

Market::Market(Instance instance) : instance_(std::move(instance)) {
  const ValidationReport report = validate_instance(instance_);
  if (!report.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& v : report) msg += "\n  " + v.message;
    throw Error(ErrorCode::kValidation, msg);
  }

  std::set<std::string> agents;
  for (const auto& p : instance_.preferences) agents.insert(p.agent);
  for (const auto& c : instance_.contracts) agents.insert(c.agent);
  agent_ids_.assign(agents.begin(), agents.end());
  for (std::size_t a = 0; a < agent_ids_.size(); ++a) {
    agent_lookup_.emplace(agent_ids_[a], static_cast<AgentIdx>(a));
  }

  std::vector<std::pair<std::string, int>> branch_order;
  for (std::size_t i = 0; i < instance_.branches.size(); ++i) {
    branch_order.emplace_back(instance_.branches[i].id, static_cast<int>(i));
  }
  std::sort(branch_order.begin(), branch_order.end());
  for (std::size_t b = 0; b < branch_order.size(); ++b) {
    branch_ids_.push_back(branch_order[b].first);
    branch_config_index_.push_back(branch_order[b].second);
    branch_lookup_.emplace(branch_order[b].first, static_cast<BranchIdx>(b));
  }

  branch_contracts_.resize(branch_ids_.size());
  agent_contracts_.resize(agent_ids_.size());
  for (std::size_t i = 0; i < instance_.contracts.size(); ++i) {
    const auto& c = instance_.contracts[i];
    const auto idx = static_cast<ContractIdx>(i);
    const AgentIdx a = agent_lookup_.at(c.agent);
    const BranchIdx b = branch_lookup_.at(c.branch);
    contract_lookup_.emplace(c.id, idx);
    contract_agent_.push_back(a);
    contract_branch_.push_back(b);
    contract_local_.push_back(static_cast<int>(branch_contracts_[b].size()));
    branch_contracts_[b].push_back(idx);
    agent_contracts_[a].push_back(idx);
  }

  rankings_.resize(agent_ids_.size());
  for (const auto& p : instance_.preferences) {
    auto& ranking = rankings_[agent_lookup_.at(p.agent)];
    for (const auto& id : p.ranking) ranking.push_back(contract_lookup_.at(id));
  }

  rules_.reserve(branch_ids_.size());
  for (std::size_t b = 0; b < branch_ids_.size(); ++b) {
    rules_.emplace_back(*this, static_cast<BranchIdx>(b),
                        config(static_cast<BranchIdx>(b)));
  }
}

Market::Market(const Market&) = default;
Market::Market(Market&&) noexcept = default;
Market& Market::operator=(const Market&) = default;
Market& Market::operator=(Market&&) noexcept = default;
Market::~Market() = default;

const BranchRule& Market::rule(BranchIdx b) const { return rules_[b]; }

const BranchConfig& Market::config(BranchIdx b) const {
  return instance_.branches[branch_config_index_[b]];
}

std::optional<ContractIdx> Market::find_contract(std::string_view id) const {
  auto it = contract_lookup_.find(id);
  if (it == contract_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<AgentIdx> Market::find_agent(std::string_view id) const {
  auto it = agent_lookup_.find(id);
  if (it == agent_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<BranchIdx> Market::find_branch(std::string_view id) const {
  auto it = branch_lookup_.find(id);
  if (it == branch_lookup_.end()) return std::nullopt;
  return it->second;
}

Outcome Market::outcome_from_ids(const std::vector<std::string>& ids) const {
  Outcome out;
  for (const auto& id : ids) {
    auto c = find_contract(id);
    if (!c) {
      throw Error(ErrorCode::kInvalidArgument,
                  "outcome names unknown contract '" + id + "'");
    }
    out.contracts.push_back(*c);
  }
  std::sort(out.contracts.begin(), out.contracts.end());
  out.contracts.erase(std::unique(out.contracts.begin(), out.contracts.end()),
                      out.contracts.end());
  return out;
}

std::vector<std::string> Market::ids(const Outcome& outcome) const {
  std::vector<std::string> out;
  out.reserve(outcome.contracts.size());
  for (ContractIdx c : outcome.contracts) out.push_back(contract_id(c));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> rank_in(const std::vector<ContractIdx>& ranking,
                           ContractIdx c) {
  auto it = std::find(ranking.begin(), ranking.end(), c);
  if (it == ranking.end()) return std::nullopt;
  return static_cast<int>(it - ranking.begin());
}

int compare_assignments(const std::vector<ContractIdx>& ranking,
                        ContractIdx lhs, ContractIdx rhs) {
  if (lhs == rhs) return 0;
  // Unacceptable contracts rank below the outside option; two distinct
  // unacceptable contracts are both worse than nothing and compare equal.
  constexpr int kOutside = 1 << 30;
  auto score = [&](ContractIdx c) {
    if (c == kNone) return kOutside;
    auto r = rank_in(ranking, c);
    return r ? *r : kOutside + 1;
  };
  const int l = score(lhs);
  const int r = score(rhs);
  if (l == r) return 0;
  return l < r ? 1 : -1;
}

ContractIdx assignment_of(const Market& market, const Outcome& outcome,
                          AgentIdx a) {
  for (ContractIdx c : outcome.contracts) {
    if (market.agent_of(c) == a) return c;
  }
  return kNone;
}

bool is_feasible(const Market& market, const Outcome& outcome) {
  std::vector<int> per_agent(static_cast<std::size_t>(market.num_agents()), 0);
  std::vector<int> per_branch(static_cast<std::size_t>(market.num_branches()),
                              0);
  for (ContractIdx c : outcome.contracts) {
    if (++per_agent[market.agent_of(c)] > 1) return false;
    const BranchIdx b = market.branch_of(c);
    if (++per_branch[b] > market.config(b).n) return false;
  }
  return true;
}

}  // namespace sspwct
