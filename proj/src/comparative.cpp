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

#include "sspwct/comparative.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "sspwct/choice.hpp"
#include "sspwct/error.hpp"
#include "sspwct/mechanism.hpp"

namespace sspwct {

const char* to_string(Change change) {
  switch (change) {
    case Change::kBetter: return "better";
    case Change::kEqual: return "equal";
    case Change::kWorse: return "worse";
  }
  return "equal";
}

const char* to_string(ComparisonVerdict verdict) {
  switch (verdict) {
    case ComparisonVerdict::kParetoDominates: return "pareto-dominates";
    case ComparisonVerdict::kWeaklyImprovesFor: return "weakly-improves-for";
    case ComparisonVerdict::kViolates: return "violates";
  }
  return "violates";
}

namespace {

BranchConfig& branch_config(Instance& instance, const std::string& id) {
  for (auto& b : instance.branches) {
    if (b.id == id) return b;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown branch '" + id + "'");
}

std::vector<ChoiceResult> final_choices(const Market& market,
                                        const ComTrace& trace) {
  std::vector<ChoiceResult> out;
  for (BranchIdx b = 0; b < market.num_branches(); ++b) {
    out.push_back(market.rule(b).choose(trace.final_pools[b]));
  }
  return out;
}

ComTrace final_state(const Market& market) {
  return cumulative_offer(market, ComOptions{ProposalPolicy::lexicographic(),
                                             /*record_pools=*/false});
}

void check_slot_index(const Market& market, BranchIdx branch, int k) {
  if (branch < 0 || branch >= market.num_branches()) {
    throw Error(ErrorCode::kInvalidArgument, "branch index out of range");
  }
  if (k < 1 || k > market.config(branch).n) {
    throw Error(ErrorCode::kInvalidArgument,
                "slot index " + std::to_string(k) + " outside 1.." +
                    std::to_string(market.config(branch).n));
  }
}

}  // namespace

ComparisonReport compare_markets(const std::string& experiment,
                                 const Market& baseline,
                                 const Market& modified,
                                 std::vector<std::string> protected_agents) {
  ComparisonReport report;
  report.experiment = experiment;
  const Outcome z = com_outcome(baseline);
  const Outcome z_mod = com_outcome(modified);
  report.baseline = baseline.ids(z);
  report.modified = modified.ids(z_mod);
  report.protected_agents = protected_agents;
  const bool everyone = protected_agents.empty();
  const std::set<std::string> guarded(protected_agents.begin(),
                                      protected_agents.end());

  bool anyone_worse = false;
  bool guarded_worse = false;
  for (AgentIdx a = 0; a < modified.num_agents(); ++a) {
    AgentComparison cmp;
    cmp.agent = modified.agent_id(a);
    ContractIdx before = kNone;
    if (auto base_agent = baseline.find_agent(cmp.agent)) {
      const ContractIdx c = assignment_of(baseline, z, *base_agent);
      if (c != kNone) {
        cmp.before = baseline.contract_id(c);
        before = *modified.find_contract(*cmp.before);
      }
    }
    const ContractIdx after = assignment_of(modified, z_mod, a);
    if (after != kNone) cmp.after = modified.contract_id(after);
    const int diff = compare_assignments(modified.ranking(a), after, before);
    cmp.change = diff > 0 ? Change::kBetter
                          : (diff < 0 ? Change::kWorse : Change::kEqual);
    if (cmp.change == Change::kBetter) report.strict_gain = true;
    if (cmp.change == Change::kWorse) {
      anyone_worse = true;
      if (everyone || guarded.contains(cmp.agent)) guarded_worse = true;
    }
    report.agents.push_back(std::move(cmp));
  }
  report.verdict = guarded_worse  ? ComparisonVerdict::kViolates
                   : anyone_worse ? ComparisonVerdict::kWeaklyImprovesFor
                                  : ComparisonVerdict::kParetoDominates;
  return report;
}

Instance with_transfer(const Instance& instance, const std::string& branch,
                       int k) {
  Instance out = instance;
  BranchConfig& cfg = branch_config(out, branch);
  if (k < 1 || k > static_cast<int>(cfg.transfer.size())) {
    throw Error(ErrorCode::kInvalidArgument, "slot index out of range");
  }
  if (cfg.transfer[k - 1] == 1) {
    throw Error(ErrorCode::kAlreadyFlexible,
                "transfer bit " + std::to_string(k) + " of branch '" + branch +
                    "' is already 1");
  }
  cfg.transfer[k - 1] = 1;
  return out;
}

ComparisonReport flexibility_compare(const Market& market, BranchIdx branch,
                                     int k) {
  check_slot_index(market, branch, k);
  const Market flexible(
      with_transfer(market.instance(), market.branch_id(branch), k));
  ComparisonReport report =
      compare_markets("transfer-flexibility", market, flexible, {});

  const ComTrace base = final_state(market);
  const ChoiceResult base_choice =
      market.rule(branch).choose(base.final_pools[branch]);
  if (base_choice.filled[k - 1]) {
    report.detail = "original-filled";
  } else {
    const ComTrace mod = final_state(flexible);
    const ChoiceResult mod_choice =
        flexible.rule(branch).choose(mod.final_pools[branch]);
    report.detail = mod_choice.at({SlotKind::kShadow, k}).state ==
                            SlotState::kFilled
                        ? "shadow-filled"
                        : "shadow-vacant";
  }
  return report;
}

ImprovementChain improvement_chain(const Market& market,
                                   const Outcome& baseline, BranchIdx branch,
                                   int k) {
  check_slot_index(market, branch, k);
  const ComTrace base = final_state(market);
  if (base.outcome != baseline) {
    throw Error(ErrorCode::kPreconditionUnmet,
                "baseline is not the cumulative offer outcome of the market");
  }
  const Market flexible(
      with_transfer(market.instance(), market.branch_id(branch), k));
  const ComTrace mod = final_state(flexible);
  const auto base_choices = final_choices(market, base);
  const auto mod_choices = final_choices(flexible, mod);

  const SlotAssignment& shadow = mod_choices[branch].at({SlotKind::kShadow, k});
  if (shadow.state != SlotState::kFilled) {
    throw Error(ErrorCode::kPreconditionUnmet,
                "shadow seat e" + std::to_string(k) +
                    " stays vacant after the transfer");
  }

  ImprovementChain chain;
  std::set<ContractIdx> current(baseline.contracts.begin(),
                                baseline.contracts.end());
  std::set<ContractIdx> added;
  ContractIdx x = shadow.contract;
  // Each pass either ends the chain or consumes one contract of the finite
  // universe; the cap only guards against a malformed reconstruction.
  for (int guard = 0; guard <= 2 * market.num_contracts() + 2; ++guard) {
    const ContractIdx z = assignment_of(market, baseline, market.agent_of(x));
    if (z != x) {
      if (!added.insert(x).second) break;
      current.insert(x);
      chain.links.push_back({x, z});
      if (z == kNone) break;
      current.erase(z);
    }
    // The seat z held in the baseline is now vacated; read who took it (or
    // its shadow) in the modified run.
    const BranchIdx zb = market.branch_of(z);
    const SlotAssignment* held = base_choices[zb].slot_of(z);
    if (held == nullptr) break;
    const SlotAssignment* next = &mod_choices[zb].at(held->slot);
    if (next->state != SlotState::kFilled &&
        held->slot.kind == SlotKind::kOriginal) {
      next = &mod_choices[zb].at({SlotKind::kShadow, held->slot.index});
    }
    if (next->state != SlotState::kFilled) break;
    x = next->contract;
  }

  chain.outcome.contracts.assign(current.begin(), current.end());
  chain.matches_com = chain.outcome == mod.outcome;
  return chain;
}

Instance with_original_slot(const Instance& instance, const std::string& branch,
                            const std::vector<std::string>& priority,
                            std::optional<int> position) {
  Instance out = instance;
  BranchConfig& cfg = branch_config(out, branch);
  const int n = cfg.n;
  const int p = position.value_or(n);
  if (p < 0 || p > n || static_cast<int>(cfg.location.size()) != n) {
    throw Error(ErrorCode::kValidation,
                "cannot insert an original seat at position " +
                    std::to_string(p) + " of branch '" + branch + "'");
  }
  std::vector<int> location;
  for (int k = 1; k <= n + 1; ++k) {
    if (k <= p) {
      const int l = cfg.location[k - 1];
      location.push_back(p < l ? l + 1 : l);
    } else if (k == p + 1) {
      location.push_back(std::max(p + 1, location.empty() ? 1 : location.back()));
    } else {
      location.push_back(cfg.location[k - 2] + 1);
    }
  }
  cfg.n = n + 1;
  cfg.location = std::move(location);
  cfg.transfer.insert(cfg.transfer.begin() + p, 0);
  cfg.original_priorities.insert(cfg.original_priorities.begin() + p, priority);
  cfg.shadow_priorities.insert(cfg.shadow_priorities.begin() + p,
                               std::vector<std::string>{});
  return out;
}

ComparisonReport add_original_slot(const Market& market, BranchIdx branch,
                                   const std::vector<std::string>& priority,
                                   std::optional<int> position) {
  if (branch < 0 || branch >= market.num_branches()) {
    throw Error(ErrorCode::kInvalidArgument, "branch index out of range");
  }
  const Market expanded(with_original_slot(
      market.instance(), market.branch_id(branch), priority, position));
  ComparisonReport report =
      compare_markets("capacity-expansion", market, expanded, {});
  report.detail = "position " +
                  std::to_string(position.value_or(market.config(branch).n));
  return report;
}

Instance with_contracts(const Instance& instance,
                        const std::vector<AddedContract>& added) {
  Instance out = instance;
  auto insert_at = [](std::vector<std::string>& list, std::size_t pos,
                      const std::string& id) {
    list.insert(list.begin() + static_cast<std::ptrdiff_t>(
                                   std::min(pos, list.size())),
                id);
  };
  for (const auto& add : added) {
    out.contracts.push_back(add.contract);
    auto pref = std::find_if(
        out.preferences.begin(), out.preferences.end(),
        [&](const AgentPreference& p) { return p.agent == add.contract.agent; });
    if (pref == out.preferences.end()) {
      out.preferences.push_back({add.contract.agent, {}});
      pref = out.preferences.end() - 1;
    }
    if (add.preference_position) {
      insert_at(pref->ranking, *add.preference_position, add.contract.id);
    }
    BranchConfig& cfg = branch_config(out, add.contract.branch);
    for (const auto& place : add.slots) {
      if (place.slot.index < 1 || place.slot.index > cfg.n) {
        throw Error(ErrorCode::kInvalidArgument,
                    "slot " + to_string(place.slot) + " does not exist in '" +
                        cfg.id + "'");
      }
      insert_at(cfg.priority(place.slot), place.position, add.contract.id);
    }
  }
  return out;
}

namespace {

std::vector<std::string> only_old(const std::vector<std::string>& list,
                                  const std::set<std::string>& fresh) {
  std::vector<std::string> out;
  for (const auto& id : list) {
    if (!fresh.contains(id)) out.push_back(id);
  }
  return out;
}

[[noreturn]] void violation(const std::string& what) {
  throw Error(ErrorCode::kConditionViolation, what);
}

void check_slot_list(const std::vector<std::string>& before,
                     const std::vector<std::string>& after,
                     const std::set<std::string>& fresh, AdditionMode mode,
                     const std::string& where) {
  if (only_old(after, fresh) != before) {
    violation(where + ": relative order of existing contracts changed");
  }
  if (mode != AdditionMode::kBottom) return;
  bool seen_new = false;
  for (const auto& id : after) {
    const bool is_new = fresh.contains(id);
    if (!is_new && seen_new) {
      violation(where + ": new contract placed above an existing one");
    }
    seen_new = seen_new || is_new;
  }
}

}  // namespace

void verify_contract_addition(const Instance& base, const Instance& modified,
                              const std::vector<std::string>& new_ids,
                              AdditionMode mode) {
  const std::set<std::string> fresh(new_ids.begin(), new_ids.end());
  std::vector<Contract> kept;
  std::set<std::string> owners;
  for (const auto& c : modified.contracts) {
    if (fresh.contains(c.id)) {
      owners.insert(c.agent);
    } else {
      kept.push_back(c);
    }
  }
  if (kept != base.contracts) violation("existing contracts were altered");
  if (modified.contracts.size() != base.contracts.size() + fresh.size()) {
    violation("new contract ids collide or are missing");
  }
  if (mode == AdditionMode::kSingleAgentAnywhere && owners.size() > 1) {
    violation("single-agent mode requires all new contracts to share an agent");
  }

  for (const auto& p : modified.preferences) {
    auto old = std::find_if(
        base.preferences.begin(), base.preferences.end(),
        [&](const AgentPreference& q) { return q.agent == p.agent; });
    const std::vector<std::string> before =
        old == base.preferences.end() ? std::vector<std::string>{}
                                      : old->ranking;
    if (only_old(p.ranking, fresh) != before) {
      violation("preference of '" + p.agent +
                "': relative order of existing contracts changed");
    }
  }

  if (base.branches.size() != modified.branches.size()) {
    violation("branch set changed");
  }
  for (std::size_t i = 0; i < base.branches.size(); ++i) {
    const BranchConfig& b = base.branches[i];
    const BranchConfig& m = modified.branches[i];
    if (b.id != m.id || b.n != m.n || b.location != m.location ||
        b.transfer != m.transfer ||
        b.original_priorities.size() != m.original_priorities.size() ||
        b.shadow_priorities.size() != m.shadow_priorities.size()) {
      violation("branch '" + b.id + "' changed beyond its priorities");
    }
    for (std::size_t k = 0; k < b.original_priorities.size(); ++k) {
      check_slot_list(b.original_priorities[k], m.original_priorities[k], fresh,
                      mode, b.id + " o" + std::to_string(k + 1));
    }
    for (std::size_t k = 0; k < b.shadow_priorities.size(); ++k) {
      check_slot_list(b.shadow_priorities[k], m.shadow_priorities[k], fresh,
                      mode, b.id + " e" + std::to_string(k + 1));
    }
  }
}

ComparisonReport add_contracts(const Market& market,
                               const std::vector<AddedContract>& added,
                               AdditionMode mode) {
  std::vector<std::string> ids;
  for (const auto& a : added) ids.push_back(a.contract.id);
  const Instance modified = with_contracts(market.instance(), added);
  verify_contract_addition(market.instance(), modified, ids, mode);
  const Market extended(modified);

  std::vector<std::string> guarded;
  if (mode == AdditionMode::kSingleAgentAnywhere && !added.empty()) {
    guarded.push_back(added.front().contract.agent);
  }
  ComparisonReport report = compare_markets(
      mode == AdditionMode::kBottom ? "contract-addition-bottom"
                                    : "contract-addition-single-agent",
      market, extended, guarded);
  report.detail = std::to_string(added.size()) + " new contract(s)";
  return report;
}

std::vector<std::string> sample_slot_priority(const Market& market,
                                              BranchIdx branch, Rng& rng) {
  std::vector<std::string> pool;
  for (ContractIdx c : market.branch_contracts(branch)) {
    pool.push_back(market.contract_id(c));
  }
  rng.shuffle(pool);
  std::vector<std::string> out;
  for (const auto& id : pool) {
    if (rng.bernoulli(0.7)) out.push_back(id);
  }
  return out;
}

std::vector<AddedContract> sample_additions(const Market& market,
                                            AdditionMode mode, Rng& rng,
                                            int max_new) {
  std::vector<AddedContract> out;
  if (market.num_agents() == 0) return out;
  constexpr std::size_t kBottom = std::numeric_limits<std::size_t>::max();
  const int count = rng.uniform(1, std::max(1, max_new));
  const AgentIdx owner = rng.uniform(0, market.num_agents() - 1);
  std::map<std::string, std::size_t> pref_sizes;
  std::map<std::pair<BranchIdx, SlotId>, std::size_t> slot_sizes;
  for (int i = 0; i < count; ++i) {
    const AgentIdx a = mode == AdditionMode::kSingleAgentAnywhere
                           ? owner
                           : rng.uniform(0, market.num_agents() - 1);
    const BranchIdx b = rng.uniform(0, market.num_branches() - 1);
    AddedContract add;
    std::string id = "new" + std::to_string(i);
    while (market.find_contract(id)) id += "_";
    add.contract = {id, market.agent_id(a), market.branch_id(b),
                    "added-" + std::to_string(i)};

    auto [pref, fresh_pref] =
        pref_sizes.emplace(add.contract.agent, market.ranking(a).size());
    if (rng.bernoulli(0.85)) {
      add.preference_position =
          static_cast<std::size_t>(rng.uniform(0, static_cast<int>(pref->second)));
      ++pref->second;
    }
    const BranchConfig& cfg = market.config(b);
    for (SlotKind kind : {SlotKind::kOriginal, SlotKind::kShadow}) {
      for (int k = 1; k <= cfg.n; ++k) {
        const SlotId slot{kind, k};
        if (!rng.bernoulli(0.6)) continue;
        auto [size, fresh_slot] =
            slot_sizes.emplace(std::pair{b, slot}, cfg.priority(slot).size());
        const std::size_t pos =
            mode == AdditionMode::kBottom
                ? kBottom
                : static_cast<std::size_t>(
                      rng.uniform(0, static_cast<int>(size->second)));
        add.slots.push_back({slot, pos});
        ++size->second;
      }
    }
    out.push_back(std::move(add));
  }
  return out;
}

}  // namespace sspwct
