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

#include "sspwct/choice.hpp"

#include <algorithm>
#include <map>

#include "sspwct/error.hpp"

namespace sspwct {

SlotSequence build_slot_sequence(const BranchConfig& config) {
  SlotSequence seq;
  seq.order.reserve(static_cast<std::size_t>(2 * config.n));
  int next_shadow = 1;
  for (int orig = 1; orig <= config.n; ++orig) {
    seq.order.push_back({SlotKind::kOriginal, orig});
    while (next_shadow <= config.n && config.location[next_shadow - 1] == orig) {
      seq.order.push_back({SlotKind::kShadow, next_shadow});
      ++next_shadow;
    }
  }
  return seq;
}

const SlotAssignment* ChoiceResult::slot_of(ContractIdx c) const {
  for (const auto& s : per_slot) {
    if (s.state == SlotState::kFilled && s.contract == c) return &s;
  }
  return nullptr;
}

const SlotAssignment& ChoiceResult::at(const SlotId& slot) const {
  for (const auto& s : per_slot) {
    if (s.slot == slot) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, "no slot " + to_string(slot));
}

BranchRule::BranchRule(const Market& market, BranchIdx branch,
                       const BranchConfig& config)
    : branch_(branch),
      n_(config.n),
      sequence_(build_slot_sequence(config)),
      globals_(market.branch_contracts(branch)) {
  std::map<AgentIdx, int> agents;
  for (ContractIdx c : globals_) {
    auto [it, inserted] =
        agents.emplace(market.agent_of(c), static_cast<int>(agents.size()));
    local_agent_.push_back(it->second);
  }
  for (const SlotId& slot : sequence_.order) {
    std::vector<int> list;
    for (const auto& id : config.priority(slot)) {
      list.push_back(market.local_index(*market.find_contract(id)));
    }
    seat_lists_.push_back(std::move(list));
  }
  for (int bit : config.transfer) transfer_.push_back(bit != 0 ? 1 : 0);
}

namespace {

// Availability of a branch's contracts during one run of the procedure.
class Availability {
 public:
  explicit Availability(std::size_t size) : words_((size + 63) / 64, 0) {}
  void set(int j) { words_[j / 64] |= bit(j); }
  void reset(int j) { words_[j / 64] &= ~bit(j); }
  bool test(int j) const { return (words_[j / 64] & bit(j)) != 0; }

 private:
  static std::uint64_t bit(int j) { return std::uint64_t{1} << (j % 64); }
  std::vector<std::uint64_t> words_;
};

}  // namespace

template <typename Sink>
void BranchRule::run(const std::vector<std::uint8_t>& offered,
                     RuleVariant variant, RuleMutation mutation,
                     Sink&& sink) const {
  const int m = num_contracts();
  Availability avail(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    if (offered[j]) avail.set(j);
  }
  std::vector<std::uint8_t> filled(static_cast<std::size_t>(n_), 0);

  for (std::size_t pos = 0; pos < sequence_.order.size(); ++pos) {
    const SlotId& slot = sequence_.order[pos];
    const int k = slot.index - 1;
    bool active = true;
    if (slot.kind == SlotKind::kShadow) {
      const bool vacant = filled[k] == 0;
      const bool allowed = transfer_[k] != 0;
      switch (mutation) {
        case RuleMutation::kNoActivationGuard:
          active = true;
          break;
        case RuleMutation::kCompletionIgnoresGuard:
          active = variant == RuleVariant::kCompletion || (vacant && allowed);
          break;
        case RuleMutation::kInvertedGuard:
          active = !vacant && allowed;
          break;
        default:
          active = vacant && allowed;
      }
    } else if (mutation == RuleMutation::kOriginalBlocksNext && k > 0) {
      active = filled[k - 1] == 0;
    }
    if (!active) {
      sink(pos, SlotState::kInactive, -1);
      continue;
    }

    int pick = -1;
    bool skipped_best = false;
    for (int j : seat_lists_[pos]) {
      if (!avail.test(j)) continue;
      if (mutation == RuleMutation::kSecondChoice && !skipped_best) {
        pick = j;
        skipped_best = true;
        continue;
      }
      pick = j;
      break;
    }
    if (pick < 0) {
      sink(pos, SlotState::kEmpty, -1);
      continue;
    }

    if (slot.kind == SlotKind::kOriginal) filled[k] = 1;
    if (variant == RuleVariant::kCompletion) {
      avail.reset(pick);
    } else {
      for (int j = 0; j < m; ++j) {
        if (local_agent_[j] == local_agent_[pick]) avail.reset(j);
      }
    }
    sink(pos, SlotState::kFilled, pick);
  }
}

ChoiceResult BranchRule::choose(const std::vector<ContractIdx>& offers,
                                RuleVariant variant,
                                RuleMutation mutation) const {
  std::vector<std::uint8_t> offered(globals_.size(), 0);
  for (ContractIdx c : offers) {
    auto it = std::find(globals_.begin(), globals_.end(), c);
    if (it == globals_.end()) {
      throw Error(ErrorCode::kForeignContract,
                  "contract #" + std::to_string(c) +
                      " is not offered to this branch");
    }
    offered[static_cast<std::size_t>(it - globals_.begin())] = 1;
  }

  ChoiceResult result;
  result.filled.assign(static_cast<std::size_t>(n_), 0);
  run(offered, variant, mutation, [&](std::size_t pos, SlotState state, int j) {
    const SlotId& slot = sequence_.order[pos];
    SlotAssignment a{slot, state, kNone};
    if (state == SlotState::kFilled) {
      a.contract = globals_[j];
      result.chosen.push_back(a.contract);
      if (slot.kind == SlotKind::kOriginal) result.filled[slot.index - 1] = 1;
    }
    result.per_slot.push_back(a);
  });
  std::sort(result.chosen.begin(), result.chosen.end());
  return result;
}

OfferMask BranchRule::choose_mask(OfferMask offers, RuleVariant variant,
                                  RuleMutation mutation) const {
  std::vector<std::uint8_t> offered(globals_.size(), 0);
  for (std::size_t j = 0; j < globals_.size() && j < 64; ++j) {
    offered[j] = (offers >> j) & 1U;
  }
  OfferMask chosen = 0;
  run(offered, variant, mutation, [&](std::size_t, SlotState state, int j) {
    if (state == SlotState::kFilled) chosen |= OfferMask{1} << j;
  });
  return chosen;
}

OfferMask BranchRule::to_mask(const std::vector<ContractIdx>& contracts) const {
  OfferMask mask = 0;
  for (ContractIdx c : contracts) {
    auto it = std::find(globals_.begin(), globals_.end(), c);
    if (it == globals_.end()) {
      throw Error(ErrorCode::kForeignContract,
                  "contract #" + std::to_string(c) + " is foreign to branch");
    }
    mask |= OfferMask{1} << (it - globals_.begin());
  }
  return mask;
}

std::vector<ContractIdx> BranchRule::from_mask(OfferMask mask) const {
  std::vector<ContractIdx> out;
  for (std::size_t j = 0; j < globals_.size() && j < 64; ++j) {
    if ((mask >> j) & 1U) out.push_back(globals_[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ChoiceResult sspwct_choose(const Market& market, BranchIdx branch,
                           const std::vector<ContractIdx>& offers) {
  return market.rule(branch).choose(offers, RuleVariant::kSspwct);
}

ChoiceResult completion_choose(const Market& market, BranchIdx branch,
                               const std::vector<ContractIdx>& offers) {
  return market.rule(branch).choose(offers, RuleVariant::kCompletion);
}

std::vector<ContractIdx> rejected(const Market& market, BranchIdx branch,
                                  const std::vector<ContractIdx>& offers,
                                  RuleVariant variant) {
  const ChoiceResult r = market.rule(branch).choose(offers, variant);
  std::vector<ContractIdx> sorted = offers;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<ContractIdx> out;
  std::set_difference(sorted.begin(), sorted.end(), r.chosen.begin(),
                      r.chosen.end(), std::back_inserter(out));
  return out;
}

const char* to_string(RuleVariant variant) {
  return variant == RuleVariant::kCompletion ? "completion" : "sspwct";
}

const char* to_string(RuleMutation mutation) {
  switch (mutation) {
    case RuleMutation::kNone: return "none";
    case RuleMutation::kNoActivationGuard: return "no-activation-guard";
    case RuleMutation::kCompletionIgnoresGuard:
      return "completion-ignores-guard";
    case RuleMutation::kInvertedGuard: return "inverted-guard";
    case RuleMutation::kSecondChoice: return "second-choice";
    case RuleMutation::kOriginalBlocksNext: return "original-blocks-next";
  }
  return "none";
}

}  // namespace sspwct
