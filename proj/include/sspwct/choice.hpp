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

// Slot-specific priorities with capacity transfers.
//
// A branch with physical capacity n owns n original seats and n shadow seats.
// Seats are processed in one merged sequence; each active seat takes its
// highest-priority contract that is still available. An original seat is
// always active. Shadow k is active only when original k stayed vacant and
// transfer bit k is set, so the physical capacity is never exceeded.
//
// Two rules share the procedure:
//   kSspwct      once a contract is taken, every other contract of the same
//                agent becomes unavailable (at most one contract per agent);
//   kCompletion  only the taken contract becomes unavailable, so the result
//                may hold two contracts of one agent.

#ifndef SSPWCT_CHOICE_HPP_
#define SSPWCT_CHOICE_HPP_

#include <cstdint>
#include <vector>

#include "sspwct/model.hpp"

namespace sspwct {

enum class RuleVariant : std::uint8_t { kSspwct, kCompletion };

// Deliberately broken behaviours, used only to confirm that the property
// oracles notice a faulty rule. Production callers leave this at kNone.
enum class RuleMutation : std::uint8_t {
  kNone,
  kNoActivationGuard,        // every shadow seat is active
  kCompletionIgnoresGuard,   // as above, but only for kCompletion
  kInvertedGuard,            // shadow active iff its original is filled
  kSecondChoice,             // seats take their second-best available contract
  kOriginalBlocksNext,       // a filled original deactivates the next original
};

const char* to_string(RuleVariant variant);   // "sspwct", "completion"
const char* to_string(RuleMutation mutation); // "none", "no-activation-guard", ...

struct SlotSequence {
  std::vector<SlotId> order;  // 2n entries
};

// Merges originals and shadows: shadow k follows the l_k-th original, and
// shadows sharing the same l keep their own precedence order.
// Precondition: the config passes validation.
SlotSequence build_slot_sequence(const BranchConfig& config);

enum class SlotState : std::uint8_t {
  kInactive,  // shadow seat without capacity
  kEmpty,     // active, no acceptable contract left
  kFilled,
};

struct SlotAssignment {
  SlotId slot;
  SlotState state = SlotState::kEmpty;
  ContractIdx contract = kNone;  // global index when filled
};

struct ChoiceResult {
  std::vector<ContractIdx> chosen;        // sorted global indices
  std::vector<SlotAssignment> per_slot;   // in processing order
  std::vector<std::uint8_t> filled;       // indicator per original seat k-1

  // The seat that took `c`, or nullptr.
  const SlotAssignment* slot_of(ContractIdx c) const;
  const SlotAssignment& at(const SlotId& slot) const;
};

// Bitmask over a branch's contracts, bit j = branch_contracts(b)[j]. Used by
// the exhaustive oracles, which stay far below 64 contracts per branch.
using OfferMask = std::uint64_t;

// Compiled choice rule of one branch.
class BranchRule {
 public:
  BranchRule(const Market& market, BranchIdx branch, const BranchConfig& config);

  BranchIdx branch() const { return branch_; }
  int capacity() const { return n_; }
  int num_contracts() const { return static_cast<int>(globals_.size()); }
  const SlotSequence& sequence() const { return sequence_; }
  const std::vector<ContractIdx>& contracts() const { return globals_; }
  const std::vector<std::uint8_t>& transfer() const { return transfer_; }

  // `offers` holds global contract indices; all must belong to this branch
  // (Error kForeignContract otherwise). Duplicates are ignored.
  ChoiceResult choose(const std::vector<ContractIdx>& offers,
                      RuleVariant variant = RuleVariant::kSspwct,
                      RuleMutation mutation = RuleMutation::kNone) const;

  // Same procedure on a local bitmask; returns the chosen local bitmask.
  OfferMask choose_mask(OfferMask offers, RuleVariant variant,
                        RuleMutation mutation = RuleMutation::kNone) const;

  OfferMask to_mask(const std::vector<ContractIdx>& contracts) const;
  std::vector<ContractIdx> from_mask(OfferMask mask) const;

 private:
  template <typename Sink>
  void run(const std::vector<std::uint8_t>& offered, RuleVariant variant,
           RuleMutation mutation, Sink&& sink) const;

  BranchIdx branch_;
  int n_;
  SlotSequence sequence_;
  std::vector<ContractIdx> globals_;
  std::vector<int> local_agent_;              // per local contract
  std::vector<std::vector<int>> seat_lists_;  // per sequence position, local
  std::vector<std::uint8_t> transfer_;
};

// Chooses from `offers` with the branch's rule.
ChoiceResult sspwct_choose(const Market& market, BranchIdx branch,
                           const std::vector<ContractIdx>& offers);
ChoiceResult completion_choose(const Market& market, BranchIdx branch,
                               const std::vector<ContractIdx>& offers);
// offers \ chosen, sorted.
std::vector<ContractIdx> rejected(const Market& market, BranchIdx branch,
                                  const std::vector<ContractIdx>& offers,
                                  RuleVariant variant);

}  // namespace sspwct

#endif  // SSPWCT_CHOICE_HPP_
