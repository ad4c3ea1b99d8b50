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

#ifndef SSPWCT_MECHANISM_HPP_
#define SSPWCT_MECHANISM_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "sspwct/choice.hpp"
#include "sspwct/model.hpp"

namespace sspwct {

// Which unmatched agent proposes next.
struct ProposalPolicy {
  enum class Kind : std::uint8_t { kLexicographic, kSeededRandom };
  Kind kind = Kind::kLexicographic;
  std::uint64_t seed = 0;

  static ProposalPolicy lexicographic() { return {}; }
  static ProposalPolicy random(std::uint64_t seed) {
    return {Kind::kSeededRandom, seed};
  }
};

enum class Verdict : std::uint8_t { kHeld, kRejected };

struct ComStep {
  int t = 0;  // 1-based
  AgentIdx agent = kNone;
  ContractIdx contract = kNone;
  Verdict verdict = Verdict::kRejected;
  // Accumulated offers per branch after this step (empty when the run did
  // not record pools).
  std::vector<std::vector<ContractIdx>> pools;
};

struct ComTrace {
  std::vector<ComStep> steps;
  std::vector<std::vector<ContractIdx>> final_pools;
  Outcome outcome;
};

struct ComOptions {
  ProposalPolicy policy;
  bool record_pools = true;
};

// Cumulative offer process. Agents without a held contract propose their
// favourite contract not proposed before; each branch holds
// C^b(accumulated offers). Runs until no unmatched agent has anything left
// to propose. `rankings` overrides the reported preferences (one per agent).
ComTrace cumulative_offer(const Market& market, const ComOptions& options);
ComTrace cumulative_offer(const Market& market,
                          const std::vector<std::vector<ContractIdx>>& rankings,
                          const ComOptions& options);

// Outcome only, without trace bookkeeping.
Outcome com_outcome(const Market& market,
                    ProposalPolicy policy = ProposalPolicy::lexicographic());
Outcome com_outcome(const Market& market,
                    const std::vector<std::vector<ContractIdx>>& rankings,
                    ProposalPolicy policy = ProposalPolicy::lexicographic());

// Every assigned contract is acceptable to its agent and every branch keeps
// all of its contracts: C^b(X_b) = X_b. Infeasible outcomes are rejected.
bool is_individually_rational(const Market& market, const Outcome& outcome);

struct BlockingSet {
  BranchIdx branch = kNone;
  std::vector<ContractIdx> contracts;
};

inline constexpr int kDefaultBlockingBound = 14;

// Searches, per branch, every Y among the branch's contracts with at most one
// contract per agent and |Y| <= n_b, Y != C^b(X), such that the branch picks
// exactly Y from X u Y and every agent in Y picks her Y-contract from X u Y.
// Throws kInstanceTooLarge if some branch has more than `bound` contracts.
std::optional<BlockingSet> find_blocking_set(const Market& market,
                                             const Outcome& outcome,
                                             int bound = kDefaultBlockingBound);

bool is_stable(const Market& market, const Outcome& outcome,
               int bound = kDefaultBlockingBound);

}  // namespace sspwct

#endif  // SSPWCT_MECHANISM_HPP_
