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

// Test-only helpers: a terse instance builder, hand-built markets shared by
// several suites, and an independently written plain slot-specific
// priorities rule used as a reference.

#ifndef SSPWCT_TESTS_FIXTURES_HPP_
#define SSPWCT_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "sspwct/model.hpp"

namespace fixtures {

using Ids = std::vector<std::string>;

class Builder {
 public:
  Builder& contract(const std::string& id, const std::string& agent,
                    const std::string& branch, const std::string& terms = "") {
    inst_.contracts.push_back({id, agent, branch, terms});
    return *this;
  }
  Builder& prefers(const std::string& agent, Ids ranking) {
    inst_.preferences.push_back({agent, std::move(ranking)});
    return *this;
  }
  Builder& branch(const std::string& id, int n, std::vector<int> location,
                  std::vector<int> transfer, std::vector<Ids> originals,
                  std::vector<Ids> shadows) {
    inst_.branches.push_back({id, n, std::move(location), std::move(transfer),
                              std::move(originals), std::move(shadows)});
    return *this;
  }
  // Adds an empty ranking for every contract owner that has none.
  sspwct::Instance build() const {
    sspwct::Instance out = inst_;
    std::set<std::string> have;
    for (const auto& p : out.preferences) have.insert(p.agent);
    for (const auto& c : out.contracts) {
      if (have.insert(c.agent).second) out.preferences.push_back({c.agent, {}});
    }
    return out;
  }
  sspwct::Market market() const { return sspwct::Market(build()); }

 private:
  sspwct::Instance inst_;
};

// One branch b, n = 1, transfer as given. o1 lists only x; e1 lists y then x.
// Agent i owns x, agent j owns y.
inline Builder shadow_pair(int transfer, Ids i_ranking = {"x"},
                           Ids j_ranking = {"y"}) {
  Builder b;
  b.contract("x", "i", "b")
      .contract("y", "j", "b")
      .prefers("i", std::move(i_ranking))
      .prefers("j", std::move(j_ranking))
      .branch("b", 1, {1}, {transfer}, {{"x"}}, {{"y", "x"}});
  return b;
}

// Two seats, no transfers; agent i owns x1 and x2, each original ranks one.
inline Builder duplicate_pair() {
  Builder b;
  b.contract("x1", "i", "b", "t1")
      .contract("x2", "i", "b", "t2")
      .prefers("i", {"x1", "x2"})
      .branch("b", 2, {2, 2}, {0, 0}, {{"x1"}, {"x2"}}, {{}, {}});
  return b;
}

// Three seats with location (1,3,3); agent i owns three contracts that every
// slot lists.
inline Builder three_seat_single_agent() {
  Builder b;
  const Ids all = {"x1", "x2", "x3"};
  b.contract("x1", "i", "b", "t1")
      .contract("x2", "i", "b", "t2")
      .contract("x3", "i", "b", "t3")
      .prefers("i", all)
      .branch("b", 3, {1, 3, 3}, {1, 1, 1}, {all, all, all}, {all, all, all});
  return b;
}

// Plain slot-specific priorities over the original seats only: each seat in
// precedence order takes its best listed offer whose agent is still free.
// Written against the string-level Instance so that it shares no code with
// the library's rule.
inline std::set<std::string> reference_ssp_choice(
    const sspwct::Instance& inst, const std::string& branch,
    const std::set<std::string>& offers) {
  auto owner = [&](const std::string& id) {
    for (const auto& c : inst.contracts) {
      if (c.id == id) return c.agent;
    }
    return std::string();
  };
  const sspwct::BranchConfig* cfg = nullptr;
  for (const auto& b : inst.branches) {
    if (b.id == branch) cfg = &b;
  }
  std::set<std::string> chosen;
  std::set<std::string> taken_agents;
  if (!cfg) return chosen;
  for (const auto& seat : cfg->original_priorities) {
    for (const auto& id : seat) {
      if (!offers.count(id) || taken_agents.count(owner(id))) continue;
      chosen.insert(id);
      taken_agents.insert(owner(id));
      break;
    }
  }
  return chosen;
}

}  // namespace fixtures

#endif  // SSPWCT_TESTS_FIXTURES_HPP_
