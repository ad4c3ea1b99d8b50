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

#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "sspwct/error.hpp"
#include "sspwct/generator.hpp"
#include "sspwct/mechanism.hpp"

using namespace sspwct;
using fixtures::Builder;

namespace {

std::vector<std::string> ids(const Market& m, const Outcome& o) {
  return m.ids(o);
}

struct Step {
  std::string agent, contract;
  Verdict verdict;
};

void check_steps(const Market& m, const ComTrace& trace,
                 const std::vector<Step>& expected) {
  REQUIRE(trace.steps.size() == expected.size());
  for (std::size_t t = 0; t < expected.size(); ++t) {
    CHECK(trace.steps[t].t == static_cast<int>(t) + 1);
    CHECK(m.agent_id(trace.steps[t].agent) == expected[t].agent);
    CHECK(m.contract_id(trace.steps[t].contract) == expected[t].contract);
    CHECK(trace.steps[t].verdict == expected[t].verdict);
  }
}

GeneratorConfig market_config(std::uint64_t seed) {
  GeneratorConfig c;
  c.seed = seed;
  c.agents = 2 + static_cast<int>(seed % 4);
  c.branches = 1 + static_cast<int>(seed % 3);
  c.max_capacity = 2;
  c.max_contracts = 12;
  c.slot_acceptability = 0.6;
  return c;
}

}  // namespace

TEST_SUITE("mechanism") {
  TEST_CASE("uncontested top choices are all granted") {
    const Market m = Builder()
                         .contract("x", "i", "b1")
                         .contract("x2", "i", "b2")
                         .contract("y", "j", "b2")
                         .contract("y2", "j", "b1")
                         .prefers("i", {"x", "x2"})
                         .prefers("j", {"y", "y2"})
                         .branch("b1", 1, {1}, {0}, {{"x", "y2"}}, {{}})
                         .branch("b2", 1, {1}, {0}, {{"x2", "y"}}, {{}})
                         .market();
    CHECK(ids(m, com_outcome(m)) == std::vector<std::string>{"x", "y"});
  }

  TEST_CASE("an agent with an empty ranking never proposes") {
    const Market m = fixtures::shadow_pair(1, {}, {"y"}).market();
    const ComTrace trace = cumulative_offer(m, {});
    for (const auto& s : trace.steps) CHECK(m.agent_id(s.agent) != "i");
    CHECK(ids(m, trace.outcome) == std::vector<std::string>{"y"});
  }

  TEST_CASE("contested seat, lexicographic order") {
    // i proposes x: o1 takes it, e1 stays closed. j proposes y: o1 still
    // prefers x, the shadow is closed, y is rejected.
    const Market m = fixtures::shadow_pair(1).market();
    const ComTrace trace = cumulative_offer(m, {});
    check_steps(m, trace,
                {{"i", "x", Verdict::kHeld}, {"j", "y", Verdict::kRejected}});
    CHECK(ids(m, trace.outcome) == std::vector<std::string>{"x"});
  }

  TEST_CASE("contested seat, reversed order") {
    // Same market with the owner of y proposing first: y enters through the
    // open shadow, then x takes o1 and closes it, so y is displaced.
    const Market m = Builder()
                         .contract("x", "a2", "b")
                         .contract("y", "a1", "b")
                         .prefers("a2", {"x"})
                         .prefers("a1", {"y"})
                         .branch("b", 1, {1}, {1}, {{"x"}}, {{"y", "x"}})
                         .market();
    const ComTrace trace = cumulative_offer(m, {});
    check_steps(m, trace,
                {{"a1", "y", Verdict::kHeld}, {"a2", "x", Verdict::kHeld}});
    CHECK(ids(m, trace.outcome) == std::vector<std::string>{"x"});
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      CHECK(ids(m, com_outcome(m, ProposalPolicy::random(seed))) ==
            std::vector<std::string>{"x"});
    }
  }

  TEST_CASE("trace invariants") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
      const Market m(generate_instance(market_config(seed)));
      const ComTrace trace = cumulative_offer(m, {});
      std::set<ContractIdx> proposed;
      std::vector<std::size_t> last_size(m.num_branches(), 0);
      for (const auto& s : trace.steps) {
        CHECK(proposed.insert(s.contract).second);
        CHECK(m.agent_of(s.contract) == s.agent);
        REQUIRE(s.pools.size() == static_cast<std::size_t>(m.num_branches()));
        for (BranchIdx b = 0; b < m.num_branches(); ++b) {
          CHECK(s.pools[b].size() >= last_size[b]);
          last_size[b] = s.pools[b].size();
        }
      }
      // The outcome is the union of each branch's choice from its pool.
      std::vector<ContractIdx> rebuilt;
      for (BranchIdx b = 0; b < m.num_branches(); ++b) {
        const auto r = sspwct_choose(m, b, trace.final_pools[b]);
        rebuilt.insert(rebuilt.end(), r.chosen.begin(), r.chosen.end());
      }
      std::sort(rebuilt.begin(), rebuilt.end());
      CHECK(rebuilt == trace.outcome.contracts);
      CHECK(is_feasible(m, trace.outcome));
      CHECK(com_outcome(m) == trace.outcome);
    }
  }

  TEST_CASE("proposals follow each agent's ranking") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
      const Market m(generate_instance(market_config(seed)));
      const ComTrace trace = cumulative_offer(m, {});
      std::vector<std::size_t> next(m.num_agents(), 0);
      for (const auto& s : trace.steps) {
        const auto& r = m.ranking(s.agent);
        REQUIRE(next[s.agent] < r.size());
        CHECK(r[next[s.agent]] == s.contract);
        ++next[s.agent];
      }
    }
  }

  TEST_CASE("individual rationality") {
    const Market m = fixtures::shadow_pair(0, {}, {"y"}).market();
    CHECK(is_individually_rational(m, Outcome{}));
    // i does not list x.
    CHECK_FALSE(is_individually_rational(m, m.outcome_from_ids({"x"})));
    // The branch would not keep y: the shadow is closed.
    CHECK_FALSE(is_individually_rational(m, m.outcome_from_ids({"y"})));
  }

  TEST_CASE("an empty seat with a mutually wanted contract is blocked") {
    const Market m = Builder()
                         .contract("x", "i", "b")
                         .prefers("i", {"x"})
                         .branch("b", 1, {1}, {0}, {{"x"}}, {{}})
                         .market();
    const auto block = find_blocking_set(m, Outcome{});
    REQUIRE(block.has_value());
    CHECK(m.branch_id(block->branch) == "b");
    CHECK(m.ids(Outcome{block->contracts}) == std::vector<std::string>{"x"});
    CHECK_FALSE(is_stable(m, Outcome{}));
    CHECK(is_stable(m, com_outcome(m)));
  }

  TEST_CASE("empty market is stable") {
    const Market m{Instance{}};
    CHECK_FALSE(find_blocking_set(m, Outcome{}).has_value());
    CHECK(is_stable(m, com_outcome(m)));
  }

  TEST_CASE("COM outcomes are stable") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
      const Market m(generate_instance(market_config(seed)));
      CHECK_MESSAGE(is_stable(m, com_outcome(m)), "seed " << seed);
    }
  }

  TEST_CASE("blocking enumeration refuses oversized branches") {
    Builder b;
    fixtures::Ids all;
    for (int k = 0; k < 15; ++k) {
      const std::string id = "x" + std::to_string(k);
      b.contract(id, "a" + std::to_string(k), "b");
      all.push_back(id);
    }
    b.branch("b", 1, {1}, {0}, {all}, {{}});
    const Market m = b.market();
    CHECK_THROWS_AS(find_blocking_set(m, Outcome{}), Error);
    CHECK_NOTHROW(find_blocking_set(m, Outcome{}, 15));
  }

  TEST_CASE("reported rankings may not name another agent's contract") {
    const Market m = fixtures::shadow_pair(1).market();
    auto rankings = m.rankings();
    rankings[0] = {*m.find_contract("y")};
    CHECK_THROWS_AS(com_outcome(m, rankings), Error);
  }
}
