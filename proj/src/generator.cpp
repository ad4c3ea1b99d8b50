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

#include "sspwct/generator.hpp"

#include <algorithm>
#include <string>

#include "sspwct/error.hpp"

namespace sspwct {

const char* to_string(LocationPolicy policy) {
  switch (policy) {
    case LocationPolicy::kAdjacent: return "adjacent";
    case LocationPolicy::kTerminal: return "terminal";
    case LocationPolicy::kRandomValid: return "random";
  }
  return "random";
}

LocationPolicy location_policy_from_string(const std::string& name) {
  if (name == "adjacent") return LocationPolicy::kAdjacent;
  if (name == "terminal") return LocationPolicy::kTerminal;
  if (name == "random" || name == "random-valid") {
    return LocationPolicy::kRandomValid;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown location policy '" + name + "'");
}

namespace {

std::string padded(char prefix, int value, int count) {
  int width = 1;
  for (int v = std::max(count - 1, 0); v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

void check(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

Instance generate_instance(const GeneratorConfig& config) {
  Rng rng(config.seed);
  return generate_instance(config, rng);
}

Instance generate_instance(const GeneratorConfig& c, Rng& rng) {
  check(c.agents >= 0, "agent count must be non-negative");
  check(c.branches >= 1, "at least one branch is required");
  check(c.min_capacity >= 1 && c.max_capacity >= c.min_capacity,
        "capacity range must satisfy 1 <= min <= max");
  check(c.min_contracts_per_pair >= 0 &&
            c.max_contracts_per_pair >= c.min_contracts_per_pair,
        "contracts-per-pair range must satisfy 0 <= min <= max");
  check(c.acceptability > 0.0 && c.acceptability <= 1.0,
        "acceptability density must lie in (0, 1]");
  check(c.slot_acceptability >= 0.0 && c.slot_acceptability <= 1.0,
        "slot acceptability density must lie in [0, 1]");
  check(c.transfer_density >= 0.0 && c.transfer_density <= 1.0,
        "transfer density must lie in [0, 1]");

  Instance inst;
  std::vector<std::string> agents;
  for (int a = 0; a < c.agents; ++a) agents.push_back(padded('a', a, c.agents));
  std::vector<std::string> branches;
  for (int b = 0; b < c.branches; ++b) {
    branches.push_back(padded('b', b, c.branches));
  }

  for (const auto& agent : agents) {
    for (const auto& branch : branches) {
      const int count =
          rng.uniform(c.min_contracts_per_pair, c.max_contracts_per_pair);
      for (int t = 0; t < count; ++t) {
        if (c.max_contracts > 0 &&
            static_cast<int>(inst.contracts.size()) >= c.max_contracts) {
          break;
        }
        inst.contracts.push_back({"", agent, branch, "t" + std::to_string(t)});
      }
    }
  }
  const int total = static_cast<int>(inst.contracts.size());
  for (int i = 0; i < total; ++i) {
    inst.contracts[i].id = padded('c', i, total);
  }

  for (const auto& agent : agents) {
    std::vector<std::string> mine;
    for (const auto& ct : inst.contracts) {
      if (ct.agent == agent) mine.push_back(ct.id);
    }
    rng.shuffle(mine);
    AgentPreference pref{agent, {}};
    for (const auto& id : mine) {
      if (rng.bernoulli(c.acceptability)) pref.ranking.push_back(id);
    }
    if (c.ensure_acceptable && pref.ranking.empty() && !mine.empty()) {
      pref.ranking.push_back(mine.front());
    }
    inst.preferences.push_back(std::move(pref));
  }

  for (const auto& branch : branches) {
    BranchConfig cfg;
    cfg.id = branch;
    cfg.n = rng.uniform(c.min_capacity, c.max_capacity);
    int prev = 1;
    for (int k = 1; k <= cfg.n; ++k) {
      int l = k;
      switch (c.location) {
        case LocationPolicy::kAdjacent: l = k; break;
        case LocationPolicy::kTerminal: l = cfg.n; break;
        case LocationPolicy::kRandomValid:
          l = rng.uniform(std::max(k, prev), cfg.n);
          break;
      }
      cfg.location.push_back(l);
      prev = l;
    }
    for (int k = 0; k < cfg.n; ++k) {
      cfg.transfer.push_back(rng.bernoulli(c.transfer_density) ? 1 : 0);
    }
    std::vector<std::string> pool;
    for (const auto& ct : inst.contracts) {
      if (ct.branch == branch) pool.push_back(ct.id);
    }
    auto draw = [&] {
      std::vector<std::string> order = pool;
      rng.shuffle(order);
      std::vector<std::string> list;
      for (const auto& id : order) {
        if (rng.bernoulli(c.slot_acceptability)) list.push_back(id);
      }
      return list;
    };
    for (int k = 0; k < cfg.n; ++k) cfg.original_priorities.push_back(draw());
    for (int k = 0; k < cfg.n; ++k) cfg.shadow_priorities.push_back(draw());
    inst.branches.push_back(std::move(cfg));
  }
  return inst;
}

}  // namespace sspwct
