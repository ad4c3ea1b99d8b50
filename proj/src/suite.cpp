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

#include "sspwct/suite.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "sspwct/comparative.hpp"
#include "sspwct/error.hpp"
#include "sspwct/json_io.hpp"
#include "sspwct/rng.hpp"

namespace sspwct {

using nlohmann::json;

const std::vector<std::string>& oracle_suite_names() {
  static const std::vector<std::string> kNames = {
      "completion",         "substitutability", "irc",
      "lad",                "stability",        "strategy-proofness",
      "respects-improvements", "order-independence"};
  return kNames;
}

SuiteOptions suite_options_from_json(const json& doc) {
  SuiteOptions o;
  if (doc.is_null()) return o;
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "suite options must be an object");
  }
  try {
    o.suites = doc.value("suites", o.suites);
    o.trials = doc.value("trials", o.trials);
    o.order_seeds = doc.value("order_seeds", o.order_seeds);
    o.seed = doc.value("seed", o.seed);
    o.jobs = doc.value("jobs", o.jobs);
    o.choice_bound = doc.value("choice_bound", o.choice_bound);
    o.blocking_bound = doc.value("blocking_bound", o.blocking_bound);
    o.misreport_bound = doc.value("misreport_bound", o.misreport_bound);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, e.what());
  }
  return o;
}

namespace {

std::vector<std::string> selected(const SuiteOptions& options) {
  const auto& all = oracle_suite_names();
  if (options.suites.empty() ||
      std::find(options.suites.begin(), options.suites.end(), "all") !=
          options.suites.end()) {
    return all;
  }
  for (const auto& s : options.suites) {
    if (std::find(all.begin(), all.end(), s) == all.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown suite '" + s + "'");
    }
  }
  std::vector<std::string> out;
  for (const auto& s : all) {
    if (std::find(options.suites.begin(), options.suites.end(), s) !=
        options.suites.end()) {
      out.push_back(s);
    }
  }
  return out;
}

PropertyVerdict run_one(const std::string& suite, const Market& market,
                        const SuiteOptions& o, std::uint64_t seed) {
  PropertyVerdict v;
  v.property = suite;
  auto per_branch = [&](auto check) {
    for (BranchIdx b = 0; b < market.num_branches(); ++b) {
      PropertyVerdict part = check(b);
      part.instances_checked = 1;
      if (b == 0) {
        v = part;
      } else {
        v.merge(part);
      }
    }
  };
  if (suite == "completion") {
    per_branch([&](BranchIdx b) {
      return check_completion(market, b, o.choice_bound);
    });
  } else if (suite == "substitutability") {
    per_branch([&](BranchIdx b) {
      return check_substitutability(market, b, o.choice_bound);
    });
  } else if (suite == "irc") {
    per_branch([&](BranchIdx b) { return check_irc(market, b, o.choice_bound); });
  } else if (suite == "lad") {
    per_branch([&](BranchIdx b) { return check_lad(market, b, o.choice_bound); });
  } else if (suite == "stability") {
    v = check_stability(market, o.blocking_bound);
  } else if (suite == "strategy-proofness") {
    v = check_strategy_proofness(market, o.misreport_bound);
  } else if (suite == "respects-improvements") {
    Rng rng(seed);
    v.instances_checked = 1;
    for (AgentIdx a = 0; a < market.num_agents(); ++a) {
      PropertyVerdict part =
          check_respects_improvements(market, a, o.trials, rng.next());
      part.instances_checked = 0;
      v.merge(part);
    }
  } else if (suite == "order-independence") {
    Rng rng(seed);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < o.order_seeds; ++i) seeds.push_back(rng.next());
    v = check_order_independence(market, seeds);
  }
  // Normalize: one market counts once whatever the suite did internally.
  v.property = suite;
  v.instances_checked = 1;
  return v;
}

}  // namespace

std::vector<PropertyVerdict> run_oracle_suite(const std::vector<Market>& markets,
                                              const SuiteOptions& options) {
  const auto suites = selected(options);
  // Per-instance seeds are fixed up front so the result does not depend on
  // the number of workers.
  Rng rng(options.seed);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < markets.size(); ++i) seeds.push_back(rng.next());

  std::vector<std::vector<PropertyVerdict>> results(markets.size());
  std::vector<std::exception_ptr> errors(markets.size());
  auto work = [&](std::size_t i) {
    try {
      for (const auto& s : suites) {
        results[i].push_back(run_one(s, markets[i], options, seeds[i]));
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  if (jobs == 1 || markets.size() < 2) {
    for (std::size_t i = 0; i < markets.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < markets.size(); i += jobs) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<PropertyVerdict> merged;
  for (const auto& s : suites) {
    PropertyVerdict v;
    v.property = s;
    merged.push_back(v);
  }
  for (const auto& per_market : results) {
    for (std::size_t k = 0; k < per_market.size(); ++k) {
      merged[k].merge(per_market[k]);
    }
  }
  return merged;
}

namespace {

BranchIdx branch_param(const Market& market, const json& params, Rng& rng) {
  if (params.contains("branch")) {
    const auto id = params["branch"].get<std::string>();
    auto b = market.find_branch(id);
    if (!b) {
      throw Error(ErrorCode::kInvalidArgument, "unknown branch '" + id + "'");
    }
    return *b;
  }
  return rng.uniform(0, market.num_branches() - 1);
}

SlotId slot_from_string(const std::string& text) {
  if (text.size() < 2 || (text[0] != 'o' && text[0] != 'e')) {
    throw Error(ErrorCode::kInvalidArgument, "bad slot name '" + text + "'");
  }
  try {
    return {text[0] == 'o' ? SlotKind::kOriginal : SlotKind::kShadow,
            std::stoi(text.substr(1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad slot name '" + text + "'");
  }
}

std::vector<AddedContract> additions_from_json(const json& list) {
  std::vector<AddedContract> out;
  for (const auto& item : list) {
    AddedContract add;
    add.contract.id = item.at("id").get<std::string>();
    add.contract.agent = item.at("agent").get<std::string>();
    add.contract.branch = item.at("branch").get<std::string>();
    add.contract.terms = item.value("terms", std::string{});
    if (item.contains("preference_position") &&
        !item["preference_position"].is_null()) {
      add.preference_position = item["preference_position"].get<std::size_t>();
    }
    for (const auto& s : item.value("slots", json::array())) {
      add.slots.push_back({slot_from_string(s.at("slot").get<std::string>()),
                           s.value("position", std::size_t{1} << 30)});
    }
    out.push_back(std::move(add));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kKinds = {
      "transfer-flexibility", "capacity-expansion", "contract-addition-bottom",
      "contract-addition-single-agent"};
  return kKinds;
}

json run_experiment(const Market& market, const json& params) {
  if (!params.is_object() || !params.contains("kind")) {
    throw Error(ErrorCode::kInvalidArgument,
                "experiment parameters need a \"kind\" field");
  }
  try {
    const std::string kind_name = params["kind"].get<std::string>();
    const auto known = std::find(experiment_kinds().begin(),
                                 experiment_kinds().end(), kind_name);
    if (known == experiment_kinds().end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown experiment kind '" + kind_name + "'");
    }
    const auto kind = known - experiment_kinds().begin();
    Rng rng(params.value("seed", std::uint64_t{1}));
    if (market.num_branches() == 0) {
      throw Error(ErrorCode::kInvalidArgument, "market has no branches");
    }
    switch (kind) {
      case 0: {
        const BranchIdx b = branch_param(market, params, rng);
        int k = params.value("slot", 0);
        if (k == 0) {
          // First inflexible seat.
          const auto& transfer = market.config(b).transfer;
          auto it = std::find(transfer.begin(), transfer.end(), 0);
          if (it == transfer.end()) {
            throw Error(ErrorCode::kAlreadyFlexible,
                        "every transfer bit of '" + market.branch_id(b) +
                            "' is already 1");
          }
          k = static_cast<int>(it - transfer.begin()) + 1;
        }
        json doc = report_to_json(flexibility_compare(market, b, k));
        doc["branch"] = market.branch_id(b);
        doc["slot"] = k;
        if (doc["detail"] == "shadow-filled") {
          const ImprovementChain chain =
              improvement_chain(market, com_outcome(market), b, k);
          doc["improvement_chain"] = {{"outcome", market.ids(chain.outcome)},
                                      {"matches_com", chain.matches_com},
                                      {"links", chain.links.size()}};
        } else {
          doc["improvement_chain"] = nullptr;
        }
        return doc;
      }
      case 1: {
        const BranchIdx b = branch_param(market, params, rng);
        const auto priority =
            params.contains("priority")
                ? params["priority"].get<std::vector<std::string>>()
                : sample_slot_priority(market, b, rng);
        std::optional<int> position;
        if (params.contains("position")) position = params["position"].get<int>();
        json doc = report_to_json(add_original_slot(market, b, priority, position));
        doc["branch"] = market.branch_id(b);
        doc["priority"] = priority;
        return doc;
      }
      case 2:
      case 3: {
        const AdditionMode mode = kind == 2
                                      ? AdditionMode::kBottom
                                      : AdditionMode::kSingleAgentAnywhere;
        const auto added = params.contains("additions")
                               ? additions_from_json(params["additions"])
                               : sample_additions(market, mode, rng);
        json doc = report_to_json(add_contracts(market, added, mode));
        json ids = json::array();
        for (const auto& a : added) ids.push_back(a.contract.id);
        doc["added"] = ids;
        return doc;
      }
    }
    throw Error(ErrorCode::kInvalidArgument, "unhandled experiment kind");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, e.what());
  }
}

}  // namespace sspwct
