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

#include "sspwct/json_io.hpp"

#include <algorithm>

#include "sspwct/error.hpp"

namespace sspwct {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path,
                               const std::string& what) {
  throw Error(ErrorCode::kParse, path + ": " + what);
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    schema_error(path + "." + key, "missing required field");
  }
  return *it;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected a string");
  return v.get<std::string>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_error(path, "expected an integer");
  return v.get<int>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) schema_error(path, "expected an array");
  return v;
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
  std::vector<std::string> out;
  const json& arr = as_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(as_string(arr[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<int> int_list(const json& v, const std::string& path) {
  std::vector<int> out;
  const json& arr = as_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(as_int(arr[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<std::string>> rankings(const json& v,
                                               const std::string& path) {
  std::vector<std::vector<std::string>> out;
  const json& arr = as_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(string_list(arr[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json ids_json(const Market& market, std::vector<ContractIdx> contracts) {
  std::vector<std::string> ids;
  for (ContractIdx c : contracts) ids.push_back(market.contract_id(c));
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) +
                                       ", column " + std::to_string(col) +
                                       ": " + e.what());
  }
}

Instance instance_from_json(const json& doc) {
  Instance inst;
  if (!doc.is_object()) schema_error("$", "expected an object");

  const json& contracts = as_array(field(doc, "$", "contracts"), "contracts");
  for (std::size_t i = 0; i < contracts.size(); ++i) {
    const std::string path = "contracts[" + std::to_string(i) + "]";
    const json& c = contracts[i];
    Contract out;
    out.id = as_string(field(c, path, "id"), path + ".id");
    out.agent = as_string(field(c, path, "agent"), path + ".agent");
    out.branch = as_string(field(c, path, "branch"), path + ".branch");
    if (c.contains("terms")) out.terms = as_string(c["terms"], path + ".terms");
    inst.contracts.push_back(std::move(out));
  }

  const json& prefs = as_array(field(doc, "$", "preferences"), "preferences");
  for (std::size_t i = 0; i < prefs.size(); ++i) {
    const std::string path = "preferences[" + std::to_string(i) + "]";
    AgentPreference p;
    p.agent = as_string(field(prefs[i], path, "agent"), path + ".agent");
    p.ranking = string_list(field(prefs[i], path, "ranking"), path + ".ranking");
    inst.preferences.push_back(std::move(p));
  }

  const json& branches = as_array(field(doc, "$", "branches"), "branches");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string path = "branches[" + std::to_string(i) + "]";
    const json& b = branches[i];
    BranchConfig cfg;
    cfg.id = as_string(field(b, path, "id"), path + ".id");
    cfg.n = as_int(field(b, path, "n"), path + ".n");
    cfg.location = int_list(field(b, path, "location"), path + ".location");
    cfg.transfer = int_list(field(b, path, "transfer"), path + ".transfer");
    cfg.original_priorities = rankings(field(b, path, "original_priorities"),
                                       path + ".original_priorities");
    cfg.shadow_priorities = rankings(field(b, path, "shadow_priorities"),
                                     path + ".shadow_priorities");
    inst.branches.push_back(std::move(cfg));
  }
  return inst;
}

Instance parse_instance(std::string_view text) {
  return instance_from_json(parse_document(text));
}

json instance_to_json(const Instance& instance) {
  json contracts = json::array();
  for (const auto& c : instance.contracts) {
    contracts.push_back(
        {{"id", c.id}, {"agent", c.agent}, {"branch", c.branch},
         {"terms", c.terms}});
  }
  json prefs = json::array();
  for (const auto& p : instance.preferences) {
    prefs.push_back({{"agent", p.agent}, {"ranking", p.ranking}});
  }
  json branches = json::array();
  for (const auto& b : instance.branches) {
    branches.push_back({{"id", b.id},
                        {"n", b.n},
                        {"location", b.location},
                        {"transfer", b.transfer},
                        {"original_priorities", b.original_priorities},
                        {"shadow_priorities", b.shadow_priorities}});
  }
  return {{"contracts", contracts},
          {"preferences", prefs},
          {"branches", branches}};
}

std::string dump_canonical(const json& doc) { return doc.dump(2) + "\n"; }

std::string serialize_instance(const Instance& instance) {
  return dump_canonical(instance_to_json(instance));
}

json validation_to_json(const ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report) {
    violations.push_back({{"code", v.code}, {"message", v.message}});
  }
  return {{"valid", report.empty()}, {"violations", violations}};
}

json outcome_to_json(const Market& market, const Outcome& outcome) {
  return {{"assignment", ids_json(market, outcome.contracts)}};
}

Outcome outcome_from_json(const Market& market, const json& doc) {
  const json* obj = &doc;
  if (doc.is_object() && doc.contains("outcome")) obj = &doc["outcome"];
  const json& list = field(*obj, "$", "assignment");
  return market.outcome_from_ids(string_list(list, "assignment"));
}

json trace_to_json(const Market& market, const ComTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    json step = {{"t", s.t},
                 {"agent", market.agent_id(s.agent)},
                 {"contract", market.contract_id(s.contract)},
                 {"verdict", s.verdict == Verdict::kHeld ? "held" : "rejected"}};
    if (!s.pools.empty()) {
      json pools = json::object();
      for (BranchIdx b = 0; b < market.num_branches(); ++b) {
        json pool = json::array();
        for (ContractIdx c : s.pools[b]) pool.push_back(market.contract_id(c));
        pools[market.branch_id(b)] = pool;
      }
      step["pools"] = pools;
    }
    steps.push_back(std::move(step));
  }
  return {{"steps", steps}, {"outcome", outcome_to_json(market, trace.outcome)}};
}

json blocking_to_json(const Market& market,
                      const std::optional<BlockingSet>& block) {
  if (!block) return nullptr;
  return {{"branch", market.branch_id(block->branch)},
          {"contracts", ids_json(market, block->contracts)}};
}

json verdict_to_json(const PropertyVerdict& verdict) {
  return {{"property", verdict.property},
          {"status", verdict.passed ? "pass" : "fail"},
          {"witness", verdict.witness},
          {"instances_checked", verdict.instances_checked},
          {"cases_checked", verdict.cases_checked}};
}

json report_to_json(const ComparisonReport& report) {
  json agents = json::array();
  for (const auto& a : report.agents) {
    agents.push_back({{"agent", a.agent},
                      {"before", a.before ? json(*a.before) : json(nullptr)},
                      {"after", a.after ? json(*a.after) : json(nullptr)},
                      {"change", to_string(a.change)}});
  }
  return {{"experiment", report.experiment},
          {"baseline", {{"assignment", report.baseline}}},
          {"modified", {{"assignment", report.modified}}},
          {"agents", agents},
          {"protected_agents", report.protected_agents},
          {"verdict", to_string(report.verdict)},
          {"strict_gain", report.strict_gain},
          {"detail", report.detail}};
}

json generator_config_to_json(const GeneratorConfig& c) {
  return {{"seed", c.seed},
          {"agents", c.agents},
          {"branches", c.branches},
          {"min_capacity", c.min_capacity},
          {"max_capacity", c.max_capacity},
          {"min_contracts_per_pair", c.min_contracts_per_pair},
          {"max_contracts_per_pair", c.max_contracts_per_pair},
          {"acceptability", c.acceptability},
          {"slot_acceptability", c.slot_acceptability},
          {"transfer_density", c.transfer_density},
          {"location", to_string(c.location)},
          {"ensure_acceptable", c.ensure_acceptable},
          {"max_contracts", c.max_contracts}};
}

GeneratorConfig generator_config_from_json(const json& doc) {
  GeneratorConfig c;
  if (!doc.is_object()) schema_error("$", "expected an object");
  try {
    c.seed = doc.value("seed", c.seed);
    c.agents = doc.value("agents", c.agents);
    c.branches = doc.value("branches", c.branches);
    c.min_capacity = doc.value("min_capacity", c.min_capacity);
    c.max_capacity = doc.value("max_capacity", c.max_capacity);
    c.min_contracts_per_pair =
        doc.value("min_contracts_per_pair", c.min_contracts_per_pair);
    c.max_contracts_per_pair =
        doc.value("max_contracts_per_pair", c.max_contracts_per_pair);
    c.acceptability = doc.value("acceptability", c.acceptability);
    c.slot_acceptability = doc.value("slot_acceptability", c.slot_acceptability);
    c.transfer_density = doc.value("transfer_density", c.transfer_density);
    if (doc.contains("location")) {
      c.location =
          location_policy_from_string(as_string(doc["location"], "location"));
    }
    c.ensure_acceptable = doc.value("ensure_acceptable", c.ensure_acceptable);
    c.max_contracts = doc.value("max_contracts", c.max_contracts);
  } catch (const json::type_error& e) {
    schema_error("$", e.what());
  }
  return c;
}

}  // namespace sspwct
