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

#include "sspwct/sspwct.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "sspwct/choice.hpp"
#include "sspwct/error.hpp"
#include "sspwct/generator.hpp"
#include "sspwct/json_io.hpp"
#include "sspwct/mechanism.hpp"
#include "sspwct/rng.hpp"
#include "sspwct/suite.hpp"

using nlohmann::json;

struct sspwct_instance {
  sspwct::Instance instance;
  sspwct::ValidationReport report;
  std::optional<sspwct::Market> market;  // set iff report is empty
};

namespace {

thread_local std::string g_last_error;

sspwct_status status_of(sspwct::ErrorCode code) {
  using sspwct::ErrorCode;
  switch (code) {
    case ErrorCode::kParse: return SSPWCT_PARSE;
    case ErrorCode::kValidation: return SSPWCT_VALIDATION;
    case ErrorCode::kInvalidArgument: return SSPWCT_INVALID_ARGUMENT;
    case ErrorCode::kForeignContract: return SSPWCT_FOREIGN_CONTRACT;
    case ErrorCode::kInstanceTooLarge: return SSPWCT_INSTANCE_TOO_LARGE;
    case ErrorCode::kAlreadyFlexible: return SSPWCT_ALREADY_FLEXIBLE;
    case ErrorCode::kPreconditionUnmet: return SSPWCT_PRECONDITION_UNMET;
    case ErrorCode::kConditionViolation: return SSPWCT_CONDITION_VIOLATION;
  }
  return SSPWCT_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
sspwct_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SSPWCT_OK;
  } catch (const sspwct::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return SSPWCT_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SSPWCT_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SSPWCT_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SSPWCT_INTERNAL;
  }
}

char* copy_out(const std::string& text) {
  char* p = static_cast<char*>(std::malloc(text.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, text.c_str(), text.size() + 1);
  return p;
}

void require(bool ok, const char* what) {
  if (!ok) throw sspwct::Error(sspwct::ErrorCode::kInvalidArgument, what);
}

const sspwct::Market& market_of(const sspwct_instance* inst) {
  require(inst != nullptr, "instance is null");
  if (!inst->market) {
    std::string msg = "instance is not valid";
    for (const auto& v : inst->report) msg += "; " + v.message;
    throw sspwct::Error(sspwct::ErrorCode::kValidation, msg);
  }
  return *inst->market;
}

json options_doc(const char* text) {
  if (text == nullptr || *text == '\0') return json::object();
  json doc = sspwct::parse_document(text);
  require(doc.is_object(), "options must be a JSON object");
  return doc;
}

sspwct_instance* adopt(sspwct::Instance instance) {
  auto* out = new sspwct_instance;
  out->report = sspwct::validate_instance(instance);
  out->instance = std::move(instance);
  if (out->report.empty()) out->market.emplace(out->instance);
  return out;
}

sspwct::BranchIdx branch_arg(const sspwct::Market& market, const char* id) {
  require(id != nullptr, "branch is null");
  auto b = market.find_branch(id);
  if (!b) {
    throw sspwct::Error(sspwct::ErrorCode::kInvalidArgument,
                        std::string("unknown branch '") + id + "'");
  }
  return *b;
}

const char* state_name(sspwct::SlotState s) {
  switch (s) {
    case sspwct::SlotState::kInactive: return "inactive";
    case sspwct::SlotState::kEmpty: return "empty";
    case sspwct::SlotState::kFilled: return "filled";
  }
  return "empty";
}

}  // namespace

extern "C" {

const char* sspwct_version(void) { return "1.0.0"; }

const char* sspwct_last_error(void) { return g_last_error.c_str(); }

const char* sspwct_status_name(sspwct_status status) {
  switch (status) {
    case SSPWCT_OK: return "ok";
    case SSPWCT_PARSE: return "parse";
    case SSPWCT_VALIDATION: return "validation";
    case SSPWCT_INVALID_ARGUMENT: return "invalid-argument";
    case SSPWCT_FOREIGN_CONTRACT: return "foreign-contract";
    case SSPWCT_INSTANCE_TOO_LARGE: return "instance-too-large";
    case SSPWCT_ALREADY_FLEXIBLE: return "already-flexible";
    case SSPWCT_PRECONDITION_UNMET: return "precondition-unmet";
    case SSPWCT_CONDITION_VIOLATION: return "condition-violation";
    case SSPWCT_INTERNAL: return "internal";
  }
  return "unknown";
}

void sspwct_string_free(char* s) { std::free(s); }

sspwct_status sspwct_instance_parse(const char* text, size_t len,
                                    sspwct_instance** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    require(text != nullptr, "text is null");
    *out = adopt(sspwct::parse_instance(std::string_view(text, len)));
  });
}

sspwct_status sspwct_instance_generate(const char* config_json,
                                       sspwct_instance** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    const auto config =
        sspwct::generator_config_from_json(options_doc(config_json));
    *out = adopt(sspwct::generate_instance(config));
  });
}

void sspwct_instance_free(sspwct_instance* instance) { delete instance; }

sspwct_status sspwct_instance_serialize(const sspwct_instance* instance,
                                        char** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    require(instance != nullptr, "instance is null");
    *out = copy_out(sspwct::serialize_instance(instance->instance));
  });
}

sspwct_status sspwct_instance_validate(const sspwct_instance* instance,
                                       char** out, int* valid) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    require(instance != nullptr, "instance is null");
    if (valid) *valid = instance->report.empty() ? 1 : 0;
    *out = copy_out(sspwct::dump_canonical(
        sspwct::validation_to_json(instance->report)));
  });
}

sspwct_status sspwct_slot_sequence(const sspwct_instance* instance,
                                   const char* branch, char** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    const auto& market = market_of(instance);
    const auto b = branch_arg(market, branch);
    json seq = json::array();
    for (const auto& s : market.rule(b).sequence().order) {
      seq.push_back(sspwct::to_string(s));
    }
    *out = copy_out(sspwct::dump_canonical(seq));
  });
}

sspwct_status sspwct_choose(const sspwct_instance* instance, const char* branch,
                            const char* offers_json, int completion,
                            char** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    const auto& market = market_of(instance);
    const auto b = branch_arg(market, branch);
    require(offers_json != nullptr, "offers are null");
    const json offers_doc = sspwct::parse_document(offers_json);
    require(offers_doc.is_array(), "offers must be an array of contract ids");
    const auto offers =
        market.outcome_from_ids(offers_doc.get<std::vector<std::string>>());
    const auto result = market.rule(b).choose(
        offers.contracts, completion ? sspwct::RuleVariant::kCompletion
                                     : sspwct::RuleVariant::kSspwct);
    json chosen = json::array();
    for (auto c : result.chosen) chosen.push_back(market.contract_id(c));
    std::sort(chosen.begin(), chosen.end());
    json per_slot = json::array();
    for (const auto& s : result.per_slot) {
      per_slot.push_back(
          {{"slot", sspwct::to_string(s.slot)},
           {"state", state_name(s.state)},
           {"contract", s.contract == sspwct::kNone
                            ? json(nullptr)
                            : json(market.contract_id(s.contract))}});
    }
    json filled = json::object();
    for (std::size_t k = 0; k < result.filled.size(); ++k) {
      filled["o" + std::to_string(k + 1)] = result.filled[k];
    }
    *out = copy_out(sspwct::dump_canonical(
        {{"chosen", chosen}, {"per_slot", per_slot}, {"filled", filled}}));
  });
}

sspwct_status sspwct_run(const sspwct_instance* instance,
                         const char* options_json, char** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    const auto& market = market_of(instance);
    const json opts = options_doc(options_json);
    const std::string policy = opts.value("policy", std::string("lex"));
    sspwct::ComOptions options;
    if (policy == "random") {
      options.policy =
          sspwct::ProposalPolicy::random(opts.value("seed", std::uint64_t{1}));
    } else {
      require(policy == "lex", "policy must be \"lex\" or \"random\"");
    }
    const bool trace = opts.value("trace", false);
    options.record_pools = trace;
    const auto result = sspwct::cumulative_offer(market, options);
    json doc = {{"outcome", sspwct::outcome_to_json(market, result.outcome)}};
    if (trace) doc["trace"] = sspwct::trace_to_json(market, result);
    *out = copy_out(sspwct::dump_canonical(doc));
  });
}

sspwct_status sspwct_verify(const sspwct_instance* instance,
                            const char* outcome_json, char** out, int* stable) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    const auto& market = market_of(instance);
    require(outcome_json != nullptr, "outcome is null");
    const auto outcome = sspwct::outcome_from_json(
        market, sspwct::parse_document(outcome_json));
    const bool feasible = sspwct::is_feasible(market, outcome);
    const bool ir = feasible && sspwct::is_individually_rational(market, outcome);
    std::optional<sspwct::BlockingSet> block;
    if (feasible) block = sspwct::find_blocking_set(market, outcome);
    const bool ok = ir && !block;
    if (stable) *stable = ok ? 1 : 0;
    *out = copy_out(sspwct::dump_canonical(
        {{"outcome", sspwct::outcome_to_json(market, outcome)},
         {"feasible", feasible},
         {"individually_rational", ir},
         {"blocking", sspwct::blocking_to_json(market, block)},
         {"stable", ok}}));
  });
}

sspwct_status sspwct_oracle(const sspwct_instance* const* instances,
                            size_t count, const char* options_json, char** out,
                            int* all_passed) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    require(instances != nullptr || count == 0, "instances are null");
    const auto options = sspwct::suite_options_from_json(options_doc(options_json));
    std::vector<sspwct::Market> markets;
    markets.reserve(count);
    for (size_t i = 0; i < count; ++i) markets.push_back(market_of(instances[i]));
    const auto verdicts = sspwct::run_oracle_suite(markets, options);
    bool passed = true;
    json list = json::array();
    for (const auto& v : verdicts) {
      passed = passed && v.passed;
      list.push_back(sspwct::verdict_to_json(v));
    }
    if (all_passed) *all_passed = passed ? 1 : 0;
    *out = copy_out(sspwct::dump_canonical(
        {{"status", passed ? "pass" : "fail"},
         {"instances", count},
         {"seed", options.seed},
         {"rng", {{"name", sspwct::Rng::kName},
                  {"version", sspwct::Rng::kRngVersion}}},
         {"verdicts", list}}));
  });
}

sspwct_status sspwct_experiment(const sspwct_instance* instance,
                                const char* params_json, char** out,
                                int* violated) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    const auto& market = market_of(instance);
    const json doc = sspwct::run_experiment(market, options_doc(params_json));
    bool bad = doc.at("verdict") == "violates";
    if (doc.contains("improvement_chain") &&
        doc["improvement_chain"].is_object()) {
      bad = bad || !doc["improvement_chain"].value("matches_com", false);
    }
    if (violated) *violated = bad ? 1 : 0;
    *out = copy_out(sspwct::dump_canonical(doc));
  });
}

}  // extern "C"
