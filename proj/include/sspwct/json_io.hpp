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

// JSON documents exchanged by the library and the command-line tool.
//
// Instance:
//   {"branches": [{"id", "n", "location": [int], "transfer": [0|1],
//                  "original_priorities": [[id]], "shadow_priorities": [[id]]}],
//    "contracts": [{"id", "agent", "branch", "terms"}],
//    "preferences": [{"agent", "ranking": [id]}]}
//
// Serialization is canonical: keys sorted, two-space indent, trailing newline.

#ifndef SSPWCT_JSON_IO_HPP_
#define SSPWCT_JSON_IO_HPP_

#include <string>
#include <string_view>

#include "json.hpp"
#include "sspwct/comparative.hpp"
#include "sspwct/generator.hpp"
#include "sspwct/mechanism.hpp"
#include "sspwct/model.hpp"
#include "sspwct/oracles.hpp"

namespace sspwct {

// Throws Error(kParse) naming the line/column for syntax errors and the JSON
// path (e.g. "branches[0].transfer") for schema errors.
Instance parse_instance(std::string_view text);
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);
std::string serialize_instance(const Instance& instance);

// Canonical text of any document.
std::string dump_canonical(const nlohmann::json& doc);

// Parses text into a document, raising kParse with line/column on failure.
nlohmann::json parse_document(std::string_view text);

nlohmann::json validation_to_json(const ValidationReport& report);

// {"assignment": [ids]}.
nlohmann::json outcome_to_json(const Market& market, const Outcome& outcome);
// Accepts {"assignment": [...]} or a run result {"outcome": {...}}.
Outcome outcome_from_json(const Market& market, const nlohmann::json& doc);

nlohmann::json trace_to_json(const Market& market, const ComTrace& trace);
nlohmann::json blocking_to_json(const Market& market,
                                const std::optional<BlockingSet>& block);

nlohmann::json verdict_to_json(const PropertyVerdict& verdict);
nlohmann::json report_to_json(const ComparisonReport& report);

nlohmann::json generator_config_to_json(const GeneratorConfig& config);
// Missing keys keep their defaults.
GeneratorConfig generator_config_from_json(const nlohmann::json& doc);

}  // namespace sspwct

#endif  // SSPWCT_JSON_IO_HPP_
