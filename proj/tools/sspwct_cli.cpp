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

// Command-line front end over the C library.
//
// Exit codes: 0 success, 2 unusable input (parse, validation, bad argument),
// 3 a property verdict failed, 1 internal error. Data goes to stdout,
// diagnostics to stderr.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sspwct/sspwct.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitFail = 3;

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "transfer-flexibility", "capacity-expansion", "contract-addition-bottom",
      "contract-addition-single-agent"};
  return kinds;
}

struct CliError {
  int exit_code;
  std::string message;
};

struct InstanceDeleter {
  void operator()(sspwct_instance* p) const { sspwct_instance_free(p); }
};
using InstancePtr = std::unique_ptr<sspwct_instance, InstanceDeleter>;

// Turns a C status into an exception carrying the exit code.
void check(sspwct_status status, const std::string& context) {
  if (status == SSPWCT_OK) return;
  std::string msg = context + ": " + sspwct_status_name(status);
  const std::string detail = sspwct_last_error();
  if (!detail.empty()) msg += ": " + detail;
  throw CliError{status == SSPWCT_INTERNAL ? kExitInternal : kExitInput, msg};
}

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  sspwct_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), {}};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitInput, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitInput, "cannot write '" + path + "'"};
  out << text;
}

InstancePtr load(const std::string& path) {
  const std::string text = read_file(path);
  sspwct_instance* raw = nullptr;
  check(sspwct_instance_parse(text.data(), text.size(), &raw), path);
  InstancePtr inst(raw);
  int valid = 0;
  char* report = nullptr;
  check(sspwct_instance_validate(inst.get(), &report, &valid), path);
  const std::string doc = take(report);
  if (!valid) {
    std::cerr << path << ": invalid instance\n" << doc;
    throw CliError{kExitInput, path + ": validation failed"};
  }
  return inst;
}

struct GenFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> agents, branches, min_capacity, max_capacity;
  std::optional<int> min_contracts, max_contracts, max_universe;
  std::optional<double> acceptability, slot_acceptability, transfer_density;
  std::optional<std::string> location;
  bool no_ensure_acceptable = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Generator config JSON file");
    cmd->add_option("--agents", agents, "Number of agents");
    cmd->add_option("--branches", branches, "Number of branches");
    cmd->add_option("--min-capacity", min_capacity, "Smallest branch capacity");
    cmd->add_option("--max-capacity", max_capacity, "Largest branch capacity");
    cmd->add_option("--min-contracts", min_contracts,
                    "Fewest contracts per agent-branch pair");
    cmd->add_option("--max-contracts", max_contracts,
                    "Most contracts per agent-branch pair");
    cmd->add_option("--max-universe", max_universe,
                    "Cap on the total number of contracts (0 = none)");
    cmd->add_option("--acceptability", acceptability,
                    "Probability an agent lists a contract");
    cmd->add_option("--slot-acceptability", slot_acceptability,
                    "Probability a slot lists a contract");
    cmd->add_option("--transfer-density", transfer_density,
                    "Probability a transfer bit is 1");
    cmd->add_option("--location", location,
                    "Location policy: adjacent, terminal or random");
    cmd->add_flag("--no-ensure-acceptable", no_ensure_acceptable,
                  "Allow agents with no acceptable contract");
  }

  json config(std::uint64_t default_seed) const {
    json c = json::object();
    if (!config_path.empty()) {
      try {
        c = json::parse(read_file(config_path));
      } catch (const json::exception& e) {
        throw CliError{kExitInput, config_path + ": " + e.what()};
      }
    }
    c["seed"] = seed.value_or(c.value("seed", default_seed));
    if (agents) c["agents"] = *agents;
    if (branches) c["branches"] = *branches;
    if (min_capacity) c["min_capacity"] = *min_capacity;
    if (max_capacity) c["max_capacity"] = *max_capacity;
    if (min_contracts) c["min_contracts_per_pair"] = *min_contracts;
    if (max_contracts) c["max_contracts_per_pair"] = *max_contracts;
    if (max_universe) c["max_contracts"] = *max_universe;
    if (acceptability) c["acceptability"] = *acceptability;
    if (slot_acceptability) c["slot_acceptability"] = *slot_acceptability;
    if (transfer_density) c["transfer_density"] = *transfer_density;
    if (location) c["location"] = *location;
    if (no_ensure_acceptable) c["ensure_acceptable"] = false;
    return c;
  }
};

InstancePtr generate(const json& config) {
  sspwct_instance* raw = nullptr;
  check(sspwct_instance_generate(config.dump().c_str(), &raw), "gen");
  return InstancePtr(raw);
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSPwCT choice rules, cumulative offer mechanism and property oracles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sspwct_version()));

  // run
  std::string run_path;
  bool run_trace = false;
  std::string run_policy = "lex";
  std::uint64_t run_seed = 1;
  auto* run = app.add_subcommand("run", "Run the cumulative offer mechanism");
  run->add_option("instance", run_path, "Instance JSON file ('-' = stdin)")
      ->required();
  run->add_flag("--trace", run_trace, "Include the step log");
  run->add_option("--policy", run_policy, "Proposal order: lex or random")
      ->check(CLI::IsMember({"lex", "random"}));
  run->add_option("--seed", run_seed, "Seed for the random proposal order");

  // verify
  std::string verify_instance, verify_outcome;
  auto* verify = app.add_subcommand("verify", "Check stability of an outcome");
  verify->add_option("instance", verify_instance, "Instance JSON file")
      ->required();
  verify->add_option("outcome", verify_outcome,
                     "Outcome JSON ({\"assignment\": [...]} or run output)")
      ->required();

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "List invariant violations");
  validate->add_option("instance", validate_path, "Instance JSON file")
      ->required();

  // sequence / choose
  std::string seq_path, seq_branch;
  auto* sequence =
      app.add_subcommand("sequence", "Print a branch's slot processing order");
  sequence->add_option("instance", seq_path, "Instance JSON file")->required();
  sequence->add_option("--branch", seq_branch, "Branch id")->required();

  std::string choose_path, choose_branch, choose_offers;
  bool choose_completion = false;
  auto* choose = app.add_subcommand("choose", "Apply a branch's choice rule");
  choose->add_option("instance", choose_path, "Instance JSON file")->required();
  choose->add_option("--branch", choose_branch, "Branch id")->required();
  choose->add_option("--offers", choose_offers,
                     "Comma-separated contract ids");
  choose->add_flag("--completion", choose_completion,
                   "Use the completion (remove only chosen contracts)");

  // oracle
  std::vector<std::string> oracle_paths;
  bool oracle_gen = false;
  int oracle_instances = 20;
  std::vector<std::string> oracle_suites{"all"};
  int oracle_trials = 20;
  int oracle_order_seeds = 20;
  std::uint64_t oracle_seed = 1;
  int oracle_jobs = 1;
  GenFlags oracle_gen_flags;
  auto* oracle = app.add_subcommand("oracle", "Run property suites");
  oracle->add_option("files", oracle_paths, "Instance JSON files");
  oracle->add_flag("--gen", oracle_gen, "Check a generated batch");
  oracle->add_option("--instances", oracle_instances,
                     "Batch size with --gen");
  oracle->add_option("--suite", oracle_suites,
                     "Suites (comma separated or repeated); 'all' = every suite")
      ->delimiter(',');
  oracle->add_option("--trials", oracle_trials, "Improvements per agent");
  oracle->add_option("--order-seeds", oracle_order_seeds,
                     "Random proposal orders per instance");
  oracle->add_option("--seed", oracle_seed, "Master seed");
  oracle->add_option("--jobs", oracle_jobs, "Worker threads across instances")
      ->check(CLI::PositiveNumber);
  oracle_gen_flags.add_to(oracle);

  // experiment
  std::string exp_path;
  std::string exp_kind;
  std::optional<std::string> exp_branch, exp_priority, exp_additions;
  std::optional<int> exp_slot, exp_position;
  std::uint64_t exp_seed = 1;
  auto* experiment =
      app.add_subcommand("experiment", "Comparative-statics experiment");
  experiment->add_option("instance", exp_path, "Instance JSON file")->required();
  experiment
      ->add_option("--kind", exp_kind,
                   "transfer-flexibility, capacity-expansion, "
                   "contract-addition-bottom or contract-addition-single-agent")
      ->required()
      ->check(CLI::IsMember(experiment_kinds()));
  experiment->add_option("--branch", exp_branch, "Branch id");
  experiment->add_option("--slot", exp_slot, "Transfer bit to flip (1-based)");
  experiment->add_option("--priority", exp_priority,
                         "New seat's ranking, comma-separated contract ids");
  experiment->add_option("--position", exp_position,
                         "New seat's precedence position (0-based)");
  experiment->add_option("--additions", exp_additions,
                         "JSON file with the contracts to add");
  experiment->add_option("--seed", exp_seed,
                         "Seed for parameters not given explicitly");

  // gen
  GenFlags gen_flags;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a random valid instance");
  gen->add_option("--seed", gen_flags.seed, "Generator seed");
  gen_flags.add_to(gen);
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*run) {
      auto inst = load(run_path);
      json opts = {{"policy", run_policy}, {"seed", run_seed},
                   {"trace", run_trace}};
      char* out = nullptr;
      check(sspwct_run(inst.get(), opts.dump().c_str(), &out), "run");
      write_output(take(out), "");
      return kExitOk;
    }
    if (*verify) {
      auto inst = load(verify_instance);
      const std::string outcome = read_file(verify_outcome);
      char* out = nullptr;
      int stable = 0;
      check(sspwct_verify(inst.get(), outcome.c_str(), &out, &stable),
            verify_outcome);
      write_output(take(out), "");
      return stable ? kExitOk : kExitFail;
    }
    if (*validate) {
      const std::string text = read_file(validate_path);
      sspwct_instance* raw = nullptr;
      check(sspwct_instance_parse(text.data(), text.size(), &raw),
            validate_path);
      InstancePtr inst(raw);
      char* out = nullptr;
      int valid = 0;
      check(sspwct_instance_validate(inst.get(), &out, &valid), validate_path);
      write_output(take(out), "");
      return valid ? kExitOk : kExitInput;
    }
    if (*sequence) {
      auto inst = load(seq_path);
      char* out = nullptr;
      check(sspwct_slot_sequence(inst.get(), seq_branch.c_str(), &out),
            "sequence");
      write_output(take(out), "");
      return kExitOk;
    }
    if (*choose) {
      auto inst = load(choose_path);
      const json offers = split_ids(choose_offers);
      char* out = nullptr;
      check(sspwct_choose(inst.get(), choose_branch.c_str(),
                          offers.dump().c_str(), choose_completion ? 1 : 0,
                          &out),
            "choose");
      write_output(take(out), "");
      return kExitOk;
    }
    if (*oracle) {
      std::vector<InstancePtr> owned;
      for (const auto& p : oracle_paths) owned.push_back(load(p));
      if (oracle_gen) {
        // Instance i of the batch uses generator seed (seed + i).
        const json base = oracle_gen_flags.config(oracle_seed);
        const std::uint64_t first = base["seed"].get<std::uint64_t>();
        for (int i = 0; i < oracle_instances; ++i) {
          json c = base;
          c["seed"] = first + static_cast<std::uint64_t>(i);
          owned.push_back(generate(c));
        }
      }
      if (owned.empty()) {
        throw CliError{kExitInput, "oracle: give instance files or --gen"};
      }
      std::vector<const sspwct_instance*> handles;
      for (const auto& p : owned) handles.push_back(p.get());
      json opts = {{"suites", oracle_suites},
                   {"trials", oracle_trials},
                   {"order_seeds", oracle_order_seeds},
                   {"seed", oracle_seed},
                   {"jobs", oracle_jobs}};
      char* out = nullptr;
      int passed = 0;
      check(sspwct_oracle(handles.data(), handles.size(), opts.dump().c_str(),
                          &out, &passed),
            "oracle");
      write_output(take(out), "");
      return passed ? kExitOk : kExitFail;
    }
    if (*experiment) {
      auto inst = load(exp_path);
      json params = {{"kind", exp_kind}, {"seed", exp_seed}};
      if (exp_branch) params["branch"] = *exp_branch;
      if (exp_slot) params["slot"] = *exp_slot;
      if (exp_priority) params["priority"] = split_ids(*exp_priority);
      if (exp_position) params["position"] = *exp_position;
      if (exp_additions) {
        try {
          params["additions"] = json::parse(read_file(*exp_additions));
        } catch (const json::exception& e) {
          throw CliError{kExitInput, *exp_additions + ": " + e.what()};
        }
      }
      char* out = nullptr;
      int violated = 0;
      check(sspwct_experiment(inst.get(), params.dump().c_str(), &out,
                              &violated),
            "experiment");
      write_output(take(out), "");
      return violated ? kExitFail : kExitOk;
    }
    if (*gen) {
      auto inst = generate(gen_flags.config(1));
      char* out = nullptr;
      check(sspwct_instance_serialize(inst.get(), &out), "gen");
      write_output(take(out), gen_out);
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "sspwct: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "sspwct: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
