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


// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Sizes, seeds and time limits are fixed below.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "fixtures.hpp"
#include "sspwct/choice.hpp"
#include "sspwct/comparative.hpp"
#include "sspwct/generator.hpp"
#include "sspwct/json_io.hpp"
#include "sspwct/mechanism.hpp"
#include "sspwct/oracles.hpp"
#include "witness_replay.hpp"

#ifndef SSPWCT_CLI_PATH
#error "SSPWCT_CLI_PATH must name the sspwct executable"
#endif

using namespace sspwct;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Budgets.
constexpr double kSequenceLimitMs = 1.0;
constexpr double kReductionLimitS = 10.0;
constexpr double kChoiceLimitS = 300.0;
constexpr double kStabilityLimitS = 300.0;
constexpr double kStrategyLimitS = 600.0;
constexpr double kImprovementLimitS = 120.0;
constexpr double kOrderLimitS = 120.0;
constexpr double kFlexibilityLimitS = 180.0;
constexpr double kExpansionLimitS = 300.0;

// Sizes.
constexpr int kReductionConfigs = 100;
constexpr int kReductionMaxContracts = 6;
constexpr int kChoiceConfigs = 1000;
constexpr int kChoiceMaxContracts = 7;
constexpr int kMaxSeats = 3;
constexpr int kMutationSeeds = 400;
constexpr int kStabilityInstances = 500;
constexpr int kStabilityMaxContracts = 12;
constexpr int kStrategyInstances = 300;
constexpr int kImprovementTriples = 500;
constexpr int kOrderInstances = 200;
constexpr int kOrderSeeds = 20;
constexpr int kFlexibilityInstances = 300;
constexpr int kFlexibilityMinStrict = 30;
constexpr int kExpansionInstances = 200;
constexpr int kPipelineSeeds = 5;

int failures = 0;

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

void report(int id, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << what << "\n";
  std::cout.flush();
  if (!ok) ++failures;
}

std::string secs(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s << " s";
  return o.str();
}

GeneratorConfig single_branch(std::uint64_t seed, int max_contracts,
                              double transfer_density) {
  GeneratorConfig c;
  c.seed = seed;
  c.agents = 2 + static_cast<int>(seed % 3);
  c.branches = 1;
  c.max_capacity = kMaxSeats;
  c.max_contracts_per_pair = 3;
  c.max_contracts = max_contracts;
  c.transfer_density = transfer_density;
  c.location = static_cast<LocationPolicy>(seed % 3);
  return c;
}

GeneratorConfig market(std::uint64_t seed, int max_agents, int max_branches,
                       int max_contracts) {
  GeneratorConfig c;
  c.seed = seed;
  c.agents = 1 + static_cast<int>(seed % max_agents);
  c.branches = 1 + static_cast<int>((seed / 7) % max_branches);
  c.max_capacity = 2;
  c.max_contracts = max_contracts;
  c.slot_acceptability = 0.6;
  return c;
}

void sequences() {
  Timer t;
  auto names = [](std::vector<int> l) {
    BranchConfig cfg;
    cfg.n = static_cast<int>(l.size());
    cfg.location = std::move(l);
    std::string s;
    for (const auto& slot : build_slot_sequence(cfg).order) {
      s += (s.empty() ? "" : ",") + to_string(slot);
    }
    return s;
  };
  const bool ok = names({1, 3, 3}) == "o1,e1,o2,o3,e2,e3" &&
                  names({1, 2, 3}) == "o1,e1,o2,e2,o3,e3" &&
                  names({3, 3, 3}) == "o1,o2,o3,e1,e2,e3";
  const double ms = t.seconds() * 1000.0;
  report(1, ok && ms < kSequenceLimitMs,
         "slot sequences for L=(1,3,3), (1,2,3), (3,3,3) (" +
             std::to_string(ms) + " ms)");
}

void reduction() {
  Timer t;
  long sets = 0;
  bool ok = true;
  for (int i = 1; i <= kReductionConfigs && ok; ++i) {
    const Market m(generate_instance(
        single_branch(1000 + i, kReductionMaxContracts, 0.0)));
    const BranchRule& rule = m.rule(0);
    const OfferMask full = (OfferMask{1} << rule.num_contracts()) - 1;
    for (OfferMask x = 0; x <= full && ok; ++x) {
      std::set<std::string> offered, got;
      for (ContractIdx c : rule.from_mask(x)) offered.insert(m.contract_id(c));
      for (ContractIdx c : rule.choose(rule.from_mask(x)).chosen) {
        got.insert(m.contract_id(c));
      }
      ok = got == fixtures::reference_ssp_choice(m.instance(), m.branch_id(0),
                                                  offered);
      ++sets;
    }
  }
  const double s = t.seconds();
  report(2, ok && s < kReductionLimitS,
         std::to_string(kReductionConfigs) +
             " configs without transfers match plain slot-specific "
             "priorities on " + std::to_string(sets) + " offer sets (" +
             secs(s) + ")");
}

using ChoiceCheck =
    std::function<PropertyVerdict(const Market&, BranchIdx, RuleMutation)>;

struct ChoiceProperty {
  const char* name;
  ChoiceCheck check;
  RuleMutation mutation;
};

const std::vector<ChoiceProperty>& choice_properties() {
  static const std::vector<ChoiceProperty> all = {
      {"completion",
       [](const Market& m, BranchIdx b, RuleMutation mu) {
         return check_completion(m, b, kChoiceMaxContracts, mu);
       },
       RuleMutation::kCompletionIgnoresGuard},
      {"substitutability",
       [](const Market& m, BranchIdx b, RuleMutation mu) {
         return check_substitutability(m, b, kChoiceMaxContracts, mu);
       },
       RuleMutation::kInvertedGuard},
      {"irc",
       [](const Market& m, BranchIdx b, RuleMutation mu) {
         return check_irc(m, b, kChoiceMaxContracts, mu);
       },
       RuleMutation::kSecondChoice},
      {"lad",
       [](const Market& m, BranchIdx b, RuleMutation mu) {
         return check_lad(m, b, kChoiceMaxContracts, mu);
       },
       RuleMutation::kOriginalBlocksNext},
  };
  return all;
}

void choice_rules() {
  Timer t;
  bool ok = true;
  long cases = 0;
  std::string first_failure;
  for (int i = 1; i <= kChoiceConfigs; ++i) {
    const Market m(
        generate_instance(single_branch(5000 + i, kChoiceMaxContracts, 0.5)));
    for (const auto& p : choice_properties()) {
      const auto v = p.check(m, 0, RuleMutation::kNone);
      cases += v.cases_checked;
      if (!v.passed && ok) {
        ok = false;
        first_failure = std::string(p.name) + ": " + v.witness.dump();
      }
    }
  }
  // Each oracle must reject its corrupted rule with a replayable witness.
  std::string caught;
  for (const auto& p : choice_properties()) {
    bool found = false;
    for (int seed = 1; seed <= kMutationSeeds && !found; ++seed) {
      const Market m(
          generate_instance(single_branch(seed, kChoiceMaxContracts, 0.5)));
      const auto v = p.check(m, 0, p.mutation);
      if (v.passed) continue;
      nlohmann::json intact = v.witness;
      intact["mutation"] = "none";
      found = witness_replay::refails(p.name, v.witness) &&
              !witness_replay::refails(p.name, intact);
    }
    caught += std::string(caught.empty() ? "" : ", ") + p.name + "/" +
              to_string(p.mutation) + (found ? " caught" : " MISSED");
    ok = ok && found;
  }
  const double s = t.seconds();
  if (!first_failure.empty()) std::cout << "  counterexample " << first_failure << "\n";
  report(3, ok && s < kChoiceLimitS,
         "completion, substitutability, IRC, LAD on " +
             std::to_string(kChoiceConfigs) + " branches, " +
             std::to_string(cases) + " cases; mutants: " + caught + " (" +
             secs(s) + ")");
}

void stability() {
  Timer t;
  int bad = 0;
  for (int i = 1; i <= kStabilityInstances; ++i) {
    const Market m(generate_instance(market(9000 + i, 5, 3, kStabilityMaxContracts)));
    if (!is_stable(m, com_outcome(m))) ++bad;
  }
  const double s = t.seconds();
  report(4, bad == 0 && s < kStabilityLimitS,
         "COM outcome stable on " + std::to_string(kStabilityInstances) +
             " markets, " + std::to_string(bad) + " failures (" + secs(s) + ")");
}

void strategy_proofness() {
  Timer t;
  int bad = 0;
  long misreports = 0;
  for (int i = 1; i <= kStrategyInstances; ++i) {
    GeneratorConfig c = market(13000 + i, 4, 2, 0);
    c.agents = 2 + i % 3;
    c.branches = 2;
    c.min_contracts_per_pair = i % 2;
    c.max_contracts_per_pair = 2;  // at most 4 per agent
    const auto v = check_strategy_proofness(Market(generate_instance(c)));
    misreports += v.cases_checked;
    if (!v.passed) ++bad;
  }
  const double s = t.seconds();
  report(5, bad == 0 && s < kStrategyLimitS,
         "no profitable misreport on " + std::to_string(kStrategyInstances) +
             " markets, " + std::to_string(misreports) + " misreports (" +
             secs(s) + ")");
}

void improvements() {
  Timer t;
  int triples = 0, bad = 0;
  for (std::uint64_t seed = 1; triples < kImprovementTriples; ++seed) {
    const Market m(generate_instance(market(17000 + seed, 5, 3, 12)));
    if (m.num_agents() == 0) continue;
    const AgentIdx a = static_cast<AgentIdx>(seed % m.num_agents());
    const Instance better = generate_improvement(m.instance(), m.agent_id(a), seed);
    if (better == m.instance()) continue;
    ++triples;
    const Market other(better);
    const int cmp = compare_assignments(
        m.ranking(a), assignment_of(other, com_outcome(other), a),
        assignment_of(m, com_outcome(m), a));
    if (!is_improvement(m.instance(), better, m.agent_id(a)) || cmp < 0) ++bad;
  }
  const double s = t.seconds();
  report(6, bad == 0 && s < kImprovementLimitS,
         std::to_string(triples) + " improvement triples, " +
             std::to_string(bad) + " where the improved agent lost (" +
             secs(s) + ")");
}

void order_independence() {
  Timer t;
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= kOrderSeeds; ++s) seeds.push_back(s);
  int bad = 0;
  for (int i = 1; i <= kOrderInstances; ++i) {
    const Market m(generate_instance(market(21000 + i, 5, 3, 12)));
    if (!check_order_independence(m, seeds).passed) ++bad;
  }
  const double s = t.seconds();
  report(7, bad == 0 && s < kOrderLimitS,
         std::to_string(kOrderSeeds) + " proposal orders x " +
             std::to_string(kOrderInstances) + " markets, " +
             std::to_string(bad) + " disagreements (" + secs(s) + ")");
}

void flexibility() {
  Timer t;
  int bad = 0, strict = 0, chains = 0, chain_bad = 0;
  for (int i = 1; i <= kFlexibilityInstances; ++i) {
    // Sparse slot lists and closed shadows leave seats vacant.
    GeneratorConfig c = market(25000 + i, 5, 3, 12);
    c.transfer_density = 0.0;
    c.slot_acceptability = 0.45;
    c.max_capacity = 3;
    const Market m(generate_instance(c));
    Rng rng(c.seed);
    const BranchIdx b = static_cast<BranchIdx>(rng.uniform(0, m.num_branches() - 1));
    const int k = static_cast<int>(rng.uniform(1, m.config(b).n));
    const auto r = flexibility_compare(m, b, k);
    if (r.verdict != ComparisonVerdict::kParetoDominates) ++bad;
    if (r.strict_gain) ++strict;
    if (r.detail == "shadow-filled") {
      ++chains;
      if (!improvement_chain(m, com_outcome(m), b, k).matches_com) ++chain_bad;
    }
  }
  const double s = t.seconds();
  report(8,
         bad == 0 && strict >= kFlexibilityMinStrict && chain_bad == 0 &&
             s < kFlexibilityLimitS,
         std::to_string(kFlexibilityInstances) + " bit flips, " +
             std::to_string(bad) + " not Pareto, " + std::to_string(strict) +
             " strict gains, " + std::to_string(chains) + " chains with " +
             std::to_string(chain_bad) + " mismatches (" + secs(s) + ")");
}

void expansion() {
  Timer t;
  int seat_bad = 0, bottom_bad = 0, single_bad = 0;
  std::optional<ComparisonReport> bottom_witness;
  for (int i = 1; i <= kExpansionInstances; ++i) {
    const GeneratorConfig c = market(29000 + i, 5, 3, 12);
    const Market m(generate_instance(c));
    Rng rng(c.seed);
    const BranchIdx b = static_cast<BranchIdx>(rng.uniform(0, m.num_branches() - 1));
    if (add_original_slot(m, b, sample_slot_priority(m, b, rng)).verdict ==
        ComparisonVerdict::kViolates) {
      ++seat_bad;
    }
    const auto bottom =
        add_contracts(m, sample_additions(m, AdditionMode::kBottom, rng),
                      AdditionMode::kBottom);
    if (bottom.verdict == ComparisonVerdict::kViolates) {
      ++bottom_bad;
      if (!bottom_witness) bottom_witness = bottom;
    }
    if (add_contracts(m,
                      sample_additions(m, AdditionMode::kSingleAgentAnywhere, rng),
                      AdditionMode::kSingleAgentAnywhere)
            .verdict == ComparisonVerdict::kViolates) {
      ++single_bad;
    }
  }
  const double s = t.seconds();
  if (bottom_witness) {
    std::cout << "  bottom-mode counterexample "
              << report_to_json(*bottom_witness).dump() << "\n";
  }
  const std::string n = std::to_string(kExpansionInstances);
  report(9, seat_bad == 0 && bottom_bad == 0 && single_bad == 0 &&
                s < kExpansionLimitS,
         "added seat: " + std::to_string(seat_bad) + "/" + n +
             " with a loser; bottom contracts: " + std::to_string(bottom_bad) +
             "/" + n + " with a loser; single-agent contracts: " +
             std::to_string(single_bad) + "/" + n + " with a losing owner (" +
             secs(s) + ")");
}

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(SSPWCT_CLI_PATH) + " " + args;
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void pipeline() {
  Timer t;
  const fs::path dir =
      fs::temp_directory_path() / ("sspwct_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    const fs::path f = dir / name;
    std::ofstream(f, std::ios::binary) << text;
    return f.string();
  };
  bool ok = true;
  std::string files;
  for (int seed = 1; seed <= kPipelineSeeds; ++seed) {
    const std::string g = "gen --seed " + std::to_string(seed) + " --agents 4";
    const Run a = cli(g), b = cli(g);
    ok = ok && a.code == 0 && a.out == b.out;
    const auto inst = write("i" + std::to_string(seed) + ".json", a.out);
    const Run r1 = cli("run --trace " + inst), r2 = cli("run --trace " + inst);
    ok = ok && r1.code == 0 && r1.out == r2.out;
    const auto out = write("o" + std::to_string(seed) + ".json", r1.out);
    const Run v = cli("verify " + inst + " " + out);
    ok = ok && v.code == 0;
    files += " " + inst;
  }
  const std::string o = "oracle --trials 5 --order-seeds 5" + files;
  const Run o1 = cli(o), o2 = cli(o);
  ok = ok && o1.code == 0 && o1.out == o2.out;
  fs::remove_all(dir);
  report(10, ok,
         "gen, run, verify, oracle exit 0 on " + std::to_string(kPipelineSeeds) +
             " seeds with byte-identical reruns (" + secs(t.seconds()) + ")");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {
      sequences,          reduction,   choice_rules, stability,  strategy_proofness,
      improvements,       order_independence, flexibility, expansion, pipeline};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::cout << "  error: " << e.what() << "\n";
      ++failures;
    }
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED")
            << "\n";
  return failures == 0 ? 0 : 1;
}
