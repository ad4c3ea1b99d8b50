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


// Exercises the shared library through its C header only.

#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sspwct/sspwct.h"

using nlohmann::json;

namespace {

// i wants x, j wants y; o1 ranks x, its shadow ranks y then x.
const char* kPair = R"({
  "contracts": [
    {"id": "x", "agent": "i", "branch": "b", "terms": "t"},
    {"id": "y", "agent": "j", "branch": "b", "terms": "t"}
  ],
  "preferences": [{"agent": "i", "ranking": ["x"]},
                  {"agent": "j", "ranking": ["y"]}],
  "branches": [{"id": "b", "n": 1, "location": [1], "transfer": [1],
                "original_priorities": [["x"]],
                "shadow_priorities": [["y", "x"]]}]
})";

struct Owned {
  char* s = nullptr;
  ~Owned() { sspwct_string_free(s); }
  json doc() const { return json::parse(s); }
};

struct Handle {
  sspwct_instance* p = nullptr;
  ~Handle() { sspwct_instance_free(p); }
};

sspwct_status parse(const std::string& text, Handle& h) {
  return sspwct_instance_parse(text.data(), text.size(), &h.p);
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("version and status names") {
    CHECK(std::strlen(sspwct_version()) > 0);
    CHECK(std::string(sspwct_status_name(SSPWCT_PARSE)) == "parse");
    CHECK(std::string(sspwct_status_name(SSPWCT_ALREADY_FLEXIBLE)) ==
          "already-flexible");
  }

  TEST_CASE("parse errors carry a position") {
    Handle h;
    CHECK(parse("{\"contracts\": [", h) == SSPWCT_PARSE);
    CHECK(h.p == nullptr);
    CHECK(std::string(sspwct_last_error()).find("line 1") != std::string::npos);
    CHECK(parse(R"({"contracts": 4})", h) == SSPWCT_PARSE);
  }

  TEST_CASE("null arguments") {
    Handle h;
    CHECK(sspwct_instance_parse(nullptr, 0, &h.p) == SSPWCT_INVALID_ARGUMENT);
    CHECK(parse(kPair, h) == SSPWCT_OK);
    CHECK(sspwct_run(h.p, nullptr, nullptr) == SSPWCT_INVALID_ARGUMENT);
    Owned o;
    CHECK(sspwct_run(nullptr, nullptr, &o.s) == SSPWCT_INVALID_ARGUMENT);
    CHECK(o.s == nullptr);
    sspwct_instance_free(nullptr);
    sspwct_string_free(nullptr);
  }

  TEST_CASE("serialize is canonical and round-trips") {
    Handle h;
    REQUIRE(parse(kPair, h) == SSPWCT_OK);
    Owned a;
    REQUIRE(sspwct_instance_serialize(h.p, &a.s) == SSPWCT_OK);
    Handle h2;
    REQUIRE(parse(a.s, h2) == SSPWCT_OK);
    Owned b;
    REQUIRE(sspwct_instance_serialize(h2.p, &b.s) == SSPWCT_OK);
    CHECK(std::string(a.s) == std::string(b.s));
    CHECK(std::string(a.s).back() == '\n');
  }

  TEST_CASE("validation is reported, not thrown at parse time") {
    json bad = json::parse(kPair);
    bad["branches"][0]["location"] = {2};
    Handle h;
    REQUIRE(parse(bad.dump(), h) == SSPWCT_OK);
    Owned v;
    int valid = 1;
    REQUIRE(sspwct_instance_validate(h.p, &v.s, &valid) == SSPWCT_OK);
    CHECK(valid == 0);
    CHECK_FALSE(v.doc()["violations"].empty());
    Owned r;
    CHECK(sspwct_run(h.p, nullptr, &r.s) == SSPWCT_VALIDATION);
  }

  TEST_CASE("sequence and choice") {
    Handle h;
    REQUIRE(parse(kPair, h) == SSPWCT_OK);
    Owned seq;
    REQUIRE(sspwct_slot_sequence(h.p, "b", &seq.s) == SSPWCT_OK);
    CHECK(seq.doc() == json{"o1", "e1"});
    Owned c;
    REQUIRE(sspwct_choose(h.p, "b", R"(["y"])", 0, &c.s) == SSPWCT_OK);
    const json d = c.doc();
    CHECK(d["chosen"] == json{"y"});
    CHECK(d["filled"]["o1"] == 0);
    Owned none;
    CHECK(sspwct_slot_sequence(h.p, "nope", &none.s) == SSPWCT_INVALID_ARGUMENT);
    CHECK(sspwct_choose(h.p, "b", R"(["zz"])", 0, &none.s) != SSPWCT_OK);
  }

  TEST_CASE("run, trace and verify") {
    Handle h;
    REQUIRE(parse(kPair, h) == SSPWCT_OK);
    Owned plain, traced;
    REQUIRE(sspwct_run(h.p, nullptr, &plain.s) == SSPWCT_OK);
    REQUIRE(sspwct_run(h.p, R"({"trace": true})", &traced.s) == SSPWCT_OK);
    CHECK(plain.doc()["outcome"]["assignment"] == json{"x"});
    CHECK(traced.doc()["outcome"] == plain.doc()["outcome"]);
    CHECK(traced.doc()["trace"]["steps"].size() == 2);

    Owned ver;
    int stable = 0;
    REQUIRE(sspwct_verify(h.p, plain.s, &ver.s, &stable) == SSPWCT_OK);
    CHECK(stable == 1);
    Owned empty;
    REQUIRE(sspwct_verify(h.p, R"({"assignment": []})", &empty.s, &stable) ==
            SSPWCT_OK);
    CHECK(stable == 0);
    CHECK_FALSE(empty.doc()["blocking"].is_null());
  }

  TEST_CASE("oracle batch") {
    Handle a, b;
    REQUIRE(sspwct_instance_generate(R"({"seed": 3})", &a.p) == SSPWCT_OK);
    REQUIRE(sspwct_instance_generate(nullptr, &b.p) == SSPWCT_OK);
    const sspwct_instance* batch[] = {a.p, b.p};
    Owned out;
    int passed = 0;
    REQUIRE(sspwct_oracle(batch, 2, R"({"trials": 3, "order_seeds": 3})",
                          &out.s, &passed) == SSPWCT_OK);
    CHECK(passed == 1);
    const json d = out.doc();
    CHECK(d["status"] == "pass");
    CHECK(d["instances"] == 2);
    CHECK(d["verdicts"].size() == 8);
    Owned bad;
    CHECK(sspwct_oracle(batch, 2, R"({"suites": ["bogus"]})", &bad.s,
                        &passed) == SSPWCT_INVALID_ARGUMENT);
  }

  TEST_CASE("experiment flags") {
    Handle h;
    REQUIRE(parse(kPair, h) == SSPWCT_OK);
    Owned out;
    int violated = 1;
    CHECK(sspwct_experiment(h.p, R"({"kind": "transfer-flexibility", "branch": "b", "slot": 1})",
                            &out.s, &violated) == SSPWCT_ALREADY_FLEXIBLE);
    REQUIRE(sspwct_experiment(h.p, R"({"kind": "capacity-expansion", "branch": "b",
                                       "priority": ["y"]})",
                              &out.s, &violated) == SSPWCT_OK);
    CHECK(violated == 0);
    CHECK(out.doc()["verdict"] == "pareto-dominates");
  }
}
