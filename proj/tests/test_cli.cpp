// Copyright 2026 The dcbpv Authors
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

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dcbpv/cli.hpp"

using namespace dcbpv;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "dcbpv");
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(args, {in, out, err, false});
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> r;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) r.push_back(l);
  return r;
}

}  // namespace

TEST_CASE("check reports the main type") {
  Result r = cli({"check", "corpus/id.dcbpv", "--variant", "minus"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "OK: F Unit\n");

  r = cli({"check", "corpus/shrink_counterexample.dcbpv", "--variant", "minus"});
  CHECK(r.code == kExitTypeError);
  CHECK(r.err.find("DependentSeqInMinus") != std::string::npos);
  CHECK(r.err.find("shrink_counterexample.dcbpv:6:3") != std::string::npos);

  r = cli({"check", "corpus/shrink_counterexample.dcbpv", "--variant", "plus"});
  CHECK(r.code == kExitOk);
}

TEST_CASE("check --json") {
  Result r = cli({"check", "corpus/id.dcbpv", "--json"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["command"] == "check");
  CHECK(j["ok"] == true);
  CHECK(j["main_type"] == "F Unit");

  r = cli({"check", "corpus/dep_seq_plus.dcbpv", "--variant", "minus", "--json"});
  CHECK(r.code == kExitTypeError);
  j = json::parse(r.out);
  CHECK(j["ok"] == false);
  CHECK(j["error"]["kind"] == "DependentSeqInMinus");
}

TEST_CASE("run prints one line per outcome") {
  Result r = cli({"run", "corpus/state.dcbpv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "Returned (2,()) | printed ε | state s1 | 4 steps\n");

  r = cli({"run", "corpus/choose_two.dcbpv", "--scheduler", "all"});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out) == std::vector<std::string>{
                            "Returned (1,()) | printed ε | state s0 | 1 steps",
                            "Returned (2,()) | printed ε | state s0 | 1 steps"});

  r = cli({"run", "corpus/choose_two.dcbpv", "--scheduler", "fixed:2"});
  CHECK(r.out == "Returned (2,()) | printed ε | state s0 | 1 steps\n");

  r = cli({"run", "corpus/choose_print.dcbpv", "--scheduler", "interactive"}, "7\n2\n");
  CHECK(r.out == "choice k of 2? choice k of 2? Returned () | printed right | state s0 | 2 steps\n");
}

TEST_CASE("run exit codes") {
  CHECK(cli({"run", "corpus/error_halt.dcbpv"}).code == kExitErrorHalt);
  CHECK(cli({"run", "corpus/rec_loop.dcbpv", "--fuel", "50"}).code == kExitFuel);
  CHECK(cli({"run", "corpus/rec_loop.dcbpv", "--fuel", "50"}).out ==
        "FuelExhausted | printed ε | state s0 | 50 steps\n");
  CHECK(cli({"run", "corpus/id_sym.dcbpv"}).code == kExitUsage);
  CHECK(cli({"run", "corpus/choose_two.dcbpv", "--scheduler", "fixed:0"}).code == kExitUsage);
  CHECK(cli({"run", "corpus/nope.dcbpv"}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
}

TEST_CASE("run --json agrees with the text output") {
  Result t = cli({"run", "corpus/print_choose_state.dcbpv", "--scheduler", "all"});
  Result j = cli({"run", "corpus/print_choose_state.dcbpv", "--scheduler", "all", "--json"});
  REQUIRE(t.code == kExitOk);
  json out = json::parse(j.out);
  auto ls = lines(t.out);
  REQUIRE(out["outcomes"].size() == ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const json& o = out["outcomes"][i];
    std::string steps = std::to_string(o["steps"].get<std::size_t>()) + " steps";
    CHECK(ls[i].find(steps) != std::string::npos);
    CHECK(ls[i].rfind(o["terminal"].get<std::string>(), 0) == 0);
  }
}

TEST_CASE("trace lists the rules") {
  Result r = cli({"trace", "corpus/state.dcbpv"});
  CHECK(r.code == kExitOk);
  for (const char* rule : {"to-push", "write", "return-pop", "read"}) {
    CHECK(r.out.find(rule) != std::string::npos);
  }
  json j = json::parse(cli({"trace", "corpus/state.dcbpv", "--json"}).out);
  CHECK(j["steps"].size() == j["outcome"]["steps"].get<std::size_t>());
}

TEST_CASE("translate") {
  Result r = cli({"translate", "corpus/src_pair.dtt", "--strategy", "cbv", "--variant", "minus"});
  CHECK(r.code == kExitTypeError);
  CHECK(r.err.find("CbvNeedsPlus") != std::string::npos);

  r = cli({"translate", "corpus/src_dep_sum.dtt", "--strategy", "cbn", "--variant", "minus"});
  CHECK(r.code == kExitTypeError);
  CHECK(r.err.find("DependentElimNeedsPlus") != std::string::npos);

  r = cli({"translate", "corpus/src_pair.dtt", "--strategy", "cbv", "--variant", "plus"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("main : F Sigma") != std::string::npos);

  json j = json::parse(
      cli({"translate", "corpus/src_print_twice.dtt", "--strategy", "cbn", "--json"}).out);
  CHECK(j["ok"] == true);
  CHECK(j["strategy"] == "cbn");
}

TEST_CASE("model-check") {
  Result r = cli({"model-check", "--figure4", "--json"});
  CHECK(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["all_equal"] == true);
  CHECK(j["rows"].size() >= 16);
  CHECK(cli({"model-check"}).code == kExitUsage);
}
