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

// Properties checked over every program in corpus/.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dcbpv/equality.hpp"
#include "dcbpv/machine.hpp"
#include "dcbpv/model.hpp"
#include "dcbpv/parser.hpp"
#include "dcbpv/printer.hpp"
#include "dcbpv/typecheck.hpp"

using namespace dcbpv;
namespace fs = std::filesystem;

namespace {

struct Program {
  std::string name;
  ProgramFile file;
  Context ctx;
};

std::vector<Program> corpus() {
  std::vector<fs::path> paths;
  for (const auto& d : fs::directory_iterator("corpus")) {
    if (d.path().extension() == ".dcbpv") paths.push_back(d.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Program> out;
  for (const auto& p : paths) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    Program prog{p.filename().string(), parse_program(ss.str()), {}};
    for (const auto& e : prog.file.context) prog.ctx = prog.ctx.extend(e.type, e.name);
    out.push_back(std::move(prog));
  }
  return out;
}

bool effectful(const EffectSignature& sig) {
  return sig.enables(Effect::Print) || sig.enables(Effect::Choose) || sig.enables(Effect::State) ||
         sig.enables(Effect::Rec) || sig.enables(Effect::Diverge);
}

FinMonadSpec model_for(const EffectSignature& sig) {
  if (effectful(sig)) return FreeSpec{sig};
  ExceptionSpec e;
  if (sig.enables(Effect::Error)) e.errors = sig.errors;
  return e;
}

Verdict::Kind compare(const Program& p, const Comp& a, const Comp& b) {
  ModelOptions mo;
  mo.sig = p.file.signature;
  return check_equation(p.ctx, a, b, *p.file.main_type, model_for(p.file.signature), mo).kind;
}

}  // namespace

TEST_CASE("corpus: printing and parsing round trip") {
  auto progs = corpus();
  CHECK(progs.size() >= 40);
  for (const auto& p : progs) {
    CAPTURE(p.name);
    std::string text = show_program(p.file);
    ProgramFile q = parse_program(text);
    REQUIRE(q.main.has_value() == p.file.main.has_value());
    if (p.file.main) {
      CHECK(alpha_eq(*q.main, *p.file.main));
      CHECK(alpha_eq(*q.main_type, *p.file.main_type));
    }
    REQUIRE(q.equations.size() == p.file.equations.size());
    for (std::size_t i = 0; i < q.equations.size(); ++i) {
      CHECK(alpha_eq(q.equations[i].lhs, p.file.equations[i].lhs));
      CHECK(alpha_eq(q.equations[i].rhs, p.file.equations[i].rhs));
    }
  }
}

TEST_CASE("corpus: normalization and force-thunk are sound in the model") {
  std::size_t compared = 0;
  for (const auto& p : corpus()) {
    if (!p.file.main) continue;
    CAPTURE(p.name);
    Comp m = *p.file.main;
    CHECK(compare(p, m, normalize(m)) == Verdict::Kind::Equal);
    CHECK(compare(p, m, mk::force(mk::thunk(m))) == Verdict::Kind::Equal);
    ++compared;
  }
  CHECK(compared >= 40);
}

TEST_CASE("corpus: effect-free programs have one outcome under every scheduler") {
  std::size_t closed = 0;
  for (const auto& p : corpus()) {
    if (!p.file.main || !p.file.context.empty() || effectful(p.file.signature)) continue;
    CAPTURE(p.name);
    ++closed;
    Comp m = eliminate_complex_values(*p.file.main);
    auto all = run_all(m, p.file.signature, 10000);
    REQUIRE(all.size() == 1);
    CHECK(!all[0].fuel_exhausted);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      CHECK(same_outcome(run(m, p.file.signature, Scheduler::seeded(seed), 10000), all[0]));
    }
  }
  CHECK(closed >= 20);
}

TEST_CASE("corpus: substituting closed values into open programs preserves typing") {
  std::size_t instances = 0;
  for (const auto& p : corpus()) {
    if (!p.file.main || p.file.context.empty()) continue;
    CAPTURE(p.name);
    CheckOptions o;
    o.variant = Variant::Plus;
    // Canonical closed values for each context entry, built outermost first
    // so that refl endpoints can be instantiated.
    std::vector<std::vector<Value>> combos{{}};
    for (const auto& entry : p.file.context) {
      std::vector<std::vector<Value>> next;
      for (const auto& c : combos) {
        VType a = substitute_many(entry.type, std::vector<Value>(c.rbegin(), c.rend()));
        std::vector<Value> vs;
        if (std::holds_alternative<vt::Unit>(a->node)) vs = {mk::unit()};
        if (const auto* s = std::get_if<vt::Sum>(&a->node)) {
          for (std::size_t k = 0; k < s->arms.size(); ++k) {
            if (std::holds_alternative<vt::Unit>(s->arms[k]->node)) vs.push_back(mk::inj(k, mk::unit()));
          }
        }
        if (const auto* id = std::get_if<vt::Id>(&a->node)) vs = {mk::refl(id->lhs)};
        for (const auto& v : vs) {
          next.push_back(c);
          next.back().push_back(v);
        }
      }
      combos = std::move(next);
    }
    for (const auto& c : combos) {
      // Keep the combinations that inhabit the telescope.
      bool fits = true;
      for (std::size_t i = 0; i < c.size() && fits; ++i) {
        std::vector<Value> before(c.rend() - static_cast<long>(i), c.rend());
        try {
          check_value({}, c[i], substitute_many(p.file.context[i].type, before), p.file.signature, o);
        } catch (const TypeError&) {
          fits = false;
        }
      }
      if (!fits) continue;
      std::vector<Value> inner_first(c.rbegin(), c.rend());
      Comp m = substitute_many(*p.file.main, inner_first);
      CType t = substitute_many(*p.file.main_type, inner_first);
      CHECK_NOTHROW(check_comp({}, m, t, p.file.signature, o));
      ++instances;
    }
  }
  CHECK(instances >= 5);
}
