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

#include <string>

#include "doctest.h"
#include "dcbpv/equality.hpp"
#include "dcbpv/parser.hpp"

using namespace dcbpv;

namespace {

Comp C(const std::string& s, const Names& names = {}) {
  return parse_comp(s, EffectSignature::all_effects(), names);
}
CType B(const std::string& s, const Names& names = {}) {
  return parse_ctype(s, EffectSignature::all_effects(), names);
}

}  // namespace

TEST_CASE("complex value elimination examples") {
  Comp out = eliminate_complex_values(C("return (let x = () in x)"));
  CHECK(alpha_eq(out, C("(return ()) to x. return x")));
  CHECK(alpha_eq(eliminate_complex_values(C("return ()")), C("return ()")));
  Comp pm = eliminate_complex_values(C("force (pm (1, ()) as { (1, x). x | (2, y). y })"));
  CHECK(alpha_eq(pm, C("pm (1, ()) as { (1, x). force x | (2, y). force y }")));
}

TEST_CASE("complex value elimination reaches nested positions") {
  const char* srcs[] = {
      "return ((), let x = () in (x, x))",
      "(pm p as (a, b). b) ' lam y : Unit. return y",
      "return thunk (return (pm (1, ()) as { (1, a). a | (2, b). () }))",
      "let q = (let r = () in r) in return q",
      "pm (pm p as (a, b). a) as (). return ()",
      "return (pm p as (a, b). (let c = a in (c, b)))",
  };
  for (const char* s : srcs) {
    CAPTURE(s);
    Comp m = C(s, {"p"});
    Comp out = eliminate_complex_values(m);
    CHECK(complex_value_free(out));
    CHECK(alpha_eq(eliminate_complex_values(out), out));
  }
  // With closed scrutinees both sides normalize to the same term.
  for (const char* s : {"return ((), let x = () in (x, x))",
                        "return thunk (return (pm (1, ()) as { (1, a). a | (2, b). () }))",
                        "pm (pm ((), ()) as (a, b). a) as (). return ()"}) {
    CAPTURE(s);
    Comp m = C(s);
    CHECK(convertible(m, eliminate_complex_values(m)));
  }
}

TEST_CASE("normalize examples") {
  CHECK(alpha_eq(normalize(C("(return ()) to x. return x")), C("return ()")));
  CHECK(alpha_eq(normalize(C("force (thunk (return ()))")), C("return ()")));
  CHECK(alpha_eq(normalize(C("pm (1, ()) as { (1, a). return (1, a) | (2, b). return (2, b) }")),
                 C("return (1, ())")));
  CHECK(alpha_eq(normalize(C("2 ' lam { return () | return (1, ()) }")), C("return (1, ())")));
  CHECK(alpha_eq(normalize(C("() ' lam x : Unit. return (x, x)")), C("return ((), ())")));
  CHECK(alpha_eq(normalize(C("pm ((), (1, ())) as (a, b). return (b, a)")),
                 C("return ((1, ()), ())")));
  CHECK(alpha_eq(normalize(C("pm (refl ()) as refl w. return w")), C("return ()")));
}

TEST_CASE("normalize sequencing laws") {
  Names f = {"f"};
  Comp assoc = normalize(C("((force f) to x. force x) to y. return (y, y)", f));
  CHECK(alpha_eq(assoc, C("(force f) to x. (force x) to y. return (y, y)", f)));
  Comp tup = normalize(C("(force f) to x. lam { return x | return () }", f));
  CHECK(alpha_eq(tup, C("lam { force f | (force f) to x. return () }", f)));
  Comp lam = normalize(C("(force f) to x. lam y : Unit. return (x, y)", f));
  CHECK(alpha_eq(lam, C("lam y : Unit. (force f) to x. return (x, y)", f)));
  CHECK(alpha_eq(normalize(C("(force f) to x. return x", f)), C("force f", f)));
}

TEST_CASE("normalize logs one line per rewrite and is idempotent") {
  StepLog log;
  Comp m = C("(return ()) to x. force (thunk (return x))");
  Comp n = normalize(m, {}, &log);
  CHECK(log.lines.size() == 2);
  CHECK(log.lines[0].find("force-thunk") != std::string::npos);
  CHECK(alpha_eq(normalize(n), n));
}

TEST_CASE("normalize fuel") {
  ConvOptions o;
  o.norm_fuel = 1;
  CHECK_THROWS_AS(normalize(C("(return ()) to x. (return x) to y. return y"), o), FuelExhausted);
}

TEST_CASE("convertible examples") {
  CHECK(convertible(parse_vtype("U F Unit"), parse_vtype("U F Unit")));
  CHECK_FALSE(convertible(B("F Unit"), B("F Sum()")));
  Names f = {"f"};
  CHECK(convertible(C("lam x : Unit. x ' force f", f), C("force f", f)));
  CHECK(convertible(C("lam { 1 ' force f | 2 ' force f }", f), C("force f", f)));
  CHECK(convertible(parse_value("thunk force f", EffectSignature::pure(), f),
                    parse_value("f", EffectSignature::pure(), f)));
  ConvOptions no_eta;
  no_eta.eta_fun_prod_thunk = false;
  CHECK_FALSE(convertible(C("lam x : Unit. x ' force f", f), C("force f", f), no_eta));
  // Annotations do not take part in conversion.
  CHECK(convertible(C("(force f) to x : Unit. return x", f), C("force f", f)));
}

TEST_CASE("identity eta is opt-in") {
  VType id = parse_vtype("Id Unit () ()");
  TypeCtx ctx = {id};
  Value p = mk::var(0);
  Value r = mk::refl(mk::unit());
  CHECK_FALSE(convertible(p, r, {}, ctx));
  ConvOptions o;
  o.eta_id = true;
  CHECK(convertible(p, r, o, ctx));
}

TEST_CASE("shrink_check examples") {
  CType printed = B("F Id (U F Unit) (thunk print \"a\" return ()) (thunk print \"a\" return ())");
  CType after = B("F Id (U F Unit) (thunk return ()) (thunk return ())");
  CHECK(shrink_check(after, printed));
  CHECK_FALSE(shrink_check(printed, after));
  CType chosen = B("F Id (U F Sum(Unit, Unit)) (thunk choose { return (1, ()) | return (2, ()) }) "
                   "(thunk return (1, ()))");
  CType first = B("F Id (U F Sum(Unit, Unit)) (thunk return (1, ())) (thunk return (1, ()))");
  CType second = B("F Id (U F Sum(Unit, Unit)) (thunk return (2, ())) (thunk return (1, ()))");
  CHECK(shrink_check(first, chosen));
  CHECK(shrink_check(second, chosen));
  CHECK(shrink_check(chosen, chosen));
  ConvOptions none;
  none.shrink_fuel = 0;
  CHECK_FALSE(shrink_check(first, chosen, none));
}

TEST_CASE("shrink_check unfolds recursion under sequencing") {
  CType rec = B("F Id (U F Unit) (thunk ((mu z : F Unit. print \"a\" return ()) to x. return x)) "
                "(thunk return ())");
  CType done = B("F Id (U F Unit) (thunk return ()) (thunk return ())");
  CHECK(shrink_check(done, rec));
  CHECK(effect_transitions(C("(write s1 return ()) to x. return x")).size() == 1);
  CHECK(effect_transitions(C("read { s0 -> return () | s1 -> diverge }")).size() == 2);
  CHECK(effect_transitions(C("return ()")).empty());
}
