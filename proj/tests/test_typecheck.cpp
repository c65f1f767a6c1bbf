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
#include <utility>
#include <vector>

#include "doctest.h"
#include "dcbpv/parser.hpp"
#include "dcbpv/printer.hpp"
#include "dcbpv/typecheck.hpp"

using namespace dcbpv;

namespace {

const EffectSignature kAll = EffectSignature::all_effects();

// Builds a context from "name : type" pairs, each type parsed in its prefix.
Context ctx_of(const std::vector<std::pair<std::string, std::string>>& entries,
               const EffectSignature& sig = kAll) {
  Context c;
  Names ns;
  for (const auto& [n, t] : entries) {
    c = c.extend(parse_vtype(t, sig, ns), n);
    ns.push_back(n);
  }
  return c;
}

CheckOptions minus() { return {}; }
CheckOptions plus(bool shrink = true) {
  CheckOptions o;
  o.variant = Variant::Plus;
  o.allow_shrink = shrink;
  return o;
}

ErrorKind kind_of_check(const Context& ctx, const std::string& m, const std::string& b,
                        const CheckOptions& o, const EffectSignature& sig = kAll) {
  Comp c = parse_comp(m, kAll, ctx.names);
  CType t = parse_ctype(b, kAll, ctx.names);
  try {
    check_comp(ctx, c, t, sig, o);
  } catch (const TypeError& e) {
    return e.kind();
  }
  FAIL("expected a type error for ", m);
  return ErrorKind::Mismatch;
}

void ok(const Context& ctx, const std::string& m, const std::string& b, const CheckOptions& o,
        const EffectSignature& sig = kAll) {
  CAPTURE(m);
  CAPTURE(b);
  Comp c = parse_comp(m, kAll, ctx.names);
  CType t = parse_ctype(b, kAll, ctx.names);
  try {
    check_comp(ctx, c, t, sig, o);
  } catch (const TypeError& e) {
    FAIL(e.render());
  }
}

}  // namespace

TEST_CASE("context and type formation") {
  CHECK_NOTHROW(wf_context(Context{}, kAll));
  CHECK_NOTHROW(wf_context(ctx_of({{"x", "Unit"}, {"y", "Id Unit x x"}}), kAll));
  Context bad;
  bad.values = {mk::unit_type()};
  bad.comp_slot = mk::F(mk::id(mk::unit_type(), mk::var(5), mk::unit()));
  try {
    wf_context(bad, kAll);
    FAIL("expected UnboundVariable");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::UnboundVariable);
  }
  CHECK_NOTHROW(wf_vtype({}, parse_vtype("U F Unit"), kAll));
  CHECK_NOTHROW(wf_vtype({}, parse_vtype("Sigma x : Unit. Id Unit x ()"), kAll));
  try {
    wf_vtype({}, parse_vtype("Id Unit () (1, ())"), kAll);
    FAIL("expected Mismatch");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::Mismatch);
    CHECK(e.path().find("rhs") != std::string::npos);
  }
}

TEST_CASE("value rules") {
  Context c = ctx_of({{"x", "U F Unit"}});
  CHECK_NOTHROW(check_value(c, mk::var(0), parse_vtype("U F Unit"), kAll));
  CHECK_NOTHROW(check_value({}, parse_value("refl ()"), parse_vtype("Id Unit () ()"), kAll));
  EffectSignature no_err = kAll;
  std::erase(no_err.enabled, Effect::Error);
  try {
    check_value({}, mk::thunk(mk::error("e")), parse_vtype("U F Unit"), no_err);
    FAIL("expected EffectDisabled");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::EffectDisabled);
  }
  CHECK(alpha_eq(infer_value(c, parse_value("(x, ())", kAll, {"x"}), kAll),
                 parse_vtype("Sigma y : U F Unit. Unit")));
  CHECK_NOTHROW(check_value({}, parse_value("(2, ((), refl ()))"),
                            parse_vtype("Sum(Unit, Sigma y : Unit. Id Unit y ())"), kAll));
  CHECK_THROWS_AS(infer_value({}, parse_value("(1, ())"), kAll), TypeError);
  CHECK_THROWS_AS(check_value({}, mk::var(0), parse_vtype("Unit"), kAll), TypeError);
  // Value-level let and match.
  CHECK_NOTHROW(check_value({}, parse_value("let y = () in (y, y)"),
                            parse_vtype("Sigma a : Unit. Unit"), kAll));
  Context s = ctx_of({{"p", "Sum(Unit, Unit)"}});
  CHECK_NOTHROW(check_value(s, parse_value("pm p as { (1, a). a | (2, b). () }", kAll, {"p"}),
                            parse_vtype("Unit"), kAll));
}

TEST_CASE("computation examples") {
  // The head is literally a return, so the dependent continuation is fine.
  ok({}, "(return ()) to x. return (refl x)", "F Id Unit () ()", minus());
  ok({}, "lam { return () | diverge }", "Prod(F Unit, F Unit)", minus());
  EffectSignature pure = EffectSignature::pure();
  CHECK(kind_of_check({}, "lam { return () | diverge }", "Prod(F Unit, F Unit)", minus(), pure) ==
        ErrorKind::EffectDisabled);
  Context x = ctx_of({{"x", "U F Unit"}});
  std::string dep = "(force x) to y [z |- F Id (U F Unit) z z]. return refl (thunk return y)";
  ok(x, dep, "F Id (U F Unit) (thunk force x) (thunk force x)", plus());
  CHECK(kind_of_check(x, dep, "F Id (U F Unit) (thunk force x) (thunk force x)", minus()) ==
        ErrorKind::DependentSeqInMinus);
  ok({}, "() ' lam y : Unit. return y", "F Unit", minus());
  ok({}, "2 ' lam { return () | return (refl ()) }", "F Id Unit () ()", minus());
  ok({}, "print \"a\" write s1 read { s0 -> return () | s1 -> error e }", "F Unit", minus());
  ok({}, "mu z : F Unit. choose { force z | return () }", "F Unit", minus());
  ok(ctx_of({{"p", "Sum(Unit, Unit)"}}), "pm p as [z |- F Sum(Unit, Unit)] { (1, a). return (1, a) | (2, b). return (2, b) }",
     "F Sum(Unit, Unit)", minus());
  // Complex values on literal scrutinees, as substitution produces them.
  ok({}, "return (pm (2, ()) as { (1, u). (2, u) | (2, u). (1, u) })", "F Sum(Unit, Unit)", minus());
  ok({}, "return (pm ((), (1, ())) as (a, b). b)", "F Sum(Unit, Unit)", minus());
  ok({}, "return (let y = (1, ()) in y)", "F Sum(Unit, Unit)", minus());
  ok({}, "return (pm (refl (2, ())) as refl w. w)", "F Sum(Unit, Unit)", minus());
}

TEST_CASE("computation errors") {
  CHECK(kind_of_check({}, "return ()", "F Sum(Unit)", minus()) == ErrorKind::Mismatch);
  CHECK(kind_of_check({}, "() ' return ()", "F Unit", minus()) == ErrorKind::NotAFunction);
  Context u = ctx_of({{"u", "Unit"}});
  CHECK(kind_of_check(u, "pm u as { (1, a). return () }", "F Unit", minus()) ==
        ErrorKind::NotASum);
  CHECK(kind_of_check({}, "lam { return () }", "Prod(F Unit, F Unit)", minus()) ==
        ErrorKind::ArityMismatch);
  try {
    check_comp({}, mk::ret(mk::var(0)), parse_ctype("F Unit"), kAll);
    FAIL("expected UnboundVariable");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::UnboundVariable);
  }
  Context f = ctx_of({{"f", "U F Unit"}});
  try {
    infer_comp(f, parse_comp("(force f) to x. return refl x", kAll, {"f"}), kAll);
    FAIL("expected MotiveRequired");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::MotiveRequired);
  }
}

TEST_CASE("motives over a context extension") {
  // p : Id (U F Unit) (thunk force f) (thunk force f) is rewritten to
  // p : Id (U F Unit) (tr x) (tr x) in the continuation.
  Context c = ctx_of({{"f", "U F Unit"}, {"q", "Id (U F Unit) (thunk force f) (thunk force f)"}});
  std::string m = "(force f) to x [z, w : Id (U F Unit) z z |- F Id (U F Unit) z z]. return refl (thunk return x)";
  ok(c, m, "F Id (U F Unit) (thunk force f) (thunk force f)", plus());
  CHECK(kind_of_check(c, m, "F Id (U F Unit) (thunk force f) (thunk force f)", minus()) ==
        ErrorKind::DependentSeqInMinus);
  Context wrong = ctx_of({{"f", "U F Unit"}, {"q", "Unit"}});
  CHECK(kind_of_check(wrong, m, "F Id (U F Unit) (thunk force f) (thunk force f)", plus(false)) ==
        ErrorKind::Mismatch);
  CHECK(kind_of_check(wrong, m, "F Id (U F Unit) (thunk force f) (thunk force f)", plus()) ==
        ErrorKind::ShrinkFailed);
}

TEST_CASE("dependent pattern matching") {
  Context p = ctx_of({{"p", "Sum(Unit, Unit)"}});
  std::string m = "pm p as [z |- F Id Sum(Unit, Unit) z z] { (1, a). return refl (1, a) | "
                  "(2, b). return refl (2, b) }";
  ok(p, m, "F Id Sum(Unit, Unit) p p", minus());
  Context s = ctx_of({{"s", "Sigma a : Unit. Unit"}});
  ok(s, "pm s as [z |- F Id (Sigma a : Unit. Unit) z z] (a, b). return refl (a, b)",
     "F Id (Sigma a : Unit. Unit) s s", minus());
  Context e = ctx_of({{"a", "Unit"}, {"b", "Unit"}, {"e", "Id Unit a b"}});
  ok(e, "pm e as [x, y, q |- F Id Unit x y] refl w. return refl w", "F Id Unit a b", minus());
  ok(ctx_of({{"u", "Unit"}}), "pm u as [z |- F Id Unit z ()] (). return refl ()",
     "F Id Unit u ()", minus());
}

TEST_CASE("the shrink coercion restores subject reduction for choice") {
  std::string before =
      "(choose { return (1, ()) | return (2, ()) }) to x : Sum(Unit, Unit) "
      "[z |- F Id (U F Sum(Unit, Unit)) z z]. return refl (thunk return x)";
  std::string after =
      "(return (1, ())) to x : Sum(Unit, Unit) "
      "[z |- F Id (U F Sum(Unit, Unit)) z z]. return refl (thunk return x)";
  std::string type = "F Id (U F Sum(Unit, Unit)) (thunk choose { return (1, ()) | return (2, ()) }) "
                     "(thunk choose { return (1, ()) | return (2, ()) })";
  ok({}, before, type, plus());
  CHECK(kind_of_check({}, after, type, plus(false)) == ErrorKind::Mismatch);
  ok({}, after, type, plus());
  // A type that no unfolding reaches stays rejected, reported distinctly.
  CHECK(kind_of_check({}, "return refl (thunk return (1, ()))",
                      "F Id (U F Sum(Unit, Unit)) (thunk return (2, ())) (thunk return (2, ()))",
                      plus()) == ErrorKind::ShrinkFailed);
}

TEST_CASE("stacks and configurations") {
  CHECK_NOTHROW(check_stack({}, parse_ctype("F Unit"), nullptr, parse_ctype("F Unit"), kAll));
  Stack seq = push(frame::Seq{parse_comp("return ()", kAll, {"x"}), std::nullopt, std::nullopt},
                   nullptr);
  CHECK_NOTHROW(check_stack({}, parse_ctype("F Sum(Unit, Unit)"), seq, parse_ctype("F Unit"), kAll));
  Stack arg = push(frame::Arg{mk::unit()}, nullptr);
  CHECK_NOTHROW(check_stack({}, parse_ctype("Pi x : Unit. F Id Unit x x"), arg,
                            parse_ctype("F Id Unit () ()"), kAll));
  CHECK_THROWS_AS(check_stack({}, parse_ctype("F Unit"), arg, parse_ctype("F Unit"), kAll),
                  TypeError);
  Stack ret_x = push(frame::Seq{mk::ret(mk::var(0)), std::nullopt, std::nullopt}, nullptr);
  CHECK_NOTHROW(check_config({}, parse_comp("return ()"), ret_x, parse_ctype("F Unit"), kAll));
  Comp m = parse_comp("return ()");
  CHECK(alpha_eq(plug(m, ret_x), parse_comp("(return ()) to x. return x")));
}

TEST_CASE("errors render with location and as JSON") {
  Comp m = parse_comp("lam x : Unit.\n  return (x, x)");
  try {
    check_comp({}, m, parse_ctype("Pi x : Unit. F Unit"), kAll);
    FAIL("expected an error");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::Mismatch);
    CHECK(e.path() == "root/body/return");
    std::string r = e.render("t.dcbpv");
    CHECK(r.find("t.dcbpv:2:10") != std::string::npos);
    CHECK(r.find("expected: Unit") != std::string::npos);
    CHECK(e.json().find("\"kind\":\"Mismatch\"") != std::string::npos);
  }
}

TEST_CASE("inference is sound and Minus judgements hold in Plus") {
  struct Case {
    std::vector<std::pair<std::string, std::string>> ctx;
    std::string m;
  };
  std::vector<Case> cases = {
      {{}, "return ()"},
      {{}, "(return ()) to x. return (refl x)"},
      {{{"f", "U F Unit"}}, "(force f) to x. return (x, f)"},
      {{{"f", "U Pi x : Unit. F Unit"}}, "() ' force f"},
      {{}, "lam { return () | lam y : Unit. return (y, y) }"},
      {{}, "print \"ab\" choose { return () | diverge }"},
      {{{"p", "Sigma a : Unit. Id Unit a ()"}}, "pm p as (a, b). return a"},
      {{{"p", "Sum(Unit, Unit)"}}, "pm p as { (1, a). return a | (2, b). return () }"},
      {{}, "let y = () in return (refl y)"},
      {{}, "mu z : F Unit. force z"},
      {{{"e", "Id Unit () ()"}}, "pm e as refl w. return w"},
      {{}, "read { s0 -> write s1 return () | s1 -> return () }"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.m);
    Context ctx = ctx_of(c.ctx);
    Comp m = parse_comp(c.m, kAll, ctx.names);
    CType t = infer_comp(ctx, m, kAll);
    CHECK_NOTHROW(check_comp(ctx, m, t, kAll, minus()));
    CHECK_NOTHROW(check_comp(ctx, m, t, kAll, plus()));
    CHECK_NOTHROW(check_comp(ctx, m, t, kAll, plus(false)));
    // Weakening by an unused Unit.
    Context wider = ctx.extend(mk::unit_type(), "w");
    CHECK_NOTHROW(check_comp(wider, shift(m, 0, 1), shift(t, 0, 1), kAll, minus()));
  }
}
