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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "dcbpv/equality.hpp"
#include "dcbpv/model.hpp"
#include "dcbpv/parser.hpp"

using namespace dcbpv;

namespace {

ExceptionSpec exc(std::size_t n) {
  ExceptionSpec s;
  for (std::size_t i = 0; i < n; ++i) s.errors.push_back(i == 0 ? "e" : "e" + std::to_string(i + 1));
  return s;
}

FiniteTableMonoid cyclic(std::size_t n) {
  FiniteTableMonoid m;
  for (std::size_t i = 0; i < n; ++i) m.elements.push_back(i == 0 ? "1" : std::string(i, 'a'));
  m.table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.table[i][j] = (i + j) % n;
  }
  return m;
}

EffectSignature writer_sig(const FiniteTableMonoid& m) {
  EffectSignature sig;
  sig.monoid = m;
  sig.enabled = {Effect::Print};
  return sig;
}

struct Typed {
  Context ctx;
  Names names;
};

Typed context(const std::vector<std::pair<std::string, std::string>>& entries) {
  Typed t;
  for (const auto& [n, ty] : entries) {
    t.ctx = t.ctx.extend(parse_vtype(ty, EffectSignature::all_effects(), t.names), n);
    t.names.push_back(n);
  }
  return t;
}

std::size_t count(const std::string& ty, std::size_t errors) {
  return interp_vtype({}, {}, parse_vtype(ty), exc(errors)).size();
}

// Closed, terminating programs without choice or state, at their types.
const std::vector<std::pair<const char*, const char*>> kClosed = {
    {"return ()", "F Unit"},
    {"(return (1, ())) to x : Sum(Unit, Unit). pm x as { (1, a). return (2, a) | (2, b). error e }",
     "F Sum(Unit, Unit)"},
    {"force (thunk (error e))", "F Unit"},
    {"(error e) to x. return x", "F Unit"},
    {"1 ' lam { return () | error e }", "F Unit"},
    {"lam { return () | error e }", "Prod(F Unit, F Unit)"},
    {"lam x : Sum(Unit, Unit). pm x as { (1, a). return a | (2, b). error e }",
     "Pi x : Sum(Unit, Unit). F Unit"},
    {"(2, ()) ' lam x : Sum(Unit, Unit). pm x as { (1, a). return a | (2, b). error e }", "F Unit"},
    {"return (let x = () in pm x as (). (1, ()))", "F Sum(Unit, Unit)"},
    {"let f = thunk lam x : Unit. return (2, x) in () ' force f", "F Sum(Unit, Unit)"},
    {"(return ()) to x. (return x) to y. return (x, y)", "F Sigma a : Unit. Unit"},
    {"pm (refl ()) as refl w. return w", "F Unit"},
    {"lam x : Unit. (error e) to y. return (x, y)", "Pi x : Unit. F Sigma a : Unit. Unit"},
    {"return thunk (error e)", "F U F Unit"},
    {"(return (refl ())) to p : Id Unit () (). pm p as [a, b, q |- F Id Unit a b] refl w. "
     "return (refl w)",
     "F Id Unit () ()"},
};

}  // namespace

TEST_CASE("type interpretation") {
  CHECK(interp_ctype({}, {}, parse_ctype("F Unit"), exc(1)).size() == 2);
  CHECK(count("Id Unit () ()", 1) == 1);
  CHECK(count("Id Sum(Unit, Unit) (1, ()) (2, ())", 1) == 0);
  CHECK(count("Sum(Unit, Sum(Unit, Unit), Unit)", 0) == 4);
  CHECK(interp_ctype({}, {}, parse_ctype("Pi x : Sum(Unit, Unit). F Unit"), exc(1)).size() == 4);

  // Fiber sizes computed by hand: over (1, ()) the fiber is {refl} + E, over
  // (2, ()) it is just E.
  for (std::size_t e = 0; e <= 2; ++e) {
    auto fs = interp_ctype({}, {}, parse_ctype("Pi x : Sum(Unit, Unit). F Id Sum(Unit, Unit) x (1, ())"),
                           exc(e));
    CHECK(fs.size() == (1 + e) * e);
  }
  // Sigma x : Sum of n units. Id x (1, ()) has exactly one element.
  CHECK(count("Sigma x : Sum(Unit, Unit, Unit). Id Sum(Unit, Unit, Unit) x (1, ())", 0) == 1);
  // U (Pi x : A. F B) has (|B| + |E|)^|A| elements.
  for (std::size_t e = 0; e <= 2; ++e) {
    std::size_t want = 1;
    for (int i = 0; i < 3; ++i) want *= 2 + e;
    CHECK(count("U Pi x : Sum(Unit, Unit, Unit). F Sum(Unit, Unit)", e) == want);
  }
  CHECK(count("U Prod()", 2) == 1);
  CHECK(count("Sum()", 2) == 0);

  ModelOptions tiny;
  tiny.cap = 10;
  CHECK_THROWS_AS(interp_ctype({}, {}, parse_ctype("Pi x : Sum(Unit, Unit, Unit). F Sum(Unit, Unit)"),
                               exc(1), tiny),
                  ModelError);
}

TEST_CASE("term interpretation") {
  CType fu = parse_ctype("F Unit");
  Elem r = interp_comp({}, {}, parse_comp("return ()"), fu, exc(1));
  CHECK(show_elem(r) == "ret ()");
  Elem e = interp_comp({}, {}, parse_comp("(error e) to x. return x"), fu, exc(1));
  CHECK(show_elem(e, {"e"}) == "err e");
  Elem t = interp_comp({}, {}, parse_comp("lam { return () | error e }"),
                       parse_ctype("Prod(F Unit, F Unit)"), exc(1));
  CHECK(show_elem(t, {"e"}) == "<ret () | err e>");
  // error at a function type is the constant error function
  Elem f = interp_comp({}, {}, parse_comp("error e"), parse_ctype("Pi x : Sum(Unit, Unit). F Unit"),
                       exc(1));
  CHECK(show_elem(f, {"e"}) == "{(1, ()) -> err e, (2, ()) -> err e}");

  auto t2 = context({{"f", "U Pi x : Sum(Unit, Unit). F Unit"}});
  Comp app = parse_comp("(2, ()) ' force f", EffectSignature::pure(), t2.names);
  for (const auto& env : environments(t2.ctx, exc(1))) {
    Elem got = interp_comp(t2.ctx, env, app, fu, exc(1));
    CHECK(got == env[0].kids[3]);
  }
  CHECK(environments(t2.ctx, exc(1)).size() == 4);

  CHECK_THROWS_AS(interp_comp({}, {}, parse_comp("diverge"), fu, exc(1)), ModelError);
  CHECK_THROWS_AS(interp_comp({}, {}, parse_comp("choose { return () | return () }"), fu, exc(1)),
                  ModelError);
  bool infinite = false;
  try {
    interp_comp({}, {}, parse_comp("mu z : F Unit. force z"), fu, exc(1));
  } catch (const ModelError& err) {
    infinite = err.kind() == ModelErrorKind::InfiniteModel;
  }
  CHECK(infinite);
}

TEST_CASE("check_equation") {
  CType fu = parse_ctype("F Unit");
  Verdict v = check_equation({}, parse_comp("(error e) to x. return ()"), parse_comp("return ()"),
                             fu, exc(1));
  CHECK(v.kind == Verdict::Kind::Counterexample);
  CHECK(v.lhs == "err e");
  CHECK(v.rhs == "ret ()");

  auto t = context({{"m", "U F Sum(Unit, Unit)"}, {"n", "U F Sum(Unit, Unit)"}});
  auto sig = EffectSignature::pure();
  Comp lhs = parse_comp("(force m) to x. (force n) to y. return (x, y)", sig, t.names);
  Comp rhs = parse_comp("(force n) to y. (force m) to x. return (x, y)", sig, t.names);
  CType pair = parse_ctype("F Sigma a : Sum(Unit, Unit). Sum(Unit, Unit)");
  // Exceptions do not commute: with one error the two orders agree, with two
  // they do not.
  CHECK(check_equation(t.ctx, lhs, rhs, pair, exc(1)).kind == Verdict::Kind::Equal);
  Verdict two = check_equation(t.ctx, lhs, rhs, pair, exc(2));
  CHECK(two.kind == Verdict::Kind::Counterexample);
  CHECK(two.env.find("m = err") != std::string::npos);

  ModelOptions tiny;
  tiny.cap = 3;
  CHECK(check_equation(t.ctx, lhs, lhs, pair, exc(2), tiny).kind == Verdict::Kind::CapExceeded);

  // Literal scrutinees whose type cannot be inferred on their own.
  CType sum = parse_ctype("F Sum(Unit, Unit)");
  CHECK(check_equation({}, parse_comp("pm ((), (2, ())) as (a, b). return b"), parse_comp("return (2, ())"),
                       sum, exc(1))
            .kind == Verdict::Kind::Equal);
  CHECK(check_equation({}, parse_comp("pm ((), (2, ())) as (a, b). return b"), parse_comp("return (1, ())"),
                       sum, exc(1))
            .kind == Verdict::Kind::Counterexample);
}

TEST_CASE("force thunk and normalization are sound in the model") {
  for (std::size_t e = 1; e <= 2; ++e) {
    for (const auto& [src, ty] : kClosed) {
      std::string source = src;
      CAPTURE(source);
      Comp m = parse_comp(src);
      CType b = parse_ctype(ty);
      Elem direct = interp_comp({}, {}, m, b, exc(e));
      CHECK(interp_comp({}, {}, mk::force(mk::thunk(m)), b, exc(e)) == direct);
      CHECK(interp_comp({}, {}, normalize(m), b, exc(e)) == direct);
      Comp cvf = eliminate_complex_values(m);
      CHECK(complex_value_free(cvf));
      CHECK(check_equation({}, m, cvf, b, exc(e)).kind == Verdict::Kind::Equal);
    }
  }
}

TEST_CASE("algebra laws") {
  const char* types[] = {"F Unit", "Prod(F Unit, F Sum(Unit, Unit))",
                         "Pi x : Sum(Unit, Unit). F Id Sum(Unit, Unit) x (1, ())",
                         "Pi x : Sum(Unit, Unit). Prod(F Unit, Pi y : Unit. F Unit)", "Prod()"};
  for (const char* ty : types) {
    CAPTURE(ty);
    for (std::size_t e = 0; e <= 2; ++e) {
      CHECK(algebra_laws_hold({}, {}, parse_ctype(ty), exc(e)));
    }
    for (std::size_t n = 1; n <= 3; ++n) {
      CHECK(algebra_laws_hold({}, {}, parse_ctype(ty), WriterSpec{cyclic(n)}));
    }
  }
}

TEST_CASE("writer model") {
  auto z2 = cyclic(2);
  auto sig = writer_sig(z2);
  WriterSpec w{z2};
  CType fu = parse_ctype("F Unit");
  CHECK(interp_ctype({}, {}, fu, w).size() == 2);
  CHECK(check_equation({}, parse_comp("print \"a\" print \"a\" return ()", sig),
                       parse_comp("return ()", sig), fu, w)
            .kind == Verdict::Kind::Equal);
  CHECK(check_equation({}, parse_comp("print \"a\" return ()", sig), parse_comp("return ()", sig),
                       fu, w)
            .kind == Verdict::Kind::Counterexample);
  // print commutes with sequencing
  auto t = context({{"m", "U F Unit"}});
  Comp a = parse_comp("(print \"a\" force m) to x. return x", sig, t.names);
  Comp b = parse_comp("print \"a\" ((force m) to x. return x)", sig, t.names);
  CHECK(check_equation(t.ctx, a, b, fu, w).kind == Verdict::Kind::Equal);
  // and acts pointwise on functions
  Elem f = interp_comp({}, {}, parse_comp("print \"a\" (lam x : Unit. return x)", sig),
                       parse_ctype("Pi x : Unit. F Unit"), w);
  CHECK(show_elem(f) == "{() -> ret[a] ()}");

  Comp dep = parse_comp("(print \"a\" return ()) to x [z |- F Id (U F Unit) z z]. "
                        "return refl (thunk return x)",
                        sig);
  CHECK_THROWS_AS(interp_comp({}, {}, dep, parse_ctype("F Unit"), w), ModelError);
}

TEST_CASE("effect-tree model") {
  FreeSpec fr{EffectSignature::all_effects(), 3};
  CType fu = parse_ctype("F Unit");
  auto t = context({{"k", "U Pi x : Unit. F Unit"}});
  auto sig = EffectSignature::all_effects();
  Comp a = parse_comp("(choose { return () | print \"a\" return () }) to x. x ' force k", sig,
                      t.names);
  Comp b = parse_comp("choose { () ' force k | print \"a\" (() ' force k) }", sig, t.names);
  // Closed instances of k.
  for (const char* k : {"lam x : Unit. return x", "lam x : Unit. error e",
                        "lam x : Unit. write s1 return x"}) {
    Comp ka = substitute(a, mk::thunk(parse_comp(k, sig)));
    Comp kb = substitute(b, mk::thunk(parse_comp(k, sig)));
    CHECK(interp_comp({}, {}, ka, fu, fr) == interp_comp({}, {}, kb, fu, fr));
  }
  CHECK(show_elem(interp_comp({}, {}, parse_comp("mu z : F Unit. force z"), fu, fr)) == "bottom");
  CHECK(interp_comp({}, {}, parse_comp("diverge"), fu, fr) ==
        interp_comp({}, {}, parse_comp("mu z : F Unit. force z"), fu, fr));
  CHECK(show_elem(interp_comp({}, {}, parse_comp("read { s0 -> return () | s1 -> diverge }"), fu,
                              fr)) == "read[ret (), bottom]");
  // Approximants grow with the unfolding depth.
  Comp loop = parse_comp("mu z : F Unit. print \"a\" force z");
  CHECK(show_elem(interp_comp({}, {}, loop, fu, FreeSpec{sig, 2})) == "print:a[print:a[bottom]]");
  CHECK_THROWS_AS(interp_ctype({}, {}, fu, fr), ModelError);
}

TEST_CASE("dependent Kleisli extension for exceptions") {
  // f constant at the unit element, E = {e}.
  ExcFamily fam{2, 1, {1, 1, 1}};
  auto ext = dep_kleisli_exception(fam, {{false, 0}, {false, 0}});
  CHECK(ext.size() == 3);
  CHECK(ext[2] == ExcElem{true, 0});
  // no errors: the extension is f itself
  ExcFamily noerr{3, 0, {2, 1, 2}};
  std::vector<ExcElem> f{{false, 1}, {false, 0}, {false, 1}};
  CHECK(dep_kleisli_exception(noerr, f) == f);

  // Exhaustively over small families: the extension restricts to f, fixes
  // errors, and is the unique such dependent function.
  std::size_t families = 0;
  for (std::size_t a = 0; a <= 3; ++a) {
    for (std::size_t e = 0; e <= 2; ++e) {
      std::size_t points = a + e;
      std::vector<std::size_t> sizes(points, 0);
      while (true) {
        ExcFamily fam2{a, e, sizes};
        ++families;
        // every f : Pi a. B(a) + E
        std::vector<std::vector<ExcElem>> fs{{}};
        for (std::size_t i = 0; i < a; ++i) {
          std::vector<std::vector<ExcElem>> next;
          for (const auto& p : fs) {
            for (std::size_t j = 0; j < sizes[i]; ++j) {
              auto q = p;
              q.push_back({false, j});
              next.push_back(q);
            }
            for (std::size_t j = 0; j < e; ++j) {
              auto q = p;
              q.push_back({true, j});
              next.push_back(q);
            }
          }
          fs = std::move(next);
        }
        auto all = all_dependent_functions(fam2);
        for (const auto& fn : fs) {
          auto star = dep_kleisli_exception(fam2, fn);
          CHECK(std::vector<ExcElem>(star.begin(), star.begin() + a) == fn);
          std::size_t homs = 0;
          for (const auto& g : all) {
            bool ok = std::equal(fn.begin(), fn.end(), g.begin());
            for (std::size_t j = 0; j < e; ++j) ok = ok && g[a + j] == ExcElem{true, j};
            if (ok) {
              ++homs;
              CHECK(g == star);
            }
          }
          CHECK(homs == 1);
          // Constant family: agrees with the ordinary extension [f, inr].
          bool constant = std::all_of(sizes.begin(), sizes.end(),
                                      [&](std::size_t s) { return s == sizes.front(); });
          if (constant) {
            for (std::size_t j = 0; j < e; ++j) CHECK(star[a + j] == ExcElem{true, j});
          }
        }
        std::size_t i = 0;
        while (i < points && ++sizes[i] > 2) sizes[i++] = 0;
        if (i == points) break;
      }
    }
  }
  CHECK(families > 100);
}

TEST_CASE("writer has no dependent Kleisli extension") {
  auto r = refute_dependent_kleisli_writer(cyclic(2), 1);
  CHECK(r.kind == WriterRefutation::Kind::Refutation);
  CHECK(r.search_space == 0);
  CHECK(r.extensions == 0);
  CHECK(r.predicate == std::vector<std::vector<bool>>{{true}, {false}});

  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t a = 1; a <= 3; ++a) {
      CHECK(refute_dependent_kleisli_writer(cyclic(n), a).kind ==
            WriterRefutation::Kind::Refutation);
    }
  }
  auto trivial = refute_dependent_kleisli_writer(cyclic(1), 1);
  CHECK(trivial.kind == WriterRefutation::Kind::ExtensionFound);
  CHECK(trivial.extensions == 1);
  auto empty = refute_dependent_kleisli_writer(cyclic(2), 0);
  CHECK(empty.kind == WriterRefutation::Kind::ExtensionFound);
  CHECK(empty.search_space == 1);
}

TEST_CASE("equations of the theory, small sweep") {
  std::vector<Figure4Instance> grid{{1, 1, "F Unit", 1},
                                    {2, 2, "F Unit", 2},
                                    {2, 1, "Prod(F Unit, F Unit)", 1},
                                    {2, 1, "Pi x : Sum(Unit, Unit). F Unit", 1}};
  auto rows = check_figure4(grid);
  CHECK(rows.size() == 20 * grid.size());
  std::set<std::string> names;
  for (const auto& r : rows) {
    CAPTURE(r.equation);
    CAPTURE(r.instance);
    CHECK(r.verdict.kind == Verdict::Kind::Equal);
    CHECK(r.verdict.environments > 0);
    names.insert(r.equation);
  }
  CHECK(names.size() == 20);
}
