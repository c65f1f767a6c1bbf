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

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "dcbpv/syntax.hpp"

using namespace dcbpv;

namespace {

// A named-variable term language covering binders in values, computations
// and types. Used as an independent oracle for de Bruijn plumbing.
struct Named {
  enum Kind { Var, Unit, Pair, Thunk, Ret, Force, Lam, To, IdT } kind;
  std::string name;  // variable or binder
  std::vector<std::shared_ptr<Named>> kids;
};
using NP = std::shared_ptr<Named>;

NP nvar(std::string n) { return std::make_shared<Named>(Named{Named::Var, std::move(n), {}}); }
NP node(Named::Kind k, std::vector<NP> kids, std::string n = "") {
  return std::make_shared<Named>(Named{k, std::move(n), std::move(kids)});
}

int g_fresh = 0;

// Naive named substitution with eager renaming of every binder.
NP nsubst(const NP& t, const std::string& x, const NP& v) {
  switch (t->kind) {
    case Named::Var:
      return t->name == x ? v : t;
    case Named::Lam:
    case Named::To: {
      std::string y = "_f" + std::to_string(g_fresh++);
      std::vector<NP> kids;
      std::size_t last = t->kids.size() - 1;
      for (std::size_t i = 0; i < t->kids.size(); ++i) {
        NP k = t->kids[i];
        if (i == last) k = nsubst(k, t->name, nvar(y));
        kids.push_back(nsubst(k, x, v));
      }
      return node(t->kind, kids, y);
    }
    default: {
      std::vector<NP> kids;
      for (const auto& k : t->kids) kids.push_back(nsubst(k, x, v));
      return node(t->kind, kids, t->name);
    }
  }
}

std::size_t index_of(const std::vector<std::string>& env, const std::string& n) {
  for (std::size_t k = env.size(); k-- > 0;) {
    if (env[k] == n) return env.size() - 1 - k;
  }
  FAIL("unbound " << n);
  return 0;
}

Value to_value(const NP& t, std::vector<std::string>& env);
Comp to_comp(const NP& t, std::vector<std::string>& env);

VType to_vtype(const NP& t, std::vector<std::string>& env) {
  // IdT(carrier-is-unit, lhs, rhs)
  return mk::id(mk::unit_type(), to_value(t->kids[0], env), to_value(t->kids[1], env));
}

Value to_value(const NP& t, std::vector<std::string>& env) {
  switch (t->kind) {
    case Named::Var:
      return mk::var(index_of(env, t->name));
    case Named::Unit:
      return mk::unit();
    case Named::Pair:
      return mk::pair(to_value(t->kids[0], env), to_value(t->kids[1], env));
    case Named::Thunk:
      return mk::thunk(to_comp(t->kids[0], env));
    default:
      FAIL("not a value");
      return nullptr;
  }
}

Comp to_comp(const NP& t, std::vector<std::string>& env) {
  switch (t->kind) {
    case Named::Ret:
      return mk::ret(to_value(t->kids[0], env));
    case Named::Force:
      return mk::force(to_value(t->kids[0], env));
    case Named::Lam: {
      VType dom = to_vtype(t->kids[0], env);
      env.push_back(t->name);
      Comp body = to_comp(t->kids[1], env);
      env.pop_back();
      return mk::lam(dom, body);
    }
    case Named::To: {
      Comp head = to_comp(t->kids[0], env);
      env.push_back(t->name);
      Comp body = to_comp(t->kids[1], env);
      env.pop_back();
      return mk::to(head, body);
    }
    default:
      FAIL("not a computation");
      return nullptr;
  }
}

struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  NP value(std::vector<std::string>& env, int depth) {
    int k = depth <= 0 ? pick(2) : pick(4);
    if (k == 0 && !env.empty()) return nvar(env[pick(static_cast<int>(env.size()))]);
    if (k <= 1) return node(Named::Unit, {});
    if (k == 2) return node(Named::Pair, {value(env, depth - 1), value(env, depth - 1)});
    return node(Named::Thunk, {comp(env, depth - 1)});
  }

  NP comp(std::vector<std::string>& env, int depth) {
    int k = depth <= 0 ? pick(2) : pick(4);
    if (k == 0) return node(Named::Ret, {value(env, depth - 1)});
    if (k == 1) return node(Named::Force, {value(env, depth - 1)});
    // Reuse names so that shadowing is exercised.
    std::string b = std::string(1, static_cast<char>('a' + pick(3)));
    if (k == 2) {
      NP dom = node(Named::IdT, {value(env, depth - 1), value(env, depth - 1)});
      env.push_back(b);
      NP body = comp(env, depth - 1);
      env.pop_back();
      return node(Named::Lam, {dom, body}, b);
    }
    NP head = comp(env, depth - 1);
    env.push_back(b);
    NP body = comp(env, depth - 1);
    env.pop_back();
    return node(Named::To, {head, body}, b);
  }
};

// Canonical rendering with binders renamed by position; equal strings mean
// alpha-equivalent terms.
std::string canon(const NP& t, std::map<std::string, std::string> ren, int& counter) {
  switch (t->kind) {
    case Named::Var: {
      auto it = ren.find(t->name);
      return it == ren.end() ? "free:" + t->name : it->second;
    }
    case Named::Lam:
    case Named::To: {
      std::string first = canon(t->kids[0], ren, counter);
      ren[t->name] = "b" + std::to_string(counter++);
      std::string bname = ren[t->name];
      return "(" + std::to_string(t->kind) + " " + first + " " + bname + ". " +
             canon(t->kids[1], ren, counter) + ")";
    }
    default: {
      std::string out = "(" + std::to_string(t->kind);
      for (const auto& k : t->kids) out += " " + canon(k, ren, counter);
      return out + ")";
    }
  }
}

std::string canon(const NP& t) {
  int counter = 0;
  return canon(t, {}, counter);
}

NP rename_binders(const NP& t, Gen& g) {
  if (t->kind == Named::Var) return t;
  std::vector<NP> kids;
  for (const auto& k : t->kids) kids.push_back(rename_binders(k, g));
  if (t->kind == Named::Lam || t->kind == Named::To) {
    std::string y = "r" + std::to_string(g_fresh++);
    kids.back() = nsubst(kids.back(), t->name, nvar(y));
    return node(t->kind, kids, y);
  }
  return node(t->kind, kids, t->name);
}

}  // namespace

TEST_CASE("shift examples") {
  CHECK(alpha_eq(shift(mk::var(0), 0, 1), mk::var(1)));
  Comp lam = mk::lam(mk::unit_type(), mk::force(mk::var(0)));
  CHECK(alpha_eq(shift(lam, 0, 1), lam));
  CHECK(alpha_eq(shift(mk::var(2), 3, 5), mk::var(2)));
  CHECK_THROWS_AS(shift(mk::var(0), 0, -1), IndexUnderflow);
}

TEST_CASE("substitute examples") {
  CHECK(alpha_eq(substitute(mk::ret(mk::var(0)), mk::unit()), mk::ret(mk::unit())));
  Value th = mk::thunk(mk::ret(mk::unit()));
  CHECK(alpha_eq(substitute(mk::force(mk::var(0)), th), mk::force(th)));
  VType id = mk::id(mk::unit_type(), mk::var(0), mk::var(0));
  CHECK(alpha_eq(substitute(id, mk::var(3)), mk::id(mk::unit_type(), mk::var(3), mk::var(3))));
  // Free variables other than the discharged one move down.
  CHECK(alpha_eq(substitute(mk::pair(mk::var(0), mk::var(1)), mk::unit()),
                 mk::pair(mk::unit(), mk::var(0))));
}

TEST_CASE("substitution agrees with named substitution") {
  Gen g(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::string> env = {"p", "q", "x"};
    NP t = g.comp(env, 4);
    std::vector<std::string> outer = {"p", "q"};
    NP v = g.value(outer, 2);
    NP expected = nsubst(t, "x", v);
    Comp got = substitute(to_comp(t, env), to_value(v, outer));
    CHECK(alpha_eq(got, to_comp(expected, outer)));
  }
}

TEST_CASE("alpha_eq agrees with canonical renaming") {
  Gen g(11);
  int equal_pairs = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> env = {"p", "q"};
    NP a = g.comp(env, 3);
    NP b = trial % 2 == 0 ? rename_binders(a, g) : g.comp(env, 3);
    bool oracle = canon(a) == canon(b);
    equal_pairs += oracle;
    CHECK(alpha_eq(to_comp(a, env), to_comp(b, env)) == oracle);
  }
  CHECK(equal_pairs >= 50);
}

TEST_CASE("alpha_eq examples") {
  Comp a = mk::lam(mk::unit_type(), mk::force(mk::var(0)));
  CHECK(alpha_eq(a, mk::lam(mk::unit_type(), mk::force(mk::var(0)))));
  CHECK_FALSE(alpha_eq(mk::ret(mk::unit()), mk::ret(mk::inj(0, mk::unit()))));
}

TEST_CASE("shift and substitute laws") {
  Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> env = {"p", "q", "r"};
    Comp m = to_comp(g.comp(env, 4), env);
    CHECK(alpha_eq(substitute(shift(m, 0, 1), mk::unit()), m));
    for (long a = 0; a < 3; ++a) {
      for (long b = 0; b < 3; ++b) {
        CHECK(alpha_eq(shift(m, 1, a + b), shift(shift(m, 1, a), 1, b)));
      }
    }
  }
}

TEST_CASE("is_simple") {
  CHECK(is_simple(mk::inj(0, mk::thunk(mk::ret(mk::unit())))));
  CHECK_FALSE(is_simple(mk::let_v(mk::unit(), mk::var(0))));
  Comp pm = mk::pm_pair(mk::var(0), mk::ret(mk::var(1)));
  CHECK(is_simple(mk::thunk(pm)));
  CHECK_FALSE(is_simple(mk::pair(mk::unit(), mk::thunk(mk::ret(mk::let_v(mk::unit(), mk::var(0)))))));
}

TEST_CASE("substitute_many and substitute_at") {
  Value t = mk::pair(mk::var(0), mk::pair(mk::var(1), mk::var(2)));
  Value got = substitute_many(t, {mk::unit(), mk::inj(1, mk::unit())});
  CHECK(alpha_eq(got, mk::pair(mk::unit(), mk::pair(mk::inj(1, mk::unit()), mk::var(0)))));
  Value at1 = substitute_at(t, 1, mk::unit());
  CHECK(alpha_eq(at1, mk::pair(mk::var(0), mk::pair(mk::unit(), mk::var(1)))));
}

TEST_CASE("effects_used and stacks") {
  Comp m = mk::to(mk::print("a", mk::ret(mk::unit())), mk::choose({mk::diverge()}));
  EffectUse u = effects_used(m);
  CHECK(u.print);
  CHECK(u.choose);
  CHECK(u.diverge);
  CHECK_FALSE(u.state);
  Stack k = push(frame::Proj{0}, push(frame::Arg{mk::unit()}, nullptr));
  CHECK(stack_depth(k) == 2);
  CHECK(alpha_eq(k, push(frame::Proj{0}, push(frame::Arg{mk::unit()}, nullptr))));
  CHECK_FALSE(alpha_eq(k, push(frame::Proj{1}, push(frame::Arg{mk::unit()}, nullptr))));
}
