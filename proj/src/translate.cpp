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

// CBV and CBN translations of the source language.

#include <functional>

#include "dcbpv/translate.hpp"
#include "dcbpv/overloaded.hpp"

namespace dcbpv {

namespace {

namespace ty = src::ty;
namespace tm = src::tm;
using Type = src::Type;
using Term = src::Term;
using TypeNode = src::TypeNode;
using TermNode = src::TermNode;
using Motive = src::Motive;

template <class T, class N>
const T* is(const std::shared_ptr<const N>& p) {
  return std::get_if<T>(&p->node);
}

Type mk_ty(TypeNode n) { return std::make_shared<const TypeNode>(std::move(n)); }
Term mk_tm(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }

// ---- source-level variable maps ----

// f receives a free variable's raw index (>= depth) and the depth it sits
// under, and returns a term valid at that depth.
using SrcVarMap = std::function<Term(std::size_t index, std::size_t depth, const Term& self)>;

Term map_term(const Term& t, std::size_t d, const SrcVarMap& f);

Type map_type(const Type& t, std::size_t d, const SrcVarMap& f) {
  auto rebuild = [&](auto node) { return mk_ty({std::move(node), t->span}); };
  return std::visit(
      overloaded{
          [&](const ty::Unit&) { return t; },
          [&](const ty::Sum& x) {
            ty::Sum y;
            for (const auto& a : x.arms) y.arms.push_back(map_type(a, d, f));
            return rebuild(y);
          },
          [&](const ty::Prod& x) {
            ty::Prod y;
            for (const auto& a : x.arms) y.arms.push_back(map_type(a, d, f));
            return rebuild(y);
          },
          [&](const ty::Pi& x) {
            return rebuild(ty::Pi{x.name, map_type(x.domain, d, f), map_type(x.codomain, d + 1, f)});
          },
          [&](const ty::Sigma& x) {
            return rebuild(ty::Sigma{x.name, map_type(x.first, d, f), map_type(x.second, d + 1, f)});
          },
          [&](const ty::Id& x) {
            return rebuild(ty::Id{map_type(x.carrier, d, f), map_term(x.lhs, d, f), map_term(x.rhs, d, f)});
          },
      },
      t->node);
}

std::optional<Motive> map_motive(const std::optional<Motive>& m, std::size_t d, const SrcVarMap& f) {
  if (!m) return std::nullopt;
  return Motive{m->names, map_type(m->result, d + m->names.size(), f)};
}

Term map_term(const Term& t, std::size_t d, const SrcVarMap& f) {
  auto rebuild = [&](auto node) { return mk_tm({std::move(node), t->span}); };
  auto go = [&](const Term& s, std::size_t extra = 0) { return map_term(s, d + extra, f); };
  return std::visit(
      overloaded{
          [&](const tm::Var& x) { return x.index >= d ? f(x.index, d, t) : t; },
          [&](const tm::Let& x) {
            std::optional<Type> a;
            if (x.annot) a = map_type(*x.annot, d, f);
            return rebuild(tm::Let{x.name, a, go(x.bound), go(x.body, 1)});
          },
          [&](const tm::Inj& x) { return rebuild(tm::Inj{x.tag, go(x.payload)}); },
          [&](const tm::PmSum& x) {
            tm::PmSum y{go(x.scrutinee), x.names, {}, map_motive(x.motive, d, f)};
            for (const auto& a : x.arms) y.arms.push_back(go(a, 1));
            return rebuild(y);
          },
          [&](const tm::Tuple& x) {
            tm::Tuple y;
            for (const auto& a : x.arms) y.arms.push_back(go(a));
            return rebuild(y);
          },
          [&](const tm::Proj& x) { return rebuild(tm::Proj{x.tag, go(x.of)}); },
          [&](const tm::Lam& x) {
            return rebuild(tm::Lam{x.name, map_type(x.domain, d, f), go(x.body, 1)});
          },
          [&](const tm::App& x) { return rebuild(tm::App{go(x.fun), go(x.arg)}); },
          [&](const tm::Unit&) { return t; },
          [&](const tm::PmUnit& x) {
            return rebuild(tm::PmUnit{go(x.scrutinee), go(x.body), map_motive(x.motive, d, f)});
          },
          [&](const tm::Pair& x) { return rebuild(tm::Pair{go(x.first), go(x.second)}); },
          [&](const tm::PmPair& x) {
            return rebuild(tm::PmPair{go(x.scrutinee), x.first, x.second, go(x.body, 2),
                                      map_motive(x.motive, d, f)});
          },
          [&](const tm::Refl& x) { return rebuild(tm::Refl{go(x.of)}); },
          [&](const tm::PmId& x) {
            return rebuild(tm::PmId{go(x.scrutinee), x.name, go(x.body, 1), map_motive(x.motive, d, f)});
          },
          [&](const tm::Ann& x) { return rebuild(tm::Ann{go(x.term), map_type(x.type, d, f)}); },
          [&](const tm::Print& x) { return rebuild(tm::Print{x.element, go(x.body)}); },
          [&](const tm::Choose& x) {
            tm::Choose y;
            for (const auto& a : x.arms) y.arms.push_back(go(a));
            return rebuild(y);
          },
          [&](const tm::Error&) { return t; },
          [&](const tm::Write& x) { return rebuild(tm::Write{x.state, go(x.body)}); },
          [&](const tm::Read& x) {
            tm::Read y;
            for (const auto& [s, a] : x.arms) y.arms.emplace_back(s, go(a));
            return rebuild(y);
          },
          [&](const tm::Diverge&) { return t; },
          [&](const tm::Mu& x) { return rebuild(tm::Mu{x.name, map_type(x.type, d, f), go(x.body, 1)}); },
      },
      t->node);
}

Term var_like(const Term& self, std::size_t index) {
  return mk_tm({tm::Var{index, std::get<tm::Var>(self->node).name}, self->span});
}

template <class T>
T src_shift(const T& t, std::size_t cutoff, long delta) {
  SrcVarMap f = [&](std::size_t i, std::size_t d, const Term& self) {
    return i >= d + cutoff ? var_like(self, static_cast<std::size_t>(static_cast<long>(i) + delta))
                           : self;
  };
  if constexpr (std::is_same_v<T, Type>) return map_type(t, 0, f);
  else return map_term(t, 0, f);
}

// Replaces variables 0..k-1 by vals[0..k-1] (given in the outer context).
template <class T>
T src_subst(const T& t, const std::vector<Term>& vals) {
  std::size_t k = vals.size();
  SrcVarMap f = [&](std::size_t i, std::size_t d, const Term& self) {
    std::size_t j = i - d;
    if (j < k) return src_shift(vals[j], 0, static_cast<long>(d));
    return var_like(self, i - k);
  };
  if constexpr (std::is_same_v<T, Type>) return map_type(t, 0, f);
  else return map_term(t, 0, f);
}

template <class T>
bool src_occurs(const T& t, std::size_t index) {
  bool found = false;
  SrcVarMap f = [&](std::size_t i, std::size_t d, const Term& self) {
    if (i - d == index) found = true;
    return self;
  };
  if constexpr (std::is_same_v<T, Type>) map_type(t, 0, f);
  else map_term(t, 0, f);
  return found;
}

// Replaces the k innermost variables by vals, which live under `extra`
// fresh binders in place of those k.
Type replace_top(const Type& t, const std::vector<Term>& vals, std::size_t extra) {
  std::size_t k = vals.size();
  SrcVarMap f = [&](std::size_t i, std::size_t d, const Term& self) {
    std::size_t j = i - d;
    if (j < k) return src_shift(vals[j], 0, static_cast<long>(d));
    return var_like(self, i - k + extra);
  };
  return map_type(t, 0, f);
}

Term svar(std::size_t i) { return mk_tm({tm::Var{i, {}}, {}}); }

// Removes `k` unused innermost variables, if they are indeed unused.
std::optional<Type> strengthen(const Type& t, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) {
    if (src_occurs(t, i)) return std::nullopt;
  }
  return src_shift(t, k, -static_cast<long>(k));
}

// ---- scopes and type synthesis ----

struct Entry {
  std::optional<Type> type;
  // In a motive, a variable standing for a thunk of its own translation.
  bool thunk = false;
};
using Scope = std::vector<Entry>;

Scope with(Scope sc, std::optional<Type> t, bool thunk = false) {
  sc.push_back({std::move(t), thunk});
  return sc;
}

bool is_value(const Term& t) {
  return std::visit(overloaded{
                        [](const tm::Var&) { return true; },
                        [](const tm::Unit&) { return true; },
                        [](const tm::Lam&) { return true; },
                        [](const tm::Tuple&) { return true; },
                        [](const tm::Inj& x) { return is_value(x.payload); },
                        [](const tm::Pair& x) { return is_value(x.first) && is_value(x.second); },
                        [](const tm::Refl& x) { return is_value(x.of); },
                        [](const tm::Ann& x) { return is_value(x.term); },
                        [](const auto&) { return false; },
                    },
                    t->node);
}

std::optional<Type> synth(const Scope& sc, const Term& t);

std::optional<Type> weak_arm(const Scope& sc, const Term& body, std::vector<std::optional<Type>> binders) {
  Scope inner = sc;
  for (auto& b : binders) inner.push_back({std::move(b), false});
  auto r = synth(inner, body);
  if (!r) return std::nullopt;
  return strengthen(*r, binders.size());
}

std::optional<Type> synth(const Scope& sc, const Term& t) {
  return std::visit(
      overloaded{
          [&](const tm::Var& x) -> std::optional<Type> {
            if (x.index >= sc.size()) return std::nullopt;
            const auto& e = sc[sc.size() - 1 - x.index].type;
            if (!e) return std::nullopt;
            return src_shift(*e, 0, static_cast<long>(x.index + 1));
          },
          [&](const tm::Ann& x) -> std::optional<Type> { return x.type; },
          [&](const tm::Let& x) -> std::optional<Type> {
            std::optional<Type> a = x.annot ? x.annot : synth(sc, x.bound);
            auto b = synth(with(sc, a), x.body);
            if (!b) return std::nullopt;
            return src_subst(*b, {x.bound});
          },
          [&](const tm::Lam& x) -> std::optional<Type> {
            auto b = synth(with(sc, x.domain), x.body);
            if (!b) return std::nullopt;
            return mk_ty({ty::Pi{x.name, x.domain, *b}, t->span});
          },
          [&](const tm::App& x) -> std::optional<Type> {
            auto f = synth(sc, x.fun);
            if (!f) return std::nullopt;
            const auto* pi = is<ty::Pi>(*f);
            if (!pi) return std::nullopt;
            return src_subst(pi->codomain, {x.arg});
          },
          [&](const tm::Unit&) -> std::optional<Type> { return mk_ty({ty::Unit{}, t->span}); },
          [&](const tm::Pair& x) -> std::optional<Type> {
            auto a = synth(sc, x.first);
            auto b = synth(sc, x.second);
            if (!a || !b) return std::nullopt;
            return mk_ty({ty::Sigma{"_", *a, src_shift(*b, 0, 1)}, t->span});
          },
          [&](const tm::Tuple& x) -> std::optional<Type> {
            ty::Prod p;
            for (const auto& a : x.arms) {
              auto s = synth(sc, a);
              if (!s) return std::nullopt;
              p.arms.push_back(*s);
            }
            return mk_ty({p, t->span});
          },
          [&](const tm::Proj& x) -> std::optional<Type> {
            auto s = synth(sc, x.of);
            if (!s) return std::nullopt;
            const auto* p = is<ty::Prod>(*s);
            if (!p || x.tag >= p->arms.size()) return std::nullopt;
            return p->arms[x.tag];
          },
          [&](const tm::Refl& x) -> std::optional<Type> {
            auto a = synth(sc, x.of);
            if (!a) return std::nullopt;
            return mk_ty({ty::Id{*a, x.of, x.of}, t->span});
          },
          [&](const tm::PmSum& x) -> std::optional<Type> {
            if (x.motive) return src_subst(x.motive->result, {x.scrutinee});
            if (x.arms.empty()) return std::nullopt;
            std::optional<Type> arm;
            if (auto s = synth(sc, x.scrutinee)) {
              if (const auto* sum = is<ty::Sum>(*s)) arm = sum->arms.at(0);
            }
            return weak_arm(sc, x.arms[0], {arm});
          },
          [&](const tm::PmUnit& x) -> std::optional<Type> {
            if (x.motive) return src_subst(x.motive->result, {x.scrutinee});
            return synth(sc, x.body);
          },
          [&](const tm::PmPair& x) -> std::optional<Type> {
            if (x.motive) return src_subst(x.motive->result, {x.scrutinee});
            std::optional<Type> a, b;
            if (auto s = synth(sc, x.scrutinee)) {
              if (const auto* sg = is<ty::Sigma>(*s)) {
                a = sg->first;
                b = sg->second;
              }
            }
            return weak_arm(sc, x.body, {a, b});
          },
          [&](const tm::PmId& x) -> std::optional<Type> {
            auto s = synth(sc, x.scrutinee);
            const ty::Id* id = s ? is<ty::Id>(*s) : nullptr;
            if (x.motive) {
              if (!id) return std::nullopt;
              return src_subst(x.motive->result, {x.scrutinee, id->rhs, id->lhs});
            }
            std::optional<Type> a;
            if (id) a = id->carrier;
            return weak_arm(sc, x.body, {a});
          },
          [&](const tm::Print& x) { return synth(sc, x.body); },
          [&](const tm::Write& x) { return synth(sc, x.body); },
          [&](const tm::Choose& x) -> std::optional<Type> {
            for (const auto& a : x.arms) {
              if (auto s = synth(sc, a)) return s;
            }
            return std::nullopt;
          },
          [&](const tm::Read& x) -> std::optional<Type> {
            for (const auto& a : x.arms) {
              if (auto s = synth(sc, a.second)) return s;
            }
            return std::nullopt;
          },
          [&](const tm::Mu& x) -> std::optional<Type> { return x.type; },
          [&](const auto&) -> std::optional<Type> { return std::nullopt; },
      },
      t->node);
}

Scope plain_scope(const SrcScope& s) {
  Scope sc;
  for (const auto& t : s) sc.push_back({t, false});
  return sc;
}

// Expected types, threaded downwards so that binders can be annotated where
// synthesis alone gives up.
using Exp = std::optional<Type>;

Exp under(const Exp& e, std::size_t k) {
  if (!e) return std::nullopt;
  return src_shift(*e, 0, static_cast<long>(k));
}

Exp known(const Scope& sc, const Term& t, const Exp& e) {
  if (e) return e;
  return synth(sc, t);
}

template <class T>
const T* exp_as(const Exp& e) {
  return e ? is<T>(*e) : nullptr;
}

// ---- call-by-value ----

Comp cbv(const Scope& sc, const Term& t, const Exp& exp = std::nullopt);

VType cbv_ty(const Scope& sc, const Type& a) {
  return std::visit(
      overloaded{
          [&](const ty::Unit&) { return mk::unit_type(a->span); },
          [&](const ty::Sum& x) {
            std::vector<VType> arms;
            for (const auto& b : x.arms) arms.push_back(cbv_ty(sc, b));
            return mk::sum(arms, a->span);
          },
          [&](const ty::Prod& x) {
            std::vector<CType> arms;
            for (const auto& b : x.arms) arms.push_back(mk::F(cbv_ty(sc, b)));
            return mk::U(mk::prod(arms), a->span);
          },
          [&](const ty::Pi& x) {
            VType dom = cbv_ty(sc, x.domain);
            return mk::U(mk::pi(dom, mk::F(cbv_ty(with(sc, x.domain), x.codomain))), a->span);
          },
          [&](const ty::Sigma& x) {
            return mk::sigma(cbv_ty(sc, x.first), cbv_ty(with(sc, x.first), x.second), a->span);
          },
          [&](const ty::Id& x) {
            VType carrier = mk::U(mk::F(cbv_ty(sc, x.carrier)));
            return mk::id(carrier, mk::thunk(cbv(sc, x.lhs)), mk::thunk(cbv(sc, x.rhs)), a->span);
          },
      },
      a->node);
}

std::optional<VType> cbv_binder(const Scope& sc, const std::optional<Type>& a) {
  if (!a) return std::nullopt;
  return cbv_ty(sc, *a);
}

// M^v to z. body, where body already lives under z. `dep` is the source
// result type under z, if the result depends on z.
Comp cbv_seq(const Scope& sc, const Term& head, Comp body, const std::optional<Type>& head_ty,
             const std::optional<Type>& dep, SourceSpan span) {
  std::optional<dcbpv::Motive> mot;
  if (dep && src_occurs(*dep, 0) && !is_value(head)) {
    mot = dcbpv::Motive{{}, mk::F(cbv_ty(with(sc, head_ty, true), *dep))};
  }
  return mk::to(cbv(sc, head, head_ty), std::move(body), cbv_binder(sc, head_ty), std::move(mot), span);
}

// Translated motives of a source pattern match with a single-variable motive.
std::pair<std::optional<dcbpv::Motive>, std::optional<dcbpv::Motive>> cbv_motives(
    const Scope& sc, const std::optional<Motive>& m, const std::optional<Type>& scr_ty) {
  if (!m) return {};
  dcbpv::Motive outer{{}, mk::F(cbv_ty(with(sc, scr_ty, true), m->result))};
  dcbpv::Motive inner{{}, shift(mk::F(cbv_ty(with(sc, scr_ty, false), m->result)), 1, 1)};
  return {outer, inner};
}

Comp cbv(const Scope& sc, const Term& t, const Exp& exp) {
  SourceSpan sp = t->span;
  return std::visit(
      overloaded{
          [&](const tm::Var& x) {
            if (sc.size() > x.index && sc[sc.size() - 1 - x.index].thunk) {
              return mk::force(mk::var(x.index, sp), sp);
            }
            return mk::ret(mk::var(x.index, sp), sp);
          },
          [&](const tm::Ann& x) { return cbv(sc, x.term, x.type); },
          [&](const tm::Let& x) {
            std::optional<Type> a = x.annot ? x.annot : synth(sc, x.bound);
            Comp body = cbv(with(sc, a), x.body, under(exp, 1));
            // A known result type does not mention the bound variable.
            Exp dep = exp ? under(exp, 1) : synth(with(sc, a), x.body);
            return cbv_seq(sc, x.bound, body, a, dep, sp);
          },
          [&](const tm::Inj& x) {
            Exp arm;
            if (const auto* sum = exp_as<ty::Sum>(exp); sum && x.tag < sum->arms.size()) arm = sum->arms[x.tag];
            return cbv_seq(sc, x.payload, mk::ret(mk::inj(x.tag, mk::var(0))), known(sc, x.payload, arm),
                           std::nullopt, sp);
          },
          [&](const tm::PmSum& x) {
            auto st = synth(sc, x.scrutinee);
            const ty::Sum* sum = st ? is<ty::Sum>(*st) : nullptr;
            std::vector<Comp> arms;
            for (std::size_t i = 0; i < x.arms.size(); ++i) {
              std::optional<Type> a;
              if (sum && i < sum->arms.size()) a = sum->arms[i];
              Exp e = x.motive ? Exp(replace_top(x.motive->result, {mk_tm({tm::Inj{i, svar(0)}, {}})}, 1))
                               : under(exp, 1);
              arms.push_back(shift(cbv(with(sc, a), x.arms[i], e), 1, 1));
            }
            auto [outer, inner] = cbv_motives(sc, x.motive, st);
            return mk::to(cbv(sc, x.scrutinee), mk::pm_sum(mk::var(0), arms, inner, sp),
                          cbv_binder(sc, st), outer, sp);
          },
          [&](const tm::Tuple& x) {
            std::vector<Comp> arms;
            const auto* prod = exp_as<ty::Prod>(exp);
            for (std::size_t i = 0; i < x.arms.size(); ++i) {
              Exp e;
              if (prod && i < prod->arms.size()) e = prod->arms[i];
              arms.push_back(cbv(sc, x.arms[i], e));
            }
            return mk::ret(mk::thunk(mk::tuple(arms, sp)), sp);
          },
          [&](const tm::Proj& x) {
            return cbv_seq(sc, x.of, mk::proj(x.tag, mk::force(mk::var(0))), synth(sc, x.of),
                           std::nullopt, sp);
          },
          [&](const tm::Lam& x) {
            Exp e;
            if (const auto* pi = exp_as<ty::Pi>(exp)) e = pi->codomain;
            Comp body = cbv(with(sc, x.domain), x.body, e);
            return mk::ret(mk::thunk(mk::lam(cbv_ty(sc, x.domain), body, sp)), sp);
          },
          [&](const tm::App& x) {
            auto ft = synth(sc, x.fun);
            const ty::Pi* pi = ft ? is<ty::Pi>(*ft) : nullptr;
            std::optional<Type> dom, cod;
            if (pi) {
              dom = pi->domain;
              cod = pi->codomain;
            }
            // The function's binder lives under the argument's.
            std::optional<VType> fb;
            if (ft) fb = shift(cbv_ty(sc, *ft), 0, 1);
            Comp inner = mk::to(shift(cbv(sc, x.fun), 0, 1),
                                mk::app(mk::var(1), mk::force(mk::var(0)), sp), fb, std::nullopt, sp);
            return cbv_seq(sc, x.arg, inner, dom, cod, sp);
          },
          [&](const tm::Unit&) { return mk::ret(mk::unit(sp), sp); },
          [&](const tm::PmUnit& x) {
            auto st = synth(sc, x.scrutinee);
            auto [outer, inner] = cbv_motives(sc, x.motive, st);
            Exp e = x.motive ? Exp(replace_top(x.motive->result, {mk_tm({tm::Unit{}, {}})}, 0)) : exp;
            return mk::to(cbv(sc, x.scrutinee),
                          mk::pm_unit(mk::var(0), shift(cbv(sc, x.body, e), 0, 1), inner, sp),
                          cbv_binder(sc, st), outer, sp);
          },
          [&](const tm::Pair& x) {
            Exp ea, eb;
            if (const auto* sg = exp_as<ty::Sigma>(exp)) {
              ea = sg->first;
              eb = src_subst(sg->second, {x.first});
            }
            auto a = known(sc, x.first, ea);
            auto b = known(sc, x.second, eb);
            std::optional<VType> bb;
            if (b) bb = shift(cbv_ty(sc, *b), 0, 1);
            Comp inner = mk::to(shift(cbv(sc, x.second, b), 0, 1),
                                mk::ret(mk::pair(mk::var(1), mk::var(0)), sp), bb, std::nullopt, sp);
            return cbv_seq(sc, x.first, inner, a, std::nullopt, sp);
          },
          [&](const tm::PmPair& x) {
            auto st = synth(sc, x.scrutinee);
            const ty::Sigma* sg = st ? is<ty::Sigma>(*st) : nullptr;
            std::optional<Type> a, b;
            if (sg) {
              a = sg->first;
              b = sg->second;
            }
            Exp e = x.motive ? Exp(replace_top(x.motive->result, {mk_tm({tm::Pair{svar(1), svar(0)}, {}})}, 2))
                             : under(exp, 2);
            Comp body = shift(cbv(with(with(sc, a), b), x.body, e), 2, 1);
            auto [outer, inner] = cbv_motives(sc, x.motive, st);
            return mk::to(cbv(sc, x.scrutinee), mk::pm_pair(mk::var(0), body, inner, sp),
                          cbv_binder(sc, st), outer, sp);
          },
          [&](const tm::Refl& x) {
            Exp ea;
            if (const auto* id = exp_as<ty::Id>(exp)) ea = id->carrier;
            auto a = known(sc, x.of, ea);
            std::optional<dcbpv::Motive> mot;
            if (a && !is_value(x.of)) {
              VType carrier = shift(mk::U(mk::F(cbv_ty(sc, *a))), 0, 1);
              mot = dcbpv::Motive{{}, mk::F(mk::id(carrier, mk::var(0), mk::var(0)))};
            }
            return mk::to(cbv(sc, x.of, a), mk::ret(mk::refl(mk::tr(mk::var(0))), sp), cbv_binder(sc, a),
                          mot, sp);
          },
          [&](const tm::PmId& x) {
            auto st = synth(sc, x.scrutinee);
            const ty::Id* id = st ? is<ty::Id>(*st) : nullptr;
            std::optional<Type> carrier;
            if (id) carrier = id->carrier;
            // outer, z, y, x
            Exp e = x.motive ? Exp(replace_top(x.motive->result, {mk_tm({tm::Refl{svar(0)}, {}}), svar(0), svar(0)}, 1))
                             : under(exp, 1);
            Comp n = shift(cbv(with(sc, carrier), x.body, e), 1, 2);
            std::optional<dcbpv::Motive> outer, inner, forced;
            if (x.motive) {
              Scope ms = with(with(with(sc, carrier, true), carrier ? std::optional<Type>(src_shift(*carrier, 0, 1))
                                                                   : std::nullopt,
                                        true),
                              std::nullopt, false);
              if (carrier) {
                ms.back().type = mk_ty({ty::Id{src_shift(*carrier, 0, 2),
                                               mk_tm({tm::Var{1, x.motive->names[0]}, {}}),
                                               mk_tm({tm::Var{0, x.motive->names[1]}, {}})},
                                        {}});
              }
              CType t_pm = mk::F(cbv_ty(ms, x.motive->result));
              inner = dcbpv::Motive{{}, shift(t_pm, 3, 1)};
              CType at_w = map_vars(t_pm, [](std::size_t j) {
                if (j == 0) return mk::refl(mk::var(0));
                if (j <= 2) return mk::var(0);
                return mk::var(j - 2);
              });
              forced = dcbpv::Motive{{}, shift(at_w, 1, 2)};
              if (id) {
                Type r = src_subst(x.motive->result, {mk_tm({tm::Var{0, "p"}, {}}),
                                                      src_shift(id->rhs, 0, 1), src_shift(id->lhs, 0, 1)});
                outer = dcbpv::Motive{{}, mk::F(cbv_ty(with(sc, st, true), r))};
              }
            }
            std::optional<VType> cb;
            if (carrier) cb = shift(cbv_ty(sc, *carrier), 0, 2);
            Comp arm = mk::to(mk::force(mk::var(0)), n, cb, forced, sp);
            return mk::to(cbv(sc, x.scrutinee), mk::pm_id(mk::var(0), arm, inner, sp), cbv_binder(sc, st),
                          outer, sp);
          },
          [&](const tm::Print& x) { return mk::print(x.element, cbv(sc, x.body, exp), sp); },
          [&](const tm::Choose& x) {
            std::vector<Comp> arms;
            for (const auto& a : x.arms) arms.push_back(cbv(sc, a, exp));
            return mk::choose(arms, sp);
          },
          [&](const tm::Error& x) { return mk::error(x.name, sp); },
          [&](const tm::Write& x) { return mk::write(x.state, cbv(sc, x.body, exp), sp); },
          [&](const tm::Read& x) {
            std::vector<comp::ReadArm> arms;
            for (const auto& [s, a] : x.arms) arms.push_back({s, cbv(sc, a, exp)});
            return mk::read(arms, sp);
          },
          [&](const tm::Diverge&) { return mk::diverge(sp); },
          [&](const tm::Mu& x) {
            VType a = cbv_ty(sc, x.type);
            // outer, z, x
            Comp body = shift(cbv(with(sc, x.type), x.body, under(x.type, 1)), 1, 1);
            Comp unrolled = mk::to(mk::force(mk::var(0)), body, shift(a, 0, 1), std::nullopt, sp);
            return mk::mu(unrolled, mk::F(a), sp);
          },
      },
      t->node);
}

// ---- call-by-name ----

Comp cbn(const Scope& sc, const Term& t);

CType cbn_ty(const Scope& sc, const Type& b) {
  return std::visit(
      overloaded{
          [&](const ty::Unit&) { return mk::F(mk::unit_type(), b->span); },
          [&](const ty::Sum& x) {
            std::vector<VType> arms;
            for (const auto& a : x.arms) arms.push_back(mk::U(cbn_ty(sc, a)));
            return mk::F(mk::sum(arms), b->span);
          },
          [&](const ty::Prod& x) {
            std::vector<CType> arms;
            for (const auto& a : x.arms) arms.push_back(cbn_ty(sc, a));
            return mk::prod(arms, b->span);
          },
          [&](const ty::Pi& x) {
            return mk::pi(mk::U(cbn_ty(sc, x.domain)), cbn_ty(with(sc, x.domain), x.codomain), b->span);
          },
          [&](const ty::Sigma& x) {
            return mk::F(mk::sigma(mk::U(cbn_ty(sc, x.first)), mk::U(cbn_ty(with(sc, x.first), x.second))),
                         b->span);
          },
          [&](const ty::Id& x) {
            return mk::F(mk::id(mk::U(cbn_ty(sc, x.carrier)), mk::thunk(cbn(sc, x.lhs)),
                                mk::thunk(cbn(sc, x.rhs))),
                         b->span);
          },
      },
      b->node);
}

std::pair<std::optional<dcbpv::Motive>, std::optional<dcbpv::Motive>> cbn_motives(
    const Scope& sc, const std::optional<Motive>& m, const std::optional<Type>& scr_ty) {
  if (!m) return {};
  CType t = cbn_ty(with(sc, scr_ty), m->result);
  CType at_value = map_vars(t, [](std::size_t j) { return j == 0 ? mk::tr(mk::var(0)) : mk::var(j); });
  return {dcbpv::Motive{{}, t}, dcbpv::Motive{{}, shift(at_value, 1, 1)}};
}

// The returner type of M^n for a source type of elimination form.
std::optional<VType> cbn_binder(const Scope& sc, const std::optional<Type>& a) {
  if (!a) return std::nullopt;
  CType b = cbn_ty(sc, *a);
  const auto* f = std::get_if<ct::F>(&b->node);
  if (!f) return std::nullopt;
  return f->returns;
}

Comp cbn(const Scope& sc, const Term& t) {
  SourceSpan sp = t->span;
  auto th = [&](const Scope& s, const Term& m) { return mk::thunk(cbn(s, m)); };
  return std::visit(
      overloaded{
          [&](const tm::Var& x) { return mk::force(mk::var(x.index, sp), sp); },
          [&](const tm::Ann& x) { return cbn(sc, x.term); },
          [&](const tm::Let& x) {
            std::optional<Type> a = x.annot ? x.annot : synth(sc, x.bound);
            std::optional<VType> binder;
            if (a) binder = mk::U(cbn_ty(sc, *a));
            return mk::let_c(th(sc, x.bound), cbn(with(sc, a), x.body), binder, sp);
          },
          [&](const tm::Inj& x) { return mk::ret(mk::inj(x.tag, th(sc, x.payload)), sp); },
          [&](const tm::PmSum& x) {
            auto st = synth(sc, x.scrutinee);
            const ty::Sum* sum = st ? is<ty::Sum>(*st) : nullptr;
            std::vector<Comp> arms;
            for (std::size_t i = 0; i < x.arms.size(); ++i) {
              std::optional<Type> a;
              if (sum && i < sum->arms.size()) a = sum->arms[i];
              arms.push_back(shift(cbn(with(sc, a), x.arms[i]), 1, 1));
            }
            auto [outer, inner] = cbn_motives(sc, x.motive, st);
            return mk::to(cbn(sc, x.scrutinee), mk::pm_sum(mk::var(0), arms, inner, sp), cbn_binder(sc, st),
                          outer, sp);
          },
          [&](const tm::Tuple& x) {
            std::vector<Comp> arms;
            for (const auto& a : x.arms) arms.push_back(cbn(sc, a));
            return mk::tuple(arms, sp);
          },
          [&](const tm::Proj& x) { return mk::proj(x.tag, cbn(sc, x.of), sp); },
          [&](const tm::Lam& x) {
            return mk::lam(mk::U(cbn_ty(sc, x.domain)), cbn(with(sc, x.domain), x.body), sp);
          },
          [&](const tm::App& x) { return mk::app(th(sc, x.arg), cbn(sc, x.fun), sp); },
          [&](const tm::Unit&) { return mk::ret(mk::unit(sp), sp); },
          [&](const tm::PmUnit& x) {
            auto st = synth(sc, x.scrutinee);
            auto [outer, inner] = cbn_motives(sc, x.motive, st);
            return mk::to(cbn(sc, x.scrutinee),
                          mk::pm_unit(mk::var(0), shift(cbn(sc, x.body), 0, 1), inner, sp), cbn_binder(sc, st),
                          outer, sp);
          },
          [&](const tm::Pair& x) { return mk::ret(mk::pair(th(sc, x.first), th(sc, x.second)), sp); },
          [&](const tm::PmPair& x) {
            auto st = synth(sc, x.scrutinee);
            const ty::Sigma* sg = st ? is<ty::Sigma>(*st) : nullptr;
            std::optional<Type> a, b;
            if (sg) {
              a = sg->first;
              b = sg->second;
            }
            Comp body = shift(cbn(with(with(sc, a), b), x.body), 2, 1);
            auto [outer, inner] = cbn_motives(sc, x.motive, st);
            return mk::to(cbn(sc, x.scrutinee), mk::pm_pair(mk::var(0), body, inner, sp), cbn_binder(sc, st),
                          outer, sp);
          },
          [&](const tm::Refl& x) { return mk::ret(mk::refl(th(sc, x.of)), sp); },
          [&](const tm::PmId& x) {
            auto st = synth(sc, x.scrutinee);
            const ty::Id* id = st ? is<ty::Id>(*st) : nullptr;
            std::optional<Type> carrier;
            if (id) carrier = id->carrier;
            Comp body = shift(cbn(with(sc, carrier), x.body), 1, 1);
            std::optional<dcbpv::Motive> outer, inner;
            if (x.motive) {
              Scope ms = with(with(with(sc, carrier), carrier ? std::optional<Type>(src_shift(*carrier, 0, 1))
                                                             : std::nullopt),
                              std::nullopt);
              CType t_pm = cbn_ty(ms, x.motive->result);
              inner = dcbpv::Motive{
                  {}, shift(map_vars(t_pm, [](std::size_t j) { return j == 0 ? mk::tr(mk::var(0)) : mk::var(j); }),
                            3, 1)};
              if (id) {
                Value l = shift(th(sc, id->lhs), 0, 1);
                Value r = shift(th(sc, id->rhs), 0, 1);
                outer = dcbpv::Motive{{}, map_vars(t_pm, [&](std::size_t j) {
                                        if (j == 0) return mk::var(0);
                                        if (j == 1) return r;
                                        if (j == 2) return l;
                                        return mk::var(j - 2);
                                      })};
              }
            }
            return mk::to(cbn(sc, x.scrutinee), mk::pm_id(mk::var(0), body, inner, sp), cbn_binder(sc, st), outer,
                          sp);
          },
          [&](const tm::Print& x) { return mk::print(x.element, cbn(sc, x.body), sp); },
          [&](const tm::Choose& x) {
            std::vector<Comp> arms;
            for (const auto& a : x.arms) arms.push_back(cbn(sc, a));
            return mk::choose(arms, sp);
          },
          [&](const tm::Error& x) { return mk::error(x.name, sp); },
          [&](const tm::Write& x) { return mk::write(x.state, cbn(sc, x.body), sp); },
          [&](const tm::Read& x) {
            std::vector<comp::ReadArm> arms;
            for (const auto& [s, a] : x.arms) arms.push_back({s, cbn(sc, a)});
            return mk::read(arms, sp);
          },
          [&](const tm::Diverge&) { return mk::diverge(sp); },
          [&](const tm::Mu& x) { return mk::mu(cbn(with(sc, x.type), x.body), cbn_ty(sc, x.type), sp); },
      },
      t->node);
}

bool dependent(const Type& t);

bool dependent(const Term& t) {
  bool found = false;
  std::visit(overloaded{
                 [&](const tm::PmSum& x) {
                   found = x.motive.has_value() || dependent(x.scrutinee);
                   for (const auto& a : x.arms) found = found || dependent(a);
                 },
                 [&](const tm::PmUnit& x) {
                   found = x.motive.has_value() || dependent(x.scrutinee) || dependent(x.body);
                 },
                 [&](const tm::PmPair& x) {
                   found = x.motive.has_value() || dependent(x.scrutinee) || dependent(x.body);
                 },
                 [&](const tm::PmId& x) {
                   found = x.motive.has_value() || dependent(x.scrutinee) || dependent(x.body);
                 },
                 [&](const tm::Let& x) {
                   found = (x.annot && dependent(*x.annot)) || dependent(x.bound) || dependent(x.body);
                 },
                 [&](const tm::Inj& x) { found = dependent(x.payload); },
                 [&](const tm::Tuple& x) {
                   for (const auto& a : x.arms) found = found || dependent(a);
                 },
                 [&](const tm::Proj& x) { found = dependent(x.of); },
                 [&](const tm::Lam& x) { found = dependent(x.domain) || dependent(x.body); },
                 [&](const tm::App& x) { found = dependent(x.fun) || dependent(x.arg); },
                 [&](const tm::Pair& x) { found = dependent(x.first) || dependent(x.second); },
                 [&](const tm::Refl& x) { found = dependent(x.of); },
                 [&](const tm::Ann& x) { found = dependent(x.term) || dependent(x.type); },
                 [&](const tm::Print& x) { found = dependent(x.body); },
                 [&](const tm::Write& x) { found = dependent(x.body); },
                 [&](const tm::Choose& x) {
                   for (const auto& a : x.arms) found = found || dependent(a);
                 },
                 [&](const tm::Read& x) {
                   for (const auto& a : x.arms) found = found || dependent(a.second);
                 },
                 [&](const tm::Mu& x) { found = dependent(x.type) || dependent(x.body); },
                 [&](const auto&) {},
             },
             t->node);
  return found;
}

bool dependent(const Type& t) {
  return std::visit(overloaded{
                        [](const ty::Unit&) { return false; },
                        [](const ty::Sum& x) {
                          for (const auto& a : x.arms) {
                            if (dependent(a)) return true;
                          }
                          return false;
                        },
                        [](const ty::Prod& x) {
                          for (const auto& a : x.arms) {
                            if (dependent(a)) return true;
                          }
                          return false;
                        },
                        [](const ty::Pi& x) { return dependent(x.domain) || dependent(x.codomain); },
                        [](const ty::Sigma& x) { return dependent(x.first) || dependent(x.second); },
                        [](const ty::Id& x) {
                          return dependent(x.carrier) || dependent(x.lhs) || dependent(x.rhs);
                        },
                    },
                    t->node);
}

}  // namespace

std::string_view strategy_name(Strategy s) { return s == Strategy::CBV ? "cbv" : "cbn"; }

std::string_view translate_error_name(TranslateErrorKind k) {
  return k == TranslateErrorKind::CbvNeedsPlus ? "CbvNeedsPlus" : "DependentElimNeedsPlus";
}

VType cbv_translate_type(const src::Type& a, std::size_t depth) {
  return cbv_ty(Scope(depth), a);
}

Comp cbv_translate_term(const src::Term& m, const SrcScope& scope) { return cbv(plain_scope(scope), m); }

CType cbn_translate_type(const src::Type& b) { return cbn_ty({}, b); }

Comp cbn_translate_term(const src::Term& m) { return cbn({}, m); }

bool has_dependent_elim(const src::Term& m) { return dependent(m); }

ProgramFile translate_program(const SrcProgram& p, Strategy s, Variant v) {
  bool dep = dependent(p.main) || dependent(p.main_type);
  for (const auto& [x, a] : p.context) dep = dep || dependent(a);
  if (s == Strategy::CBV && v == Variant::Minus) {
    throw TranslateError(TranslateErrorKind::CbvNeedsPlus,
                         "the call-by-value translation sequences dependently and needs dCBPV+");
  }
  if (s == Strategy::CBN && v == Variant::Minus && dep) {
    throw TranslateError(TranslateErrorKind::DependentElimNeedsPlus,
                         "a dependent elimination translates to a dependent sequencing, which needs dCBPV+");
  }
  ProgramFile out;
  out.signature = p.signature;
  Scope sc;
  for (const auto& [x, a] : p.context) {
    VType t = s == Strategy::CBV ? cbv_ty(sc, a) : mk::U(cbn_ty(sc, a));
    out.context.push_back({x, t});
    sc.push_back({a, false});
  }
  if (s == Strategy::CBV) {
    out.main_type = mk::F(cbv_ty(sc, p.main_type));
    out.main = cbv(sc, p.main, p.main_type);
  } else {
    out.main_type = cbn_ty(sc, p.main_type);
    out.main = cbn(sc, p.main);
  }
  out.main_span = p.main->span;
  return out;
}

}  // namespace dcbpv
