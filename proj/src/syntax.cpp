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

#include "dcbpv/syntax.hpp"

#include <fmt/core.h>

#include "dcbpv/overloaded.hpp"

namespace dcbpv {

std::size_t stack_depth(const Stack& k) {
  std::size_t n = 0;
  for (const StackCell* c = k.get(); c != nullptr; c = c->rest.get()) ++n;
  return n;
}

namespace mk {
namespace {
template <typename Node, typename Alt>
std::shared_ptr<const Node> make(Alt alt, SourceSpan s) {
  return std::make_shared<const Node>(Node{std::move(alt), s});
}
}  // namespace

VType U(CType body, SourceSpan s) { return make<VTypeNode>(vt::U{std::move(body)}, s); }
VType unit_type(SourceSpan s) { return make<VTypeNode>(vt::Unit{}, s); }
VType sum(std::vector<VType> arms, SourceSpan s) {
  return make<VTypeNode>(vt::Sum{std::move(arms)}, s);
}
VType sigma(VType first, VType second, SourceSpan s) {
  return make<VTypeNode>(vt::Sigma{std::move(first), std::move(second)}, s);
}
VType id(VType carrier, Value lhs, Value rhs, SourceSpan s) {
  return make<VTypeNode>(vt::Id{std::move(carrier), std::move(lhs), std::move(rhs)}, s);
}

CType F(VType returns, SourceSpan s) { return make<CTypeNode>(ct::F{std::move(returns)}, s); }
CType prod(std::vector<CType> arms, SourceSpan s) {
  return make<CTypeNode>(ct::Prod{std::move(arms)}, s);
}
CType pi(VType domain, CType codomain, SourceSpan s) {
  return make<CTypeNode>(ct::Pi{std::move(domain), std::move(codomain)}, s);
}

Value var(std::size_t index, SourceSpan s) { return make<ValueNode>(val::Var{index}, s); }
Value thunk(Comp body, SourceSpan s) { return make<ValueNode>(val::Thunk{std::move(body)}, s); }
Value unit(SourceSpan s) { return make<ValueNode>(val::Unit{}, s); }
Value inj(std::size_t tag, Value payload, SourceSpan s) {
  return make<ValueNode>(val::Inj{tag, std::move(payload)}, s);
}
Value pair(Value first, Value second, SourceSpan s) {
  return make<ValueNode>(val::Pair{std::move(first), std::move(second)}, s);
}
Value refl(Value of, SourceSpan s) { return make<ValueNode>(val::Refl{std::move(of)}, s); }
Value let_v(Value bound, Value body, SourceSpan s) {
  return make<ValueNode>(val::Let{std::move(bound), std::move(body)}, s);
}
Value pm_unit_v(Value scrutinee, Value body, SourceSpan s) {
  return make<ValueNode>(val::PmUnit{std::move(scrutinee), std::move(body)}, s);
}
Value pm_sum_v(Value scrutinee, std::vector<Value> arms, SourceSpan s) {
  return make<ValueNode>(val::PmSum{std::move(scrutinee), std::move(arms)}, s);
}
Value pm_pair_v(Value scrutinee, Value body, SourceSpan s) {
  return make<ValueNode>(val::PmPair{std::move(scrutinee), std::move(body)}, s);
}
Value pm_id_v(Value scrutinee, Value body, SourceSpan s) {
  return make<ValueNode>(val::PmId{std::move(scrutinee), std::move(body)}, s);
}

Comp ret(Value v, SourceSpan s) { return make<CompNode>(comp::Return{std::move(v)}, s); }
Comp to(Comp head, Comp body, std::optional<VType> binder, std::optional<Motive> motive,
        SourceSpan s) {
  return make<CompNode>(
      comp::To{std::move(head), std::move(body), std::move(binder), std::move(motive)}, s);
}
Comp force(Value v, SourceSpan s) { return make<CompNode>(comp::Force{std::move(v)}, s); }
Comp tuple(std::vector<Comp> arms, SourceSpan s) {
  return make<CompNode>(comp::Tuple{std::move(arms)}, s);
}
Comp proj(std::size_t tag, Comp of, SourceSpan s) {
  return make<CompNode>(comp::Proj{tag, std::move(of)}, s);
}
Comp lam(VType domain, Comp body, SourceSpan s) {
  return make<CompNode>(comp::Lambda{std::move(domain), std::move(body)}, s);
}
Comp app(Value arg, Comp fun, SourceSpan s) {
  return make<CompNode>(comp::Apply{std::move(arg), std::move(fun)}, s);
}
Comp let_c(Value bound, Comp body, std::optional<VType> binder, SourceSpan s) {
  return make<CompNode>(comp::Let{std::move(bound), std::move(body), std::move(binder)}, s);
}
Comp pm_unit(Value scrutinee, Comp body, std::optional<Motive> motive, SourceSpan s) {
  return make<CompNode>(comp::PmUnit{std::move(scrutinee), std::move(body), std::move(motive)},
                        s);
}
Comp pm_sum(Value scrutinee, std::vector<Comp> arms, std::optional<Motive> motive,
            SourceSpan s) {
  return make<CompNode>(comp::PmSum{std::move(scrutinee), std::move(arms), std::move(motive)},
                        s);
}
Comp pm_pair(Value scrutinee, Comp body, std::optional<Motive> motive, SourceSpan s) {
  return make<CompNode>(comp::PmPair{std::move(scrutinee), std::move(body), std::move(motive)},
                        s);
}
Comp pm_id(Value scrutinee, Comp body, std::optional<Motive> motive, SourceSpan s) {
  return make<CompNode>(comp::PmId{std::move(scrutinee), std::move(body), std::move(motive)},
                        s);
}
Comp diverge(SourceSpan s) { return make<CompNode>(comp::Diverge{}, s); }
Comp mu(Comp body, std::optional<CType> type, SourceSpan s) {
  return make<CompNode>(comp::Mu{std::move(body), std::move(type)}, s);
}
Comp print(std::string element, Comp body, SourceSpan s) {
  return make<CompNode>(comp::Print{std::move(element), std::move(body)}, s);
}
Comp choose(std::vector<Comp> arms, SourceSpan s) {
  return make<CompNode>(comp::Choose{std::move(arms)}, s);
}
Comp error(std::string name, SourceSpan s) {
  return make<CompNode>(comp::Error{std::move(name)}, s);
}
Comp write(std::string state, Comp body, SourceSpan s) {
  return make<CompNode>(comp::Write{std::move(state), std::move(body)}, s);
}
Comp read(std::vector<comp::ReadArm> arms, SourceSpan s) {
  return make<CompNode>(comp::Read{std::move(arms)}, s);
}

Value tr(Value v) { return thunk(ret(std::move(v))); }
}  // namespace mk

// ---------------------------------------------------------------------------
// Variable maps

namespace {

struct Mapper {
  const VarMap& f;

  Value var_at(std::size_t index, std::size_t depth, SourceSpan span) const {
    if (index < depth) return mk::var(index, span);
    Value r = f(index - depth);
    if (depth == 0) return r;
    if (const auto* v = std::get_if<val::Var>(&r->node)) return mk::var(v->index + depth, span);
    return shift(r, 0, static_cast<long>(depth));
  }

  std::optional<VType> opt(const std::optional<VType>& t, std::size_t d) const {
    if (!t) return std::nullopt;
    return vtype(*t, d);
  }

  std::optional<Motive> motive(const std::optional<Motive>& m, std::size_t base,
                               std::size_t d) const {
    if (!m) return std::nullopt;
    return motive(*m, base, d);
  }

  Motive motive(const Motive& m, std::size_t base, std::size_t d) const {
    Motive out;
    for (std::size_t i = 0; i < m.extension.size(); ++i) {
      out.extension.push_back(vtype(m.extension[i], d + base + i));
    }
    out.result = ctype(m.result, d + base + m.extension.size());
    return out;
  }

  VType vtype(const VType& t, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const vt::U& x) { return mk::U(ctype(x.body, d), t->span); },
            [&](const vt::Unit&) { return t; },
            [&](const vt::Sum& x) {
              std::vector<VType> arms;
              for (const auto& a : x.arms) arms.push_back(vtype(a, d));
              return mk::sum(std::move(arms), t->span);
            },
            [&](const vt::Sigma& x) {
              return mk::sigma(vtype(x.first, d), vtype(x.second, d + 1), t->span);
            },
            [&](const vt::Id& x) {
              return mk::id(vtype(x.carrier, d), value(x.lhs, d), value(x.rhs, d), t->span);
            },
        },
        t->node);
  }

  CType ctype(const CType& t, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const ct::F& x) { return mk::F(vtype(x.returns, d), t->span); },
            [&](const ct::Prod& x) {
              std::vector<CType> arms;
              for (const auto& a : x.arms) arms.push_back(ctype(a, d));
              return mk::prod(std::move(arms), t->span);
            },
            [&](const ct::Pi& x) {
              return mk::pi(vtype(x.domain, d), ctype(x.codomain, d + 1), t->span);
            },
        },
        t->node);
  }

  Value value(const Value& v, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const val::Var& x) { return var_at(x.index, d, v->span); },
            [&](const val::Thunk& x) { return mk::thunk(comp(x.body, d), v->span); },
            [&](const val::Unit&) { return v; },
            [&](const val::Inj& x) { return mk::inj(x.tag, value(x.payload, d), v->span); },
            [&](const val::Pair& x) {
              return mk::pair(value(x.first, d), value(x.second, d), v->span);
            },
            [&](const val::Refl& x) { return mk::refl(value(x.of, d), v->span); },
            [&](const val::Let& x) {
              return mk::let_v(value(x.bound, d), value(x.body, d + 1), v->span);
            },
            [&](const val::PmUnit& x) {
              return mk::pm_unit_v(value(x.scrutinee, d), value(x.body, d), v->span);
            },
            [&](const val::PmSum& x) {
              std::vector<Value> arms;
              for (const auto& a : x.arms) arms.push_back(value(a, d + 1));
              return mk::pm_sum_v(value(x.scrutinee, d), std::move(arms), v->span);
            },
            [&](const val::PmPair& x) {
              return mk::pm_pair_v(value(x.scrutinee, d), value(x.body, d + 2), v->span);
            },
            [&](const val::PmId& x) {
              return mk::pm_id_v(value(x.scrutinee, d), value(x.body, d + 1), v->span);
            },
        },
        v->node);
  }

  Comp comp(const Comp& m, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const comp::Return& x) { return mk::ret(value(x.value, d), m->span); },
            [&](const comp::To& x) {
              return mk::to(comp(x.head, d), comp(x.body, d + 1), opt(x.binder, d),
                            motive(x.motive, 1, d), m->span);
            },
            [&](const comp::Force& x) { return mk::force(value(x.thunk, d), m->span); },
            [&](const comp::Tuple& x) {
              std::vector<Comp> arms;
              for (const auto& a : x.arms) arms.push_back(comp(a, d));
              return mk::tuple(std::move(arms), m->span);
            },
            [&](const comp::Proj& x) { return mk::proj(x.tag, comp(x.of, d), m->span); },
            [&](const comp::Lambda& x) {
              return mk::lam(vtype(x.domain, d), comp(x.body, d + 1), m->span);
            },
            [&](const comp::Apply& x) {
              return mk::app(value(x.arg, d), comp(x.fun, d), m->span);
            },
            [&](const comp::Let& x) {
              return mk::let_c(value(x.bound, d), comp(x.body, d + 1), opt(x.binder, d),
                               m->span);
            },
            [&](const comp::PmUnit& x) {
              return mk::pm_unit(value(x.scrutinee, d), comp(x.body, d),
                                 motive(x.motive, 1, d), m->span);
            },
            [&](const comp::PmSum& x) {
              std::vector<Comp> arms;
              for (const auto& a : x.arms) arms.push_back(comp(a, d + 1));
              return mk::pm_sum(value(x.scrutinee, d), std::move(arms),
                                motive(x.motive, 1, d), m->span);
            },
            [&](const comp::PmPair& x) {
              return mk::pm_pair(value(x.scrutinee, d), comp(x.body, d + 2),
                                 motive(x.motive, 1, d), m->span);
            },
            [&](const comp::PmId& x) {
              return mk::pm_id(value(x.scrutinee, d), comp(x.body, d + 1),
                               motive(x.motive, 3, d), m->span);
            },
            [&](const comp::Diverge&) { return m; },
            [&](const comp::Mu& x) {
              std::optional<CType> ty;
              if (x.type) ty = ctype(*x.type, d);
              return mk::mu(comp(x.body, d + 1), ty, m->span);
            },
            [&](const comp::Print& x) { return mk::print(x.element, comp(x.body, d), m->span); },
            [&](const comp::Choose& x) {
              std::vector<Comp> arms;
              for (const auto& a : x.arms) arms.push_back(comp(a, d));
              return mk::choose(std::move(arms), m->span);
            },
            [&](const comp::Error&) { return m; },
            [&](const comp::Write& x) { return mk::write(x.state, comp(x.body, d), m->span); },
            [&](const comp::Read& x) {
              std::vector<comp::ReadArm> arms;
              for (const auto& a : x.arms) arms.push_back({a.state, comp(a.body, d)});
              return mk::read(std::move(arms), m->span);
            },
        },
        m->node);
  }

  Stack stack(const Stack& k) const {
    if (!k) return k;
    Frame top = std::visit(
        overloaded{
            [&](const frame::Seq& x) -> Frame {
              return frame::Seq{comp(x.body, 1), opt(x.binder, 0), motive(x.motive, 1, 0)};
            },
            [&](const frame::Proj& x) -> Frame { return x; },
            [&](const frame::Arg& x) -> Frame { return frame::Arg{value(x.arg, 0)}; },
        },
        k->top);
    return push(std::move(top), stack(k->rest));
  }
};

// Free-variable enumeration, mirroring Mapper's binder structure.
struct FreeWalker {
  const std::function<void(std::size_t)>& f;

  void motive(const std::optional<Motive>& m, std::size_t base, std::size_t d) const {
    if (!m) return;
    for (std::size_t i = 0; i < m->extension.size(); ++i) vtype(m->extension[i], d + base + i);
    ctype(m->result, d + base + m->extension.size());
  }

  void vtype(const VType& t, std::size_t d) const {
    std::visit(overloaded{
                   [&](const vt::U& x) { ctype(x.body, d); },
                   [&](const vt::Unit&) {},
                   [&](const vt::Sum& x) {
                     for (const auto& a : x.arms) vtype(a, d);
                   },
                   [&](const vt::Sigma& x) {
                     vtype(x.first, d);
                     vtype(x.second, d + 1);
                   },
                   [&](const vt::Id& x) {
                     vtype(x.carrier, d);
                     value(x.lhs, d);
                     value(x.rhs, d);
                   },
               },
               t->node);
  }

  void ctype(const CType& t, std::size_t d) const {
    std::visit(overloaded{
                   [&](const ct::F& x) { vtype(x.returns, d); },
                   [&](const ct::Prod& x) {
                     for (const auto& a : x.arms) ctype(a, d);
                   },
                   [&](const ct::Pi& x) {
                     vtype(x.domain, d);
                     ctype(x.codomain, d + 1);
                   },
               },
               t->node);
  }

  void value(const Value& v, std::size_t d) const {
    std::visit(overloaded{
                   [&](const val::Var& x) {
                     if (x.index >= d) f(x.index - d);
                   },
                   [&](const val::Thunk& x) { comp(x.body, d); },
                   [&](const val::Unit&) {},
                   [&](const val::Inj& x) { value(x.payload, d); },
                   [&](const val::Pair& x) {
                     value(x.first, d);
                     value(x.second, d);
                   },
                   [&](const val::Refl& x) { value(x.of, d); },
                   [&](const val::Let& x) {
                     value(x.bound, d);
                     value(x.body, d + 1);
                   },
                   [&](const val::PmUnit& x) {
                     value(x.scrutinee, d);
                     value(x.body, d);
                   },
                   [&](const val::PmSum& x) {
                     value(x.scrutinee, d);
                     for (const auto& a : x.arms) value(a, d + 1);
                   },
                   [&](const val::PmPair& x) {
                     value(x.scrutinee, d);
                     value(x.body, d + 2);
                   },
                   [&](const val::PmId& x) {
                     value(x.scrutinee, d);
                     value(x.body, d + 1);
                   },
               },
               v->node);
  }

  void comp(const Comp& m, std::size_t d) const {
    std::visit(overloaded{
                   [&](const comp::Return& x) { value(x.value, d); },
                   [&](const comp::To& x) {
                     comp(x.head, d);
                     comp(x.body, d + 1);
                     if (x.binder) vtype(*x.binder, d);
                     motive(x.motive, 1, d);
                   },
                   [&](const comp::Force& x) { value(x.thunk, d); },
                   [&](const comp::Tuple& x) {
                     for (const auto& a : x.arms) comp(a, d);
                   },
                   [&](const comp::Proj& x) { comp(x.of, d); },
                   [&](const comp::Lambda& x) {
                     vtype(x.domain, d);
                     comp(x.body, d + 1);
                   },
                   [&](const comp::Apply& x) {
                     value(x.arg, d);
                     comp(x.fun, d);
                   },
                   [&](const comp::Let& x) {
                     value(x.bound, d);
                     comp(x.body, d + 1);
                     if (x.binder) vtype(*x.binder, d);
                   },
                   [&](const comp::PmUnit& x) {
                     value(x.scrutinee, d);
                     comp(x.body, d);
                     motive(x.motive, 1, d);
                   },
                   [&](const comp::PmSum& x) {
                     value(x.scrutinee, d);
                     for (const auto& a : x.arms) comp(a, d + 1);
                     motive(x.motive, 1, d);
                   },
                   [&](const comp::PmPair& x) {
                     value(x.scrutinee, d);
                     comp(x.body, d + 2);
                     motive(x.motive, 1, d);
                   },
                   [&](const comp::PmId& x) {
                     value(x.scrutinee, d);
                     comp(x.body, d + 1);
                     motive(x.motive, 3, d);
                   },
                   [&](const comp::Diverge&) {},
                   [&](const comp::Mu& x) {
                     comp(x.body, d + 1);
                     if (x.type) ctype(*x.type, d);
                   },
                   [&](const comp::Print& x) { comp(x.body, d); },
                   [&](const comp::Choose& x) {
                     for (const auto& a : x.arms) comp(a, d);
                   },
                   [&](const comp::Error&) {},
                   [&](const comp::Write& x) { comp(x.body, d); },
                   [&](const comp::Read& x) {
                     for (const auto& a : x.arms) comp(a.body, d);
                   },
               },
               m->node);
  }
};

}  // namespace

VType map_vars(const VType& t, const VarMap& f) { return Mapper{f}.vtype(t, 0); }
CType map_vars(const CType& t, const VarMap& f) { return Mapper{f}.ctype(t, 0); }
Value map_vars(const Value& t, const VarMap& f) { return Mapper{f}.value(t, 0); }
Comp map_vars(const Comp& t, const VarMap& f) { return Mapper{f}.comp(t, 0); }
Motive map_vars(const Motive& m, std::size_t binders, const VarMap& f) {
  return Mapper{f}.motive(m, binders, 0);
}
Stack map_vars(const Stack& k, const VarMap& f) { return Mapper{f}.stack(k); }

void for_each_free(const VType& t, const std::function<void(std::size_t)>& f) {
  FreeWalker{f}.vtype(t, 0);
}
void for_each_free(const CType& t, const std::function<void(std::size_t)>& f) {
  FreeWalker{f}.ctype(t, 0);
}
void for_each_free(const Value& t, const std::function<void(std::size_t)>& f) {
  FreeWalker{f}.value(t, 0);
}
void for_each_free(const Comp& t, const std::function<void(std::size_t)>& f) {
  FreeWalker{f}.comp(t, 0);
}

template <typename T>
T shift(const T& t, std::size_t cutoff, long delta) {
  if (delta == 0) return t;
  return map_vars(t, VarMap([&](std::size_t i) -> Value {
                    if (i < cutoff) return mk::var(i);
                    long n = static_cast<long>(i) + delta;
                    if (n < 0) throw IndexUnderflow(fmt::format("index {} shifted by {}", i, delta));
                    return mk::var(static_cast<std::size_t>(n));
                  }));
}

template <typename T>
T substitute(const T& t, const Value& v) {
  return map_vars(t, VarMap([&](std::size_t i) { return i == 0 ? v : mk::var(i - 1); }));
}

template <typename T>
T substitute_many(const T& t, const std::vector<Value>& vs) {
  const std::size_t n = vs.size();
  return map_vars(t, VarMap([&](std::size_t i) { return i < n ? vs[i] : mk::var(i - n); }));
}

template <typename T>
T substitute_at(const T& t, std::size_t at, const Value& v) {
  return map_vars(t, VarMap([&](std::size_t i) -> Value {
                    if (i < at) return mk::var(i);
                    if (i == at) return shift(v, static_cast<long>(at));
                    return mk::var(i - 1);
                  }));
}

#define DCBPV_INSTANTIATE(T)                                              \
  template T shift<T>(const T&, std::size_t, long);                      \
  template T substitute<T>(const T&, const Value&);                       \
  template T substitute_many<T>(const T&, const std::vector<Value>&);     \
  template T substitute_at<T>(const T&, std::size_t, const Value&);
DCBPV_INSTANTIATE(VType)
DCBPV_INSTANTIATE(CType)
DCBPV_INSTANTIATE(Value)
DCBPV_INSTANTIATE(Comp)
#undef DCBPV_INSTANTIATE

// ---------------------------------------------------------------------------
// Alpha equality

namespace {

template <typename T, typename Fn>
bool all_pairs(const std::vector<T>& a, const std::vector<T>& b, Fn eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

bool opt_eq(const std::optional<VType>& a, const std::optional<VType>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || alpha_eq(*a, *b);
}

bool opt_eq(const std::optional<CType>& a, const std::optional<CType>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || alpha_eq(*a, *b);
}

}  // namespace

bool alpha_eq(const std::optional<Motive>& a, const std::optional<Motive>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return all_pairs(a->extension, b->extension,
                   [](const VType& x, const VType& y) { return alpha_eq(x, y); }) &&
         alpha_eq(a->result, b->result);
}

bool alpha_eq(const VType& a, const VType& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const vt::U& x) { return alpha_eq(x.body, std::get<vt::U>(b->node).body); },
          [&](const vt::Unit&) { return true; },
          [&](const vt::Sum& x) {
            return all_pairs(x.arms, std::get<vt::Sum>(b->node).arms,
                             [](const VType& p, const VType& q) { return alpha_eq(p, q); });
          },
          [&](const vt::Sigma& x) {
            const auto& y = std::get<vt::Sigma>(b->node);
            return alpha_eq(x.first, y.first) && alpha_eq(x.second, y.second);
          },
          [&](const vt::Id& x) {
            const auto& y = std::get<vt::Id>(b->node);
            return alpha_eq(x.carrier, y.carrier) && alpha_eq(x.lhs, y.lhs) &&
                   alpha_eq(x.rhs, y.rhs);
          },
      },
      a->node);
}

bool alpha_eq(const CType& a, const CType& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const ct::F& x) { return alpha_eq(x.returns, std::get<ct::F>(b->node).returns); },
          [&](const ct::Prod& x) {
            return all_pairs(x.arms, std::get<ct::Prod>(b->node).arms,
                             [](const CType& p, const CType& q) { return alpha_eq(p, q); });
          },
          [&](const ct::Pi& x) {
            const auto& y = std::get<ct::Pi>(b->node);
            return alpha_eq(x.domain, y.domain) && alpha_eq(x.codomain, y.codomain);
          },
      },
      a->node);
}

bool alpha_eq(const Value& a, const Value& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  auto veq = [](const Value& p, const Value& q) { return alpha_eq(p, q); };
  return std::visit(
      overloaded{
          [&](const val::Var& x) { return x.index == std::get<val::Var>(b->node).index; },
          [&](const val::Thunk& x) { return alpha_eq(x.body, std::get<val::Thunk>(b->node).body); },
          [&](const val::Unit&) { return true; },
          [&](const val::Inj& x) {
            const auto& y = std::get<val::Inj>(b->node);
            return x.tag == y.tag && alpha_eq(x.payload, y.payload);
          },
          [&](const val::Pair& x) {
            const auto& y = std::get<val::Pair>(b->node);
            return alpha_eq(x.first, y.first) && alpha_eq(x.second, y.second);
          },
          [&](const val::Refl& x) { return alpha_eq(x.of, std::get<val::Refl>(b->node).of); },
          [&](const val::Let& x) {
            const auto& y = std::get<val::Let>(b->node);
            return alpha_eq(x.bound, y.bound) && alpha_eq(x.body, y.body);
          },
          [&](const val::PmUnit& x) {
            const auto& y = std::get<val::PmUnit>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) && alpha_eq(x.body, y.body);
          },
          [&](const val::PmSum& x) {
            const auto& y = std::get<val::PmSum>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) && all_pairs(x.arms, y.arms, veq);
          },
          [&](const val::PmPair& x) {
            const auto& y = std::get<val::PmPair>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) && alpha_eq(x.body, y.body);
          },
          [&](const val::PmId& x) {
            const auto& y = std::get<val::PmId>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) && alpha_eq(x.body, y.body);
          },
      },
      a->node);
}

bool alpha_eq(const Comp& a, const Comp& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  auto ceq = [](const Comp& p, const Comp& q) { return alpha_eq(p, q); };
  return std::visit(
      overloaded{
          [&](const comp::Return& x) {
            return alpha_eq(x.value, std::get<comp::Return>(b->node).value);
          },
          [&](const comp::To& x) {
            const auto& y = std::get<comp::To>(b->node);
            return alpha_eq(x.head, y.head) && alpha_eq(x.body, y.body) &&
                   opt_eq(x.binder, y.binder) && alpha_eq(x.motive, y.motive);
          },
          [&](const comp::Force& x) {
            return alpha_eq(x.thunk, std::get<comp::Force>(b->node).thunk);
          },
          [&](const comp::Tuple& x) {
            return all_pairs(x.arms, std::get<comp::Tuple>(b->node).arms, ceq);
          },
          [&](const comp::Proj& x) {
            const auto& y = std::get<comp::Proj>(b->node);
            return x.tag == y.tag && alpha_eq(x.of, y.of);
          },
          [&](const comp::Lambda& x) {
            const auto& y = std::get<comp::Lambda>(b->node);
            return alpha_eq(x.domain, y.domain) && alpha_eq(x.body, y.body);
          },
          [&](const comp::Apply& x) {
            const auto& y = std::get<comp::Apply>(b->node);
            return alpha_eq(x.arg, y.arg) && alpha_eq(x.fun, y.fun);
          },
          [&](const comp::Let& x) {
            const auto& y = std::get<comp::Let>(b->node);
            return alpha_eq(x.bound, y.bound) && alpha_eq(x.body, y.body) &&
                   opt_eq(x.binder, y.binder);
          },
          [&](const comp::PmUnit& x) {
            const auto& y = std::get<comp::PmUnit>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) && alpha_eq(x.body, y.body) &&
                   alpha_eq(x.motive, y.motive);
          },
          [&](const comp::PmSum& x) {
            const auto& y = std::get<comp::PmSum>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) && all_pairs(x.arms, y.arms, ceq) &&
                   alpha_eq(x.motive, y.motive);
          },
          [&](const comp::PmPair& x) {
            const auto& y = std::get<comp::PmPair>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) && alpha_eq(x.body, y.body) &&
                   alpha_eq(x.motive, y.motive);
          },
          [&](const comp::PmId& x) {
            const auto& y = std::get<comp::PmId>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) && alpha_eq(x.body, y.body) &&
                   alpha_eq(x.motive, y.motive);
          },
          [&](const comp::Diverge&) { return true; },
          [&](const comp::Mu& x) {
            const auto& y = std::get<comp::Mu>(b->node);
            return alpha_eq(x.body, y.body) && opt_eq(x.type, y.type);
          },
          [&](const comp::Print& x) {
            const auto& y = std::get<comp::Print>(b->node);
            return x.element == y.element && alpha_eq(x.body, y.body);
          },
          [&](const comp::Choose& x) {
            return all_pairs(x.arms, std::get<comp::Choose>(b->node).arms, ceq);
          },
          [&](const comp::Error& x) { return x.name == std::get<comp::Error>(b->node).name; },
          [&](const comp::Write& x) {
            const auto& y = std::get<comp::Write>(b->node);
            return x.state == y.state && alpha_eq(x.body, y.body);
          },
          [&](const comp::Read& x) {
            return all_pairs(x.arms, std::get<comp::Read>(b->node).arms,
                             [](const comp::ReadArm& p, const comp::ReadArm& q) {
                               return p.state == q.state && alpha_eq(p.body, q.body);
                             });
          },
      },
      a->node);
}

bool alpha_eq(const Stack& a, const Stack& b) {
  const StackCell* p = a.get();
  const StackCell* q = b.get();
  for (; p != nullptr && q != nullptr; p = p->rest.get(), q = q->rest.get()) {
    if (p->top.index() != q->top.index()) return false;
    bool same = std::visit(
        overloaded{
            [&](const frame::Seq& x) {
              const auto& y = std::get<frame::Seq>(q->top);
              return alpha_eq(x.body, y.body) && opt_eq(x.binder, y.binder) &&
                     alpha_eq(x.motive, y.motive);
            },
            [&](const frame::Proj& x) { return x.tag == std::get<frame::Proj>(q->top).tag; },
            [&](const frame::Arg& x) { return alpha_eq(x.arg, std::get<frame::Arg>(q->top).arg); },
        },
        p->top);
    if (!same) return false;
  }
  return p == nullptr && q == nullptr;
}

// ---------------------------------------------------------------------------
// Complex values

namespace {

bool is_complex_node(const Value& v) {
  return std::holds_alternative<val::Let>(v->node) ||
         std::holds_alternative<val::PmUnit>(v->node) ||
         std::holds_alternative<val::PmSum>(v->node) ||
         std::holds_alternative<val::PmPair>(v->node) ||
         std::holds_alternative<val::PmId>(v->node);
}

}  // namespace

bool is_simple(const Value& v) {
  if (is_complex_node(v)) return false;
  return std::visit(overloaded{
                        [](const val::Thunk& x) { return complex_value_free(x.body); },
                        [](const val::Inj& x) { return is_simple(x.payload); },
                        [](const val::Pair& x) { return is_simple(x.first) && is_simple(x.second); },
                        [](const val::Refl& x) { return is_simple(x.of); },
                        [](const auto&) { return true; },
                    },
                    v->node);
}

bool complex_value_free(const Comp& m) {
  auto all = [](const std::vector<Comp>& ms) {
    for (const auto& x : ms) {
      if (!complex_value_free(x)) return false;
    }
    return true;
  };
  return std::visit(
      overloaded{
          [](const comp::Return& x) { return is_simple(x.value); },
          [](const comp::To& x) { return complex_value_free(x.head) && complex_value_free(x.body); },
          [](const comp::Force& x) { return is_simple(x.thunk); },
          [&](const comp::Tuple& x) { return all(x.arms); },
          [](const comp::Proj& x) { return complex_value_free(x.of); },
          [](const comp::Lambda& x) { return complex_value_free(x.body); },
          [](const comp::Apply& x) { return is_simple(x.arg) && complex_value_free(x.fun); },
          [](const comp::Let& x) { return is_simple(x.bound) && complex_value_free(x.body); },
          [](const comp::PmUnit& x) {
            return is_simple(x.scrutinee) && complex_value_free(x.body);
          },
          [&](const comp::PmSum& x) { return is_simple(x.scrutinee) && all(x.arms); },
          [](const comp::PmPair& x) {
            return is_simple(x.scrutinee) && complex_value_free(x.body);
          },
          [](const comp::PmId& x) {
            return is_simple(x.scrutinee) && complex_value_free(x.body);
          },
          [](const comp::Diverge&) { return true; },
          [](const comp::Mu& x) { return complex_value_free(x.body); },
          [](const comp::Print& x) { return complex_value_free(x.body); },
          [&](const comp::Choose& x) { return all(x.arms); },
          [](const comp::Error&) { return true; },
          [](const comp::Write& x) { return complex_value_free(x.body); },
          [](const comp::Read& x) {
            for (const auto& a : x.arms) {
              if (!complex_value_free(a.body)) return false;
            }
            return true;
          },
      },
      m->node);
}

// ---------------------------------------------------------------------------
// Effects and sizes

namespace {

struct EffectScan {
  EffectUse use;

  void value(const Value& v) {
    std::visit(overloaded{
                   [&](const val::Thunk& x) { comp(x.body); },
                   [&](const val::Inj& x) { value(x.payload); },
                   [&](const val::Pair& x) {
                     value(x.first);
                     value(x.second);
                   },
                   [&](const val::Refl& x) { value(x.of); },
                   [&](const val::Let& x) {
                     value(x.bound);
                     value(x.body);
                   },
                   [&](const val::PmUnit& x) {
                     value(x.scrutinee);
                     value(x.body);
                   },
                   [&](const val::PmSum& x) {
                     value(x.scrutinee);
                     for (const auto& a : x.arms) value(a);
                   },
                   [&](const val::PmPair& x) {
                     value(x.scrutinee);
                     value(x.body);
                   },
                   [&](const val::PmId& x) {
                     value(x.scrutinee);
                     value(x.body);
                   },
                   [&](const auto&) {},
               },
               v->node);
  }

  void comp(const Comp& m) {
    std::visit(overloaded{
                   [&](const comp::Return& x) { value(x.value); },
                   [&](const comp::To& x) {
                     comp(x.head);
                     comp(x.body);
                   },
                   [&](const comp::Force& x) { value(x.thunk); },
                   [&](const comp::Tuple& x) {
                     for (const auto& a : x.arms) comp(a);
                   },
                   [&](const comp::Proj& x) { comp(x.of); },
                   [&](const comp::Lambda& x) { comp(x.body); },
                   [&](const comp::Apply& x) {
                     value(x.arg);
                     comp(x.fun);
                   },
                   [&](const comp::Let& x) {
                     value(x.bound);
                     comp(x.body);
                   },
                   [&](const comp::PmUnit& x) {
                     value(x.scrutinee);
                     comp(x.body);
                   },
                   [&](const comp::PmSum& x) {
                     value(x.scrutinee);
                     for (const auto& a : x.arms) comp(a);
                   },
                   [&](const comp::PmPair& x) {
                     value(x.scrutinee);
                     comp(x.body);
                   },
                   [&](const comp::PmId& x) {
                     value(x.scrutinee);
                     comp(x.body);
                   },
                   [&](const comp::Diverge&) { use.diverge = true; },
                   [&](const comp::Mu& x) {
                     use.rec = true;
                     comp(x.body);
                   },
                   [&](const comp::Print& x) {
                     use.print = true;
                     comp(x.body);
                   },
                   [&](const comp::Choose& x) {
                     use.choose = true;
                     for (const auto& a : x.arms) comp(a);
                   },
                   [&](const comp::Error&) { use.error = true; },
                   [&](const comp::Write& x) {
                     use.state = true;
                     comp(x.body);
                   },
                   [&](const comp::Read& x) {
                     use.state = true;
                     for (const auto& a : x.arms) comp(a.body);
                   },
               },
               m->node);
  }
};

struct Sizer {
  std::size_t n = 0;
  void value(const Value& v) {
    ++n;
    std::visit(overloaded{
                   [&](const val::Thunk& x) { comp(x.body); },
                   [&](const val::Inj& x) { value(x.payload); },
                   [&](const val::Pair& x) {
                     value(x.first);
                     value(x.second);
                   },
                   [&](const val::Refl& x) { value(x.of); },
                   [&](const val::Let& x) {
                     value(x.bound);
                     value(x.body);
                   },
                   [&](const val::PmUnit& x) {
                     value(x.scrutinee);
                     value(x.body);
                   },
                   [&](const val::PmSum& x) {
                     value(x.scrutinee);
                     for (const auto& a : x.arms) value(a);
                   },
                   [&](const val::PmPair& x) {
                     value(x.scrutinee);
                     value(x.body);
                   },
                   [&](const val::PmId& x) {
                     value(x.scrutinee);
                     value(x.body);
                   },
                   [&](const auto&) {},
               },
               v->node);
  }
  void comp(const Comp& m) {
    ++n;
    std::visit(overloaded{
                   [&](const comp::Return& x) { value(x.value); },
                   [&](const comp::To& x) {
                     comp(x.head);
                     comp(x.body);
                   },
                   [&](const comp::Force& x) { value(x.thunk); },
                   [&](const comp::Tuple& x) {
                     for (const auto& a : x.arms) comp(a);
                   },
                   [&](const comp::Proj& x) { comp(x.of); },
                   [&](const comp::Lambda& x) { comp(x.body); },
                   [&](const comp::Apply& x) {
                     value(x.arg);
                     comp(x.fun);
                   },
                   [&](const comp::Let& x) {
                     value(x.bound);
                     comp(x.body);
                   },
                   [&](const comp::PmUnit& x) {
                     value(x.scrutinee);
                     comp(x.body);
                   },
                   [&](const comp::PmSum& x) {
                     value(x.scrutinee);
                     for (const auto& a : x.arms) comp(a);
                   },
                   [&](const comp::PmPair& x) {
                     value(x.scrutinee);
                     comp(x.body);
                   },
                   [&](const comp::PmId& x) {
                     value(x.scrutinee);
                     comp(x.body);
                   },
                   [&](const comp::Mu& x) { comp(x.body); },
                   [&](const comp::Print& x) { comp(x.body); },
                   [&](const comp::Choose& x) {
                     for (const auto& a : x.arms) comp(a);
                   },
                   [&](const comp::Write& x) { comp(x.body); },
                   [&](const comp::Read& x) {
                     for (const auto& a : x.arms) comp(a.body);
                   },
                   [&](const auto&) {},
               },
               m->node);
  }
};

}  // namespace

EffectUse effects_used(const Comp& m) {
  EffectScan s;
  s.comp(m);
  return s.use;
}

EffectUse effects_used(const Value& v) {
  EffectScan s;
  s.value(v);
  return s.use;
}

std::size_t term_size(const Comp& m) {
  Sizer s;
  s.comp(m);
  return s.n;
}

std::size_t term_size(const Value& v) {
  Sizer s;
  s.value(v);
  return s.n;
}

}  // namespace dcbpv
