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

#include <stdexcept>

#include "dcbpv/overloaded.hpp"
#include "dcbpv/syntax.hpp"

namespace dcbpv {

namespace {

// Motive children: extension types then the result. `base` is the number of
// binders introduced before the telescope (1 for z, 3 for Id).
void motive_children(const std::optional<Motive>& m, std::size_t base, std::vector<Child>& out) {
  if (!m) return;
  for (std::size_t i = 0; i < m->extension.size(); ++i) out.push_back({m->extension[i], base + i});
  out.push_back({m->result, base + m->extension.size()});
}

class Reader {
 public:
  explicit Reader(const std::vector<Term>& kids) : kids_(kids) {}
  template <typename T>
  T take() {
    if (pos_ >= kids_.size()) throw std::logic_error("rebuild: too few children");
    return std::get<T>(kids_[pos_++]);
  }
  std::optional<VType> opt_vtype(const std::optional<VType>& orig) {
    if (!orig) return std::nullopt;
    return take<VType>();
  }
  std::optional<CType> opt_ctype(const std::optional<CType>& orig) {
    if (!orig) return std::nullopt;
    return take<CType>();
  }
  std::optional<Motive> motive(const std::optional<Motive>& orig) {
    if (!orig) return std::nullopt;
    Motive m;
    for (std::size_t i = 0; i < orig->extension.size(); ++i) m.extension.push_back(take<VType>());
    m.result = take<CType>();
    return m;
  }
  void done() const {
    if (pos_ != kids_.size()) throw std::logic_error("rebuild: too many children");
  }

 private:
  const std::vector<Term>& kids_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Child> children(const Term& t) {
  std::vector<Child> out;
  std::visit(
      overloaded{
          [&](const VType& a) {
            std::visit(overloaded{
                           [&](const vt::U& x) { out.push_back({x.body, 0}); },
                           [&](const vt::Unit&) {},
                           [&](const vt::Sum& x) {
                             for (const auto& arm : x.arms) out.push_back({arm, 0});
                           },
                           [&](const vt::Sigma& x) {
                             out.push_back({x.first, 0});
                             out.push_back({x.second, 1});
                           },
                           [&](const vt::Id& x) {
                             out.push_back({x.carrier, 0});
                             out.push_back({x.lhs, 0});
                             out.push_back({x.rhs, 0});
                           },
                       },
                       a->node);
          },
          [&](const CType& b) {
            std::visit(overloaded{
                           [&](const ct::F& x) { out.push_back({x.returns, 0}); },
                           [&](const ct::Prod& x) {
                             for (const auto& arm : x.arms) out.push_back({arm, 0});
                           },
                           [&](const ct::Pi& x) {
                             out.push_back({x.domain, 0});
                             out.push_back({x.codomain, 1});
                           },
                       },
                       b->node);
          },
          [&](const Value& v) {
            std::visit(overloaded{
                           [&](const val::Var&) {},
                           [&](const val::Thunk& x) { out.push_back({x.body, 0}); },
                           [&](const val::Unit&) {},
                           [&](const val::Inj& x) { out.push_back({x.payload, 0}); },
                           [&](const val::Pair& x) {
                             out.push_back({x.first, 0});
                             out.push_back({x.second, 0});
                           },
                           [&](const val::Refl& x) { out.push_back({x.of, 0}); },
                           [&](const val::Let& x) {
                             out.push_back({x.bound, 0});
                             out.push_back({x.body, 1});
                           },
                           [&](const val::PmUnit& x) {
                             out.push_back({x.scrutinee, 0});
                             out.push_back({x.body, 0});
                           },
                           [&](const val::PmSum& x) {
                             out.push_back({x.scrutinee, 0});
                             for (const auto& arm : x.arms) out.push_back({arm, 1});
                           },
                           [&](const val::PmPair& x) {
                             out.push_back({x.scrutinee, 0});
                             out.push_back({x.body, 2});
                           },
                           [&](const val::PmId& x) {
                             out.push_back({x.scrutinee, 0});
                             out.push_back({x.body, 1});
                           },
                       },
                       v->node);
          },
          [&](const Comp& m) {
            std::visit(
                overloaded{
                    [&](const comp::Return& x) { out.push_back({x.value, 0}); },
                    [&](const comp::To& x) {
                      out.push_back({x.head, 0});
                      out.push_back({x.body, 1});
                      if (x.binder) out.push_back({*x.binder, 0});
                      motive_children(x.motive, 1, out);
                    },
                    [&](const comp::Force& x) { out.push_back({x.thunk, 0}); },
                    [&](const comp::Tuple& x) {
                      for (const auto& arm : x.arms) out.push_back({arm, 0});
                    },
                    [&](const comp::Proj& x) { out.push_back({x.of, 0}); },
                    [&](const comp::Lambda& x) {
                      out.push_back({x.domain, 0});
                      out.push_back({x.body, 1});
                    },
                    [&](const comp::Apply& x) {
                      out.push_back({x.arg, 0});
                      out.push_back({x.fun, 0});
                    },
                    [&](const comp::Let& x) {
                      out.push_back({x.bound, 0});
                      out.push_back({x.body, 1});
                      if (x.binder) out.push_back({*x.binder, 0});
                    },
                    [&](const comp::PmUnit& x) {
                      out.push_back({x.scrutinee, 0});
                      out.push_back({x.body, 0});
                      motive_children(x.motive, 1, out);
                    },
                    [&](const comp::PmSum& x) {
                      out.push_back({x.scrutinee, 0});
                      for (const auto& arm : x.arms) out.push_back({arm, 1});
                      motive_children(x.motive, 1, out);
                    },
                    [&](const comp::PmPair& x) {
                      out.push_back({x.scrutinee, 0});
                      out.push_back({x.body, 2});
                      motive_children(x.motive, 1, out);
                    },
                    [&](const comp::PmId& x) {
                      out.push_back({x.scrutinee, 0});
                      out.push_back({x.body, 1});
                      motive_children(x.motive, 3, out);
                    },
                    [&](const comp::Diverge&) {},
                    [&](const comp::Mu& x) {
                      out.push_back({x.body, 1});
                      if (x.type) out.push_back({*x.type, 0});
                    },
                    [&](const comp::Print& x) { out.push_back({x.body, 0}); },
                    [&](const comp::Choose& x) {
                      for (const auto& arm : x.arms) out.push_back({arm, 0});
                    },
                    [&](const comp::Error&) {},
                    [&](const comp::Write& x) { out.push_back({x.body, 0}); },
                    [&](const comp::Read& x) {
                      for (const auto& arm : x.arms) out.push_back({arm.body, 0});
                    },
                },
                m->node);
          },
      },
      t);
  return out;
}

Term rebuild(const Term& t, const std::vector<Term>& kids) {
  Reader r(kids);
  Term out = std::visit(
      overloaded{
          [&](const VType& a) -> Term {
            const SourceSpan& s = a->span;
            return std::visit(
                overloaded{
                    [&](const vt::U&) { return mk::U(r.take<CType>(), s); },
                    [&](const vt::Unit&) { return mk::unit_type(s); },
                    [&](const vt::Sum& x) {
                      std::vector<VType> arms;
                      for (std::size_t i = 0; i < x.arms.size(); ++i) arms.push_back(r.take<VType>());
                      return mk::sum(std::move(arms), s);
                    },
                    [&](const vt::Sigma&) {
                      VType f = r.take<VType>();
                      return mk::sigma(f, r.take<VType>(), s);
                    },
                    [&](const vt::Id&) {
                      VType c = r.take<VType>();
                      Value l = r.take<Value>();
                      return mk::id(c, l, r.take<Value>(), s);
                    },
                },
                a->node);
          },
          [&](const CType& b) -> Term {
            const SourceSpan& s = b->span;
            return std::visit(
                overloaded{
                    [&](const ct::F&) { return mk::F(r.take<VType>(), s); },
                    [&](const ct::Prod& x) {
                      std::vector<CType> arms;
                      for (std::size_t i = 0; i < x.arms.size(); ++i) arms.push_back(r.take<CType>());
                      return mk::prod(std::move(arms), s);
                    },
                    [&](const ct::Pi&) {
                      VType d = r.take<VType>();
                      return mk::pi(d, r.take<CType>(), s);
                    },
                },
                b->node);
          },
          [&](const Value& v) -> Term {
            const SourceSpan& s = v->span;
            return std::visit(
                overloaded{
                    [&](const val::Var& x) { return mk::var(x.index, s); },
                    [&](const val::Thunk&) { return mk::thunk(r.take<Comp>(), s); },
                    [&](const val::Unit&) { return mk::unit(s); },
                    [&](const val::Inj& x) { return mk::inj(x.tag, r.take<Value>(), s); },
                    [&](const val::Pair&) {
                      Value f = r.take<Value>();
                      return mk::pair(f, r.take<Value>(), s);
                    },
                    [&](const val::Refl&) { return mk::refl(r.take<Value>(), s); },
                    [&](const val::Let&) {
                      Value b = r.take<Value>();
                      return mk::let_v(b, r.take<Value>(), s);
                    },
                    [&](const val::PmUnit&) {
                      Value sc = r.take<Value>();
                      return mk::pm_unit_v(sc, r.take<Value>(), s);
                    },
                    [&](const val::PmSum& x) {
                      Value sc = r.take<Value>();
                      std::vector<Value> arms;
                      for (std::size_t i = 0; i < x.arms.size(); ++i) arms.push_back(r.take<Value>());
                      return mk::pm_sum_v(sc, std::move(arms), s);
                    },
                    [&](const val::PmPair&) {
                      Value sc = r.take<Value>();
                      return mk::pm_pair_v(sc, r.take<Value>(), s);
                    },
                    [&](const val::PmId&) {
                      Value sc = r.take<Value>();
                      return mk::pm_id_v(sc, r.take<Value>(), s);
                    },
                },
                v->node);
          },
          [&](const Comp& m) -> Term {
            const SourceSpan& s = m->span;
            return std::visit(
                overloaded{
                    [&](const comp::Return&) { return mk::ret(r.take<Value>(), s); },
                    [&](const comp::To& x) {
                      Comp h = r.take<Comp>();
                      Comp b = r.take<Comp>();
                      auto bind = r.opt_vtype(x.binder);
                      return mk::to(h, b, bind, r.motive(x.motive), s);
                    },
                    [&](const comp::Force&) { return mk::force(r.take<Value>(), s); },
                    [&](const comp::Tuple& x) {
                      std::vector<Comp> arms;
                      for (std::size_t i = 0; i < x.arms.size(); ++i) arms.push_back(r.take<Comp>());
                      return mk::tuple(std::move(arms), s);
                    },
                    [&](const comp::Proj& x) { return mk::proj(x.tag, r.take<Comp>(), s); },
                    [&](const comp::Lambda&) {
                      VType d = r.take<VType>();
                      return mk::lam(d, r.take<Comp>(), s);
                    },
                    [&](const comp::Apply&) {
                      Value a = r.take<Value>();
                      return mk::app(a, r.take<Comp>(), s);
                    },
                    [&](const comp::Let& x) {
                      Value v = r.take<Value>();
                      Comp b = r.take<Comp>();
                      return mk::let_c(v, b, r.opt_vtype(x.binder), s);
                    },
                    [&](const comp::PmUnit& x) {
                      Value sc = r.take<Value>();
                      Comp b = r.take<Comp>();
                      return mk::pm_unit(sc, b, r.motive(x.motive), s);
                    },
                    [&](const comp::PmSum& x) {
                      Value sc = r.take<Value>();
                      std::vector<Comp> arms;
                      for (std::size_t i = 0; i < x.arms.size(); ++i) arms.push_back(r.take<Comp>());
                      return mk::pm_sum(sc, std::move(arms), r.motive(x.motive), s);
                    },
                    [&](const comp::PmPair& x) {
                      Value sc = r.take<Value>();
                      Comp b = r.take<Comp>();
                      return mk::pm_pair(sc, b, r.motive(x.motive), s);
                    },
                    [&](const comp::PmId& x) {
                      Value sc = r.take<Value>();
                      Comp b = r.take<Comp>();
                      return mk::pm_id(sc, b, r.motive(x.motive), s);
                    },
                    [&](const comp::Diverge&) { return mk::diverge(s); },
                    [&](const comp::Mu& x) {
                      Comp b = r.take<Comp>();
                      return mk::mu(b, r.opt_ctype(x.type), s);
                    },
                    [&](const comp::Print& x) { return mk::print(x.element, r.take<Comp>(), s); },
                    [&](const comp::Choose& x) {
                      std::vector<Comp> arms;
                      for (std::size_t i = 0; i < x.arms.size(); ++i) arms.push_back(r.take<Comp>());
                      return mk::choose(std::move(arms), s);
                    },
                    [&](const comp::Error& x) { return mk::error(x.name, s); },
                    [&](const comp::Write& x) { return mk::write(x.state, r.take<Comp>(), s); },
                    [&](const comp::Read& x) {
                      std::vector<comp::ReadArm> arms;
                      for (const auto& arm : x.arms) arms.push_back({arm.state, r.take<Comp>()});
                      return mk::read(std::move(arms), s);
                    },
                },
                m->node);
          },
      },
      t);
  r.done();
  return out;
}

}  // namespace dcbpv
