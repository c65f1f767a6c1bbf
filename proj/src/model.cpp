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

#include "dcbpv/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "dcbpv/equality.hpp"
#include "dcbpv/printer.hpp"

namespace dcbpv {

namespace {
const std::vector<Elem>& no_elems() {
  static const std::vector<Elem> none;
  return none;
}
}  // namespace

ElemList::ElemList(std::vector<Elem> v)
    : items_(v.empty() ? nullptr : std::make_shared<std::vector<Elem>>(std::move(v))) {}
ElemList::ElemList(std::initializer_list<Elem> v) : ElemList(std::vector<Elem>(v)) {}

std::size_t ElemList::size() const { return items_ ? items_->size() : 0; }
const Elem& ElemList::operator[](std::size_t i) const { return (*items_)[i]; }
const Elem& ElemList::at(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("ElemList::at");
  return (*items_)[i];
}
std::vector<Elem>::const_iterator ElemList::begin() const {
  return items_ ? items_->cbegin() : no_elems().cbegin();
}
std::vector<Elem>::const_iterator ElemList::end() const {
  return items_ ? items_->cend() : no_elems().cend();
}
std::vector<Elem>& ElemList::own() {
  if (!items_) {
    items_ = std::make_shared<std::vector<Elem>>();
  } else if (items_.use_count() > 1) {
    items_ = std::make_shared<std::vector<Elem>>(*items_);
  }
  return *items_;
}
void ElemList::push_back(Elem e) { own().push_back(std::move(e)); }
void ElemList::set(std::size_t i, Elem e) { own().at(i) = std::move(e); }

bool operator==(const ElemList& a, const ElemList& b) {
  if (a.items_ == b.items_) return true;
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

bool operator==(const Elem& a, const Elem& b) {
  return a.kind == b.kind && a.tag == b.tag && a.label == b.label && a.kids == b.kids;
}

bool operator<(const Elem& a, const Elem& b) {
  if (std::tie(a.kind, a.tag, a.label) != std::tie(b.kind, b.tag, b.label)) {
    return std::tie(a.kind, a.tag, a.label) < std::tie(b.kind, b.tag, b.label);
  }
  return std::lexicographical_compare(a.kids.begin(), a.kids.end(), b.kids.begin(), b.kids.end());
}

namespace {

Elem leaf(Elem::Kind k, std::size_t tag = 0) {
  Elem e;
  e.kind = k;
  e.tag = tag;
  return e;
}

Elem node(Elem::Kind k, std::vector<Elem> kids, std::size_t tag = 0, std::string label = {}) {
  Elem e;
  e.kind = k;
  e.tag = tag;
  e.label = std::move(label);
  e.kids = std::move(kids);
  return e;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string show_elem(const Elem& e, const std::vector<std::string>& errors) {
  auto kid = [&](std::size_t i) { return show_elem(e.kids[i], errors); };
  std::vector<std::string> parts;
  switch (e.kind) {
    case Elem::Kind::Unit:
      return "()";
    case Elem::Kind::Inj:
      return fmt::format("({}, {})", e.tag + 1, kid(0));
    case Elem::Kind::Pair:
      return fmt::format("({}, {})", kid(0), kid(1));
    case Elem::Kind::Refl:
      return fmt::format("refl {}", kid(0));
    case Elem::Kind::Ret:
      if (!e.label.empty()) return fmt::format("ret[{}] {}", e.label, kid(0));
      return fmt::format("ret {}", kid(0));
    case Elem::Kind::Err:
      return fmt::format("err {}", e.tag < errors.size() ? errors[e.tag] : std::to_string(e.tag));
    case Elem::Kind::Div:
      return "bottom";
    case Elem::Kind::Node:
      for (std::size_t i = 0; i < e.kids.size(); ++i) parts.push_back(kid(i));
      return fmt::format("{}[{}]", e.label, join(parts, ", "));
    case Elem::Kind::Tuple:
      for (std::size_t i = 0; i < e.kids.size(); ++i) parts.push_back(kid(i));
      return fmt::format("<{}>", join(parts, " | "));
    case Elem::Kind::Fun:
      for (std::size_t i = 0; i + 1 < e.kids.size(); i += 2) {
        parts.push_back(fmt::format("{} -> {}", kid(i), kid(i + 1)));
      }
      return fmt::format("{{{}}}", join(parts, ", "));
  }
  return "?";
}

namespace {

template <class T, class N>
const T* as(const N& n) {
  return std::get_if<T>(&n->node);
}

Comp unforce(const Comp& m) {
  if (const auto* f = as<comp::Force>(m)) {
    if (const auto* t = as<val::Thunk>(f->thunk)) return unforce(t->body);
  }
  return m;
}

class Interp {
 public:
  Interp(const FinMonadSpec& spec, const ModelOptions& opts) : spec_(spec), opts_(opts) {
    if (const auto* f = std::get_if<FreeSpec>(&spec_)) mu_left_ = f->mu_depth;
  }

  // ---- types ----

  std::vector<Elem> vtype(const Context& ctx, const Env& env, const VType& a) {
    return std::visit(
        [&](const auto& x) -> std::vector<Elem> {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, vt::Unit>) {
            return {leaf(Elem::Kind::Unit)};
          } else if constexpr (std::is_same_v<T, vt::Sum>) {
            std::vector<Elem> out;
            for (std::size_t i = 0; i < x.arms.size(); ++i) {
              for (auto& e : vtype(ctx, env, x.arms[i])) {
                out.push_back(node(Elem::Kind::Inj, {std::move(e)}, i));
                bound(out.size());
              }
            }
            return out;
          } else if constexpr (std::is_same_v<T, vt::Sigma>) {
            std::vector<Elem> out;
            Context c2 = ctx.extend(x.first);
            for (auto& e : vtype(ctx, env, x.first)) {
              Env env2 = env;
              env2.push_back(e);
              for (auto& f : vtype(c2, env2, x.second)) {
                out.push_back(node(Elem::Kind::Pair, {e, std::move(f)}));
                bound(out.size());
              }
            }
            return out;
          } else if constexpr (std::is_same_v<T, vt::Id>) {
            Elem l = value(ctx, env, x.lhs, x.carrier);
            Elem r = value(ctx, env, x.rhs, x.carrier);
            if (l == r) return {node(Elem::Kind::Refl, {std::move(l)})};
            return {};
          } else {
            return ctype(ctx, env, x.body);
          }
        },
        a->node);
  }

  std::vector<Elem> ctype(const Context& ctx, const Env& env, const CType& b) {
    return std::visit(
        [&](const auto& x) -> std::vector<Elem> {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ct::F>) {
            std::vector<Elem> vals = vtype(ctx, env, x.returns);
            std::vector<Elem> out;
            if (const auto* ex = std::get_if<ExceptionSpec>(&spec_)) {
              for (auto& v : vals) out.push_back(node(Elem::Kind::Ret, {v}));
              for (std::size_t e = 0; e < ex->errors.size(); ++e) {
                out.push_back(leaf(Elem::Kind::Err, e));
              }
            } else if (const auto* w = std::get_if<WriterSpec>(&spec_)) {
              for (std::size_t m = 0; m < w->monoid.elements.size(); ++m) {
                for (auto& v : vals) out.push_back(ret(v, m));
                bound(out.size());
              }
            } else {
              throw ModelError(ModelErrorKind::InfiniteModel,
                               "the carrier of a returner type in the effect-tree model is infinite");
            }
            bound(out.size());
            return out;
          } else if constexpr (std::is_same_v<T, ct::Prod>) {
            std::vector<std::vector<Elem>> arms;
            for (const auto& arm : x.arms) arms.push_back(ctype(ctx, env, arm));
            std::vector<Elem> out;
            product(arms, [&](std::vector<Elem> pick) {
              out.push_back(node(Elem::Kind::Tuple, std::move(pick)));
            });
            return out;
          } else {
            std::vector<Elem> dom = vtype(ctx, env, x.domain);
            Context c2 = ctx.extend(x.domain);
            std::vector<std::vector<Elem>> fibers;
            for (const auto& d : dom) {
              Env env2 = env;
              env2.push_back(d);
              fibers.push_back(ctype(c2, env2, x.codomain));
            }
            std::vector<Elem> out;
            product(fibers, [&](std::vector<Elem> pick) {
              std::vector<Elem> kids;
              for (std::size_t i = 0; i < dom.size(); ++i) {
                kids.push_back(dom[i]);
                kids.push_back(std::move(pick[i]));
              }
              out.push_back(node(Elem::Kind::Fun, std::move(kids)));
            });
            return out;
          }
        },
        b->node);
  }

  // ---- algebra structure ----

  Elem ret(Elem v, std::size_t m = 0) const {
    Elem e = node(Elem::Kind::Ret, {std::move(v)}, m);
    if (const auto* w = std::get_if<WriterSpec>(&spec_)) {
      if (m != w->monoid.unit) e.label = w->monoid.elements[m];
    }
    return e;
  }

  /// The interpretation of a nullary operation (error, divergence) in b.
  Elem point(const Context& ctx, const Env& env, const CType& b, const Elem& at) {
    return std::visit(
        [&](const auto& x) -> Elem {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ct::F>) {
            return at;
          } else if constexpr (std::is_same_v<T, ct::Prod>) {
            std::vector<Elem> kids;
            for (const auto& arm : x.arms) kids.push_back(point(ctx, env, arm, at));
            return node(Elem::Kind::Tuple, std::move(kids));
          } else {
            Context c2 = ctx.extend(x.domain);
            std::vector<Elem> kids;
            for (auto& d : vtype(ctx, env, x.domain)) {
              Env env2 = env;
              env2.push_back(d);
              kids.push_back(d);
              kids.push_back(point(c2, env2, x.codomain, at));
            }
            return node(Elem::Kind::Fun, std::move(kids));
          }
        },
        b->node);
  }

  /// An operation with arguments, pushed through products and functions.
  Elem op(const std::string& label, std::vector<Elem> args) {
    const Elem& first = args.front();
    if (first.kind == Elem::Kind::Tuple || first.kind == Elem::Kind::Fun) {
      bool fun = first.kind == Elem::Kind::Fun;
      Elem out = leaf(first.kind);
      std::size_t stride = fun ? 2 : 1;
      for (std::size_t i = 0; i < first.kids.size(); i += stride) {
        std::size_t at = fun ? i + 1 : i;
        std::vector<Elem> component;
        for (const auto& a : args) component.push_back(a.kids[at]);
        if (fun) out.kids.push_back(first.kids[i]);
        out.kids.push_back(op(label, std::move(component)));
      }
      return out;
    }
    return node(Elem::Kind::Node, std::move(args), 0, label);
  }

  /// Writer action of monoid element m.
  Elem act(std::size_t m, const Elem& x) const {
    const auto& mon = std::get<WriterSpec>(spec_).monoid;
    switch (x.kind) {
      case Elem::Kind::Ret:
        return ret(x.kids[0], mon.table[m][x.tag]);
      case Elem::Kind::Tuple:
      case Elem::Kind::Fun: {
        Elem out = x;
        bool fun = x.kind == Elem::Kind::Fun;
        for (std::size_t i = fun ? 1 : 0; i < out.kids.size(); i += fun ? 2 : 1) {
          out.kids.set(i, act(m, x.kids[i]));
        }
        return out;
      }
      default:
        return x;
    }
  }

  /// Kleisli extension of k, landing in the algebra of b.
  Elem bind(const Context& ctx, const Env& env, const Elem& r, const CType& b,
            const std::function<Elem(const Elem&)>& k) {
    switch (r.kind) {
      case Elem::Kind::Ret:
        if (std::holds_alternative<WriterSpec>(spec_)) return act(r.tag, k(r.kids[0]));
        return k(r.kids[0]);
      case Elem::Kind::Err:
      case Elem::Kind::Div:
        return point(ctx, env, b, r);
      case Elem::Kind::Node: {
        std::vector<Elem> kids;
        for (const auto& t : r.kids) kids.push_back(bind(ctx, env, t, b, k));
        return op(r.label, std::move(kids));
      }
      default:
        throw std::logic_error("bind: not an element of a free algebra");
    }
  }

  // ---- terms ----

  Elem value(const Context& ctx, const Env& env, const Value& v, const VType& a) {
    return std::visit(
        [&](const auto& x) -> Elem {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, val::Var>) {
            return env.at(env.size() - 1 - x.index);
          } else if constexpr (std::is_same_v<T, val::Thunk>) {
            const auto* u = as<vt::U>(a);
            if (!u) throw std::logic_error("thunk at a non-U type");
            return comp(ctx, env, x.body, u->body);
          } else if constexpr (std::is_same_v<T, val::Unit>) {
            return leaf(Elem::Kind::Unit);
          } else if constexpr (std::is_same_v<T, val::Inj>) {
            const auto* s = as<vt::Sum>(a);
            if (!s) throw std::logic_error("injection at a non-sum type");
            return node(Elem::Kind::Inj, {value(ctx, env, x.payload, s->arms.at(x.tag))}, x.tag);
          } else if constexpr (std::is_same_v<T, val::Pair>) {
            const auto* s = as<vt::Sigma>(a);
            if (!s) throw std::logic_error("pair at a non-Sigma type");
            Elem first = value(ctx, env, x.first, s->first);
            Elem second = value(ctx, env, x.second, substitute(s->second, x.first));
            return node(Elem::Kind::Pair, {std::move(first), std::move(second)});
          } else if constexpr (std::is_same_v<T, val::Refl>) {
            const auto* i = as<vt::Id>(a);
            if (!i) throw std::logic_error("refl at a non-Id type");
            return node(Elem::Kind::Refl, {value(ctx, env, x.of, i->carrier)});
          } else if constexpr (std::is_same_v<T, val::Let>) {
            return value(ctx, env, substitute(x.body, x.bound), a);
          } else if constexpr (std::is_same_v<T, val::PmUnit>) {
            return value(ctx, env, x.body, a);
          } else if constexpr (std::is_same_v<T, val::PmSum>) {
            auto s = scrutinee(ctx, env, x.scrutinee);
            return value(ctx.extend(s.binds[0]), with(env, s.elem.kids[0]), x.arms[s.elem.tag],
                         shift(a, 0, 1));
          } else if constexpr (std::is_same_v<T, val::PmPair>) {
            auto s = scrutinee(ctx, env, x.scrutinee);
            return value(ctx.extend(s.binds[0]).extend(s.binds[1]),
                         with(with(env, s.elem.kids[0]), s.elem.kids[1]), x.body, shift(a, 0, 2));
          } else {
            auto s = scrutinee(ctx, env, x.scrutinee);
            return value(ctx.extend(s.binds[0]), with(env, s.elem.kids[0]), x.body, shift(a, 0, 1));
          }
        },
        v->node);
  }

  Elem comp(const Context& ctx, const Env& env, const Comp& m, const CType& b) {
    return std::visit([&](const auto& x) -> Elem { return comp_node(ctx, env, m, x, b); },
                      m->node);
  }

 private:
  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Return& x,
                 const CType& b) {
    const auto* f = as<ct::F>(b);
    if (!f) throw std::logic_error("return at a non-F type");
    std::size_t unit = 0;
    if (const auto* w = std::get_if<WriterSpec>(&spec_)) unit = w->monoid.unit;
    return ret(value(ctx, env, x.value, f->returns), unit);
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::To& x,
                 const CType& b) {
    if (x.motive && !x.motive->extension.empty()) {
      throw ModelError(ModelErrorKind::UnsupportedEffect,
                       "sequencing motives over a context extension are not interpreted");
    }
    VType a;
    if (x.binder) {
      a = *x.binder;
    } else {
      try {
        CType ht = infer(ctx, x.head);
        const auto* f = as<ct::F>(ht);
        if (!f) throw std::logic_error("sequencing a non-returner");
        a = f->returns;
      } catch (const TypeError&) {
        Comp h = normalize(x.head);
        if (const auto* r = as<comp::Return>(h)) return comp(ctx, env, substitute(x.body, r->value), b);
        if (as<comp::Error>(h)) return comp(ctx, env, h, b);
        throw;
      }
    }
    CType body_ty = shift(b, 0, 1);
    if (x.motive) {
      if (std::holds_alternative<WriterSpec>(spec_) && occurs_free(x.motive->result, 0)) {
        throw ModelError(ModelErrorKind::UnsupportedEffect,
                         "the writer monad has no dependent Kleisli extension");
      }
      body_ty = map_vars(x.motive->result,
                         [](std::size_t j) { return j == 0 ? mk::tr(mk::var(0)) : mk::var(j); });
    }
    Elem r = comp(ctx, env, x.head, mk::F(a));
    Context c2 = ctx.extend(a);
    return bind(ctx, env, r, b,
                [&](const Elem& v) { return comp(c2, with(env, v), x.body, body_ty); });
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Force& x,
                 const CType& b) {
    if (const auto* t = as<val::Thunk>(x.thunk)) return comp(ctx, env, t->body, b);
    return value(ctx, env, x.thunk, mk::U(b));
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Tuple& x,
                 const CType& b) {
    const auto* p = as<ct::Prod>(b);
    if (!p) throw std::logic_error("tuple at a non-product type");
    std::vector<Elem> kids;
    for (std::size_t i = 0; i < x.arms.size(); ++i) {
      kids.push_back(comp(ctx, env, x.arms[i], p->arms[i]));
    }
    return node(Elem::Kind::Tuple, std::move(kids));
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp& m, const comp::Proj& x,
                 const CType& b) {
    Comp of = unforce(x.of);
    if (const auto* t = as<comp::Tuple>(of)) return comp(ctx, env, t->arms.at(x.tag), b);
    std::deque<Elem> store;
    return spine(ctx, env, m, store);
  }

  /// Projections and applications of a neutral head, read by reference
  /// where possible; `store` owns any intermediate results.
  const Elem& spine(const Context& ctx, const Env& env, const Comp& m, std::deque<Elem>& store) {
    if (const auto* f = as<comp::Force>(m)) {
      if (const auto* v = as<val::Var>(f->thunk)) return env.at(env.size() - 1 - v->index);
    }
    if (const auto* p = as<comp::Proj>(m)) {
      if (!as<comp::Tuple>(unforce(p->of))) return spine(ctx, env, p->of, store).kids.at(p->tag);
    }
    if (const auto* a = as<comp::Apply>(m)) {
      if (!as<comp::Lambda>(unforce(a->fun))) {
        CType ft = infer(ctx, a->fun);
        const auto* pi = as<ct::Pi>(ft);
        if (!pi) throw std::logic_error("application of a non-function");
        const Elem& f = spine(ctx, env, a->fun, store);
        Elem arg = value(ctx, env, a->arg, pi->domain);
        for (std::size_t i = 0; i + 1 < f.kids.size(); i += 2) {
          if (f.kids[i] == arg) return f.kids[i + 1];
        }
        throw std::logic_error("argument outside the function's domain");
      }
    }
    store.push_back(comp(ctx, env, m, infer(ctx, m)));
    return store.back();
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Lambda& x,
                 const CType& b) {
    const auto* p = as<ct::Pi>(b);
    if (!p) throw std::logic_error("lambda at a non-Pi type");
    Context c2 = ctx.extend(p->domain);
    std::vector<Elem> kids;
    for (auto& d : vtype(ctx, env, p->domain)) {
      Elem r = comp(c2, with(env, d), x.body, p->codomain);
      kids.push_back(std::move(d));
      kids.push_back(std::move(r));
    }
    return node(Elem::Kind::Fun, std::move(kids));
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp& m, const comp::Apply& x,
                 const CType& b) {
    Comp fun = unforce(x.fun);
    if (const auto* l = as<comp::Lambda>(fun)) {
      return comp(ctx, env, substitute(l->body, x.arg), b);
    }
    std::deque<Elem> store;
    return spine(ctx, env, m, store);
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Let& x,
                 const CType& b) {
    if (x.binder) {
      Elem v = value(ctx, env, x.bound, *x.binder);
      return comp(ctx.extend(*x.binder), with(env, std::move(v)), x.body, shift(b, 0, 1));
    }
    return comp(ctx, env, substitute(x.body, x.bound), b);
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::PmUnit& x,
                 const CType& b) {
    CType ty = x.motive ? substitute(x.motive->result, mk::unit()) : b;
    return comp(ctx, env, x.body, ty);
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::PmSum& x,
                 const CType& b) {
    no_extension(x.motive);
    if (const auto* i = as<val::Inj>(x.scrutinee); i && i->tag < x.arms.size()) {
      return comp(ctx, env, substitute(x.arms[i->tag], i->payload), b);
    }
    auto s = scrutinee(ctx, env, x.scrutinee);
    std::size_t i = s.elem.tag;
    CType ty = x.motive ? map_vars(x.motive->result,
                                   [i](std::size_t j) {
                                     return j == 0 ? mk::inj(i, mk::var(0)) : mk::var(j);
                                   })
                        : shift(b, 0, 1);
    return comp(ctx.extend(s.binds[0]), with(env, s.elem.kids[0]), x.arms[i], ty);
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::PmPair& x,
                 const CType& b) {
    no_extension(x.motive);
    // Literal scrutinees go through the reduct, as in the checker.
    if (const auto* p = as<val::Pair>(x.scrutinee)) {
      return comp(ctx, env, substitute_many(x.body, {p->second, p->first}), b);
    }
    auto s = scrutinee(ctx, env, x.scrutinee);
    CType ty = x.motive ? map_vars(x.motive->result,
                                   [](std::size_t j) {
                                     return j == 0 ? mk::pair(mk::var(1), mk::var(0))
                                                   : mk::var(j + 1);
                                   })
                        : shift(b, 0, 2);
    return comp(ctx.extend(s.binds[0]).extend(s.binds[1]),
                with(with(env, s.elem.kids[0]), s.elem.kids[1]), x.body, ty);
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::PmId& x,
                 const CType& b) {
    no_extension(x.motive);
    if (const auto* r = as<val::Refl>(x.scrutinee)) return comp(ctx, env, substitute(x.body, r->of), b);
    auto s = scrutinee(ctx, env, x.scrutinee);
    CType ty = x.motive ? map_vars(x.motive->result,
                                   [](std::size_t j) {
                                     if (j == 0) return mk::refl(mk::var(0));
                                     if (j <= 2) return mk::var(0);
                                     return mk::var(j - 2);
                                   })
                        : shift(b, 0, 1);
    return comp(ctx.extend(s.binds[0]), with(env, s.elem.kids[0]), x.body, ty);
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Diverge&,
                 const CType& b) {
    if (!std::holds_alternative<FreeSpec>(spec_)) {
      throw ModelError(ModelErrorKind::InfiniteModel,
                       "divergence has no interpretation in a finite-set model");
    }
    return point(ctx, env, b, leaf(Elem::Kind::Div));
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp& m, const comp::Mu& x,
                 const CType& b) {
    if (!std::holds_alternative<FreeSpec>(spec_)) {
      throw ModelError(ModelErrorKind::InfiniteModel,
                       "recursion has no interpretation in a finite-set model");
    }
    if (mu_left_ == 0) return point(ctx, env, b, leaf(Elem::Kind::Div));
    --mu_left_;
    Elem self = comp(ctx, env, m, b);
    Elem out = comp(ctx.extend(mk::U(b)), with(env, self), x.body, shift(b, 0, 1));
    ++mu_left_;
    return out;
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Print& x,
                 const CType& b) {
    Elem body = comp(ctx, env, x.body, b);
    if (const auto* w = std::get_if<WriterSpec>(&spec_)) {
      auto m = w->monoid.index_of(x.element);
      if (!m) throw ModelError(ModelErrorKind::UnsupportedEffect, "unknown monoid element " + x.element);
      return act(*m, body);
    }
    require_free("print");
    return op("print:" + x.element, {std::move(body)});
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Choose& x,
                 const CType& b) {
    require_free("choose");
    std::vector<Elem> kids;
    for (const auto& arm : x.arms) kids.push_back(comp(ctx, env, arm, b));
    return op("choose", std::move(kids));
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Error& x,
                 const CType& b) {
    const std::vector<std::string>* errors = nullptr;
    if (const auto* ex = std::get_if<ExceptionSpec>(&spec_)) errors = &ex->errors;
    if (const auto* fr = std::get_if<FreeSpec>(&spec_)) errors = &fr->sig.errors;
    if (!errors) throw ModelError(ModelErrorKind::UnsupportedEffect, "error in the writer model");
    auto it = std::find(errors->begin(), errors->end(), x.name);
    if (it == errors->end()) {
      throw ModelError(ModelErrorKind::UnsupportedEffect, "unknown error " + x.name);
    }
    return point(ctx, env, b, leaf(Elem::Kind::Err, it - errors->begin()));
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Write& x,
                 const CType& b) {
    require_free("write");
    return op("write:" + x.state, {comp(ctx, env, x.body, b)});
  }

  Elem comp_node(const Context& ctx, const Env& env, const Comp&, const comp::Read& x,
                 const CType& b) {
    require_free("read");
    std::vector<Elem> kids;
    for (const auto& arm : x.arms) kids.push_back(comp(ctx, env, arm.body, b));
    return op("read", std::move(kids));
  }

  // ---- helpers ----

  void require_free(const char* what) const {
    if (!std::holds_alternative<FreeSpec>(spec_)) {
      throw ModelError(ModelErrorKind::UnsupportedEffect,
                       fmt::format("{} is not an operation of this monad", what));
    }
  }

  static void no_extension(const std::optional<Motive>& m) {
    if (m && !m->extension.empty()) {
      throw ModelError(ModelErrorKind::UnsupportedEffect, "pattern-match motive with extension");
    }
  }

  static Env with(Env env, Elem e) {
    env.push_back(std::move(e));
    return env;
  }

  CheckOptions check_opts() const {
    CheckOptions o;
    o.variant = opts_.variant;
    return o;
  }

  VType infer(const Context& ctx, const Value& v) const {
    return cached(memo_ ? &memo_->values : nullptr, ctx, v,
                  [&] { return infer_value(ctx, v, opts_.sig, check_opts()); });
  }
  CType infer(const Context& ctx, const Comp& m) const {
    return cached(memo_ ? &memo_->comps : nullptr, ctx, m,
                  [&] { return infer_comp(ctx, m, opts_.sig, check_opts()); });
  }

  template <class Map, class Term, class Fn>
  static auto cached(Map* map, const Context& ctx, const Term& t, Fn fn) -> decltype(fn()) {
    if (!map) return fn();
    auto key = std::make_pair(static_cast<const void*>(t.get()), ctx.values.size());
    auto it = map->find(key);
    if (it != map->end()) return it->second.second;
    auto ty = fn();
    map->emplace(key, std::make_pair(t, ty));
    return ty;
  }

  /// A scrutinee and the types of what it binds. A literal whose own type
  /// cannot be inferred is read off structurally.
  struct Scrutinee {
    Elem elem;
    std::vector<VType> binds;
  };

  Scrutinee scrutinee(const Context& ctx, const Env& env, const Value& v) {
    try {
      VType t = infer(ctx, v);
      Elem e = value(ctx, env, v, t);
      if (const auto* s = as<vt::Sum>(t)) return {e, {s->arms.at(e.tag)}};
      if (const auto* s = as<vt::Sigma>(t)) return {e, {s->first, s->second}};
      if (const auto* s = as<vt::Id>(t)) return {e, {s->carrier}};
      return {e, {}};
    } catch (const TypeError&) {
      if (const auto* i = as<val::Inj>(v)) {
        auto [a, e] = typed(ctx, env, i->payload);
        return {node(Elem::Kind::Inj, {std::move(e)}, i->tag), {a}};
      }
      if (const auto* p = as<val::Pair>(v)) {
        auto [a, e] = typed(ctx, env, p->first);
        auto [b, f] = typed(ctx, env, p->second);
        return {node(Elem::Kind::Pair, {std::move(e), std::move(f)}), {a, shift(b, 0, 1)}};
      }
      if (const auto* r = as<val::Refl>(v)) {
        auto [a, e] = typed(ctx, env, r->of);
        return {node(Elem::Kind::Refl, {std::move(e)}), {a}};
      }
      throw;
    }
  }

  std::pair<VType, Elem> typed(const Context& ctx, const Env& env, const Value& v) {
    VType t = infer(ctx, v);
    return {t, value(ctx, env, v, t)};
  }

  void bound(std::size_t n) const {
    if (n > opts_.cap) {
      throw ModelError(ModelErrorKind::CapExceeded,
                       fmt::format("a carrier exceeds the cap of {} elements", opts_.cap));
    }
  }

  void product(const std::vector<std::vector<Elem>>& sets,
               const std::function<void(std::vector<Elem>)>& emit) const {
    std::size_t total = 1;
    for (const auto& s : sets) {
      if (s.empty()) return;
      if (total > opts_.cap / s.size()) bound(opts_.cap + 1);
      total *= s.size();
    }
    std::vector<std::size_t> idx(sets.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
      std::vector<Elem> pick;
      for (std::size_t i = 0; i < sets.size(); ++i) pick.push_back(sets[i][idx[i]]);
      emit(std::move(pick));
      for (std::size_t i = sets.size(); i-- > 0;) {
        if (++idx[i] < sets[i].size()) break;
        idx[i] = 0;
      }
    }
  }

  const FinMonadSpec& spec_;
  const ModelOptions& opts_;
  std::size_t mu_left_ = 0;

 public:
  /// Inferred types by term node and context length. The entries keep the
  /// nodes alive so addresses are not reused.
  struct Memo {
    std::map<std::pair<const void*, std::size_t>, std::pair<Value, VType>> values;
    std::map<std::pair<const void*, std::size_t>, std::pair<Comp, CType>> comps;
  };
  Memo* memo_ = nullptr;

  friend std::vector<Env> dcbpv::environments(const Context&, const FinMonadSpec&,
                                              const ModelOptions&);
  friend bool dcbpv::algebra_laws_hold(const Context&, const Env&, const CType&,
                                       const FinMonadSpec&, const ModelOptions&);
};

const std::vector<std::string>& error_names(const FinMonadSpec& spec) {
  static const std::vector<std::string> none;
  if (const auto* ex = std::get_if<ExceptionSpec>(&spec)) return ex->errors;
  if (const auto* fr = std::get_if<FreeSpec>(&spec)) return fr->sig.errors;
  return none;
}

}  // namespace

std::vector<Elem> interp_vtype(const Context& ctx, const Env& env, const VType& a,
                               const FinMonadSpec& spec, const ModelOptions& opts) {
  return Interp(spec, opts).vtype(ctx, env, a);
}

std::vector<Elem> interp_ctype(const Context& ctx, const Env& env, const CType& b,
                               const FinMonadSpec& spec, const ModelOptions& opts) {
  return Interp(spec, opts).ctype(ctx, env, b);
}

Elem interp_value(const Context& ctx, const Env& env, const Value& v, const VType& a,
                  const FinMonadSpec& spec, const ModelOptions& opts) {
  return Interp(spec, opts).value(ctx, env, v, a);
}

Elem interp_comp(const Context& ctx, const Env& env, const Comp& m, const CType& b,
                 const FinMonadSpec& spec, const ModelOptions& opts) {
  return Interp(spec, opts).comp(ctx, env, m, b);
}

std::vector<Env> environments(const Context& ctx, const FinMonadSpec& spec,
                              const ModelOptions& opts) {
  Interp in(spec, opts);
  std::vector<Env> envs{Env{}};
  Context pre;
  for (std::size_t i = 0; i < ctx.values.size(); ++i) {
    std::vector<Env> next;
    for (const auto& env : envs) {
      for (auto& e : in.vtype(pre, env, ctx.values[i])) {
        Env env2 = env;
        env2.push_back(std::move(e));
        next.push_back(std::move(env2));
        in.bound(next.size());
      }
    }
    envs = std::move(next);
    pre = pre.extend(ctx.values[i], i < ctx.names.size() ? ctx.names[i] : std::string{});
  }
  return envs;
}

bool algebra_laws_hold(const Context& ctx, const Env& env, const CType& b,
                       const FinMonadSpec& spec, const ModelOptions& opts) {
  Interp in(spec, opts);
  std::vector<Elem> carrier = in.ctype(ctx, env, b);
  auto member = [&](const Elem& x) {
    return std::find(carrier.begin(), carrier.end(), x) != carrier.end();
  };
  if (const auto* ex = std::get_if<ExceptionSpec>(&spec)) {
    // Every set with E chosen points is an algebra; the points must lie in
    // the carrier, and returning then handling is the identity.
    for (std::size_t e = 0; e < ex->errors.size(); ++e) {
      if (!member(in.point(ctx, env, b, leaf(Elem::Kind::Err, e)))) return false;
    }
    for (const auto& x : carrier) {
      Elem same = in.bind(ctx, env, in.ret(x), mk::F(mk::unit_type()),
                          [](const Elem& v) { return v; });
      if (!(same == x)) return false;
    }
    return true;
  }
  if (const auto* w = std::get_if<WriterSpec>(&spec)) {
    const auto& mon = w->monoid;
    for (const auto& x : carrier) {
      if (!(in.act(mon.unit, x) == x)) return false;
      for (std::size_t m = 0; m < mon.elements.size(); ++m) {
        Elem mx = in.act(m, x);
        if (!member(mx)) return false;
        for (std::size_t n = 0; n < mon.elements.size(); ++n) {
          if (!(in.act(m, in.act(n, x)) == in.act(mon.table[m][n], x))) return false;
        }
      }
    }
    return true;
  }
  throw ModelError(ModelErrorKind::InfiniteModel, "effect-tree algebras are not enumerable");
}

std::string_view verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Equal:
      return "Equal";
    case Verdict::Kind::Counterexample:
      return "Counterexample";
    case Verdict::Kind::CapExceeded:
      return "CapExceeded";
  }
  return "?";
}

Verdict check_equation(const Context& ctx, const Comp& lhs, const Comp& rhs, const CType& ty,
                       const FinMonadSpec& spec, const ModelOptions& opts) {
  Verdict v;
  std::vector<Env> envs;
  try {
    envs = environments(ctx, spec, opts);
  } catch (const ModelError& e) {
    if (e.kind() != ModelErrorKind::CapExceeded) throw;
    v.kind = Verdict::Kind::CapExceeded;
    return v;
  }
  const auto& errors = error_names(spec);
  Interp::Memo memo;
  for (const auto& env : envs) {
    ++v.environments;
    Interp in(spec, opts);
    in.memo_ = &memo;
    Elem l = in.comp(ctx, env, lhs, ty);
    Elem r = in.comp(ctx, env, rhs, ty);
    if (!(l == r)) {
      v.kind = Verdict::Kind::Counterexample;
      std::vector<std::string> binds;
      for (std::size_t i = 0; i < env.size(); ++i) {
        std::string name = i < ctx.names.size() && !ctx.names[i].empty() ? ctx.names[i]
                                                                          : fmt::format("x{}", i);
        binds.push_back(fmt::format("{} = {}", name, show_elem(env[i], errors)));
      }
      v.env = binds.empty() ? "(empty)" : join(binds, ", ");
      v.lhs = show_elem(l, errors);
      v.rhs = show_elem(r, errors);
      return v;
    }
  }
  return v;
}

// ---- dependent Kleisli extensions ----

std::vector<ExcElem> dep_kleisli_exception(const ExcFamily& fam, const std::vector<ExcElem>& f) {
  if (f.size() != fam.a_size) throw std::invalid_argument("f must be defined on all of A");
  std::vector<ExcElem> out = f;
  for (std::size_t e = 0; e < fam.e_size; ++e) out.push_back(ExcElem{true, e});
  return out;
}

std::vector<std::vector<ExcElem>> all_dependent_functions(const ExcFamily& fam) {
  std::size_t points = fam.a_size + fam.e_size;
  if (fam.fibers.size() != points) throw std::invalid_argument("one fiber size per point");
  std::vector<std::vector<ExcElem>> out{{}};
  for (std::size_t t = 0; t < points; ++t) {
    std::vector<ExcElem> fiber;
    for (std::size_t i = 0; i < fam.fibers[t]; ++i) fiber.push_back(ExcElem{false, i});
    for (std::size_t e = 0; e < fam.e_size; ++e) fiber.push_back(ExcElem{true, e});
    std::vector<std::vector<ExcElem>> next;
    for (const auto& partial : out) {
      for (const auto& y : fiber) {
        auto g = partial;
        g.push_back(y);
        next.push_back(std::move(g));
      }
    }
    out = std::move(next);
  }
  return out;
}

WriterRefutation refute_dependent_kleisli_writer(const FiniteTableMonoid& m, std::size_t a_size) {
  WriterRefutation r;
  std::size_t n = m.elements.size();
  r.predicate.assign(n, std::vector<bool>(a_size, false));
  for (std::size_t a = 0; a < a_size; ++a) r.predicate[m.unit][a] = true;

  // The fiber of T B over x = (k, a) is M x B(x), of size n or 0.
  std::vector<std::size_t> fiber;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < a_size; ++a) fiber.push_back(r.predicate[k][a] ? n : 0);
  }
  std::size_t space = 1;
  for (auto s : fiber) space *= s;
  r.search_space = space;

  // Enumerate every dependent function and keep those that restrict along
  // eta to eta . (a |-> *), i.e. send (unit, a) to (unit, *).
  std::vector<std::size_t> pick(fiber.size(), 0);
  for (std::size_t c = 0; c < space; ++c) {
    bool ok = true;
    for (std::size_t a = 0; a < a_size; ++a) {
      if (pick[m.unit * a_size + a] != m.unit) ok = false;
    }
    if (ok) ++r.extensions;
    for (std::size_t i = fiber.size(); i-- > 0;) {
      if (++pick[i] < fiber[i]) break;
      pick[i] = 0;
    }
  }
  r.kind = r.extensions == 0 ? WriterRefutation::Kind::Refutation
                             : WriterRefutation::Kind::ExtensionFound;
  return r;
}

}  // namespace dcbpv
