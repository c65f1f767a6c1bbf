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

#include "dcbpv/equality.hpp"

#include <functional>
#include <optional>

#include <fmt/core.h>

#include "dcbpv/overloaded.hpp"

namespace dcbpv {

namespace {

template <typename Alt, typename T>
const Alt* as(const T& t) {
  return std::get_if<Alt>(&t->node);
}

// ---- complex-value elimination ----

bool is_complex(const Value& v) {
  return as<val::Let>(v) || as<val::PmUnit>(v) || as<val::PmSum>(v) || as<val::PmPair>(v) ||
         as<val::PmId>(v);
}

// Path (child indices) to the outermost, leftmost complex value that is not
// under a thunk.
bool find_complex(const Value& v, std::vector<std::size_t>& path) {
  if (is_complex(v)) return true;
  if (as<val::Thunk>(v)) return false;
  auto kids = children(v);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    if (find_complex(std::get<Value>(kids[i].term), path)) return true;
    path.pop_back();
  }
  return false;
}

Value get_at(const Value& v, const std::vector<std::size_t>& path, std::size_t from = 0) {
  if (from == path.size()) return v;
  return get_at(std::get<Value>(children(v)[path[from]].term), path, from + 1);
}

Value set_at(const Value& v, const std::vector<std::size_t>& path, const Value& x,
             std::size_t from = 0) {
  if (from == path.size()) return x;
  auto kids = children(v);
  std::vector<Term> terms;
  for (const auto& k : kids) terms.push_back(k.term);
  terms[path[from]] = set_at(std::get<Value>(terms[path[from]]), path, x, from + 1);
  return std::get<Value>(rebuild(v, terms));
}

Comp ecv(const Comp& m);

Value ecv_thunks(const Value& v) {
  if (const auto* t = as<val::Thunk>(v)) return mk::thunk(ecv(t->body), v->span);
  auto kids = children(v);
  if (kids.empty()) return v;
  std::vector<Term> terms;
  for (const auto& k : kids) terms.push_back(ecv_thunks(std::get<Value>(k.term)));
  return std::get<Value>(rebuild(v, terms));
}

// Places `w` (living under `extra` fresh binders) in the hole of `hole`,
// which lives in the context extended by one variable h.
Comp fill(const Comp& hole, std::size_t extra, const Value& w) {
  return substitute(shift(hole, 1, static_cast<long>(extra)), w);
}

Comp ecv(const Comp& m) {
  auto kids = children(m);
  for (std::size_t k = 0; k < kids.size(); ++k) {
    const auto* v = std::get_if<Value>(&kids[k].term);
    if (!v) continue;
    std::vector<std::size_t> path;
    if (!find_complex(*v, path)) continue;
    Value cv = get_at(*v, path);
    Comp shifted = shift(m, 0, 1);
    auto skids = children(shifted);
    std::vector<Term> terms;
    for (const auto& c : skids) terms.push_back(c.term);
    terms[k] = set_at(std::get<Value>(terms[k]), path, mk::var(0));
    Comp hole = std::get<Comp>(rebuild(shifted, terms));
    Comp out = std::visit(
        overloaded{
            [&](const val::Let& x) {
              return mk::to(mk::ret(x.bound), fill(hole, 1, x.body));
            },
            [&](const val::PmUnit& x) { return mk::pm_unit(x.scrutinee, fill(hole, 0, x.body)); },
            [&](const val::PmSum& x) {
              std::vector<Comp> arms;
              for (const auto& a : x.arms) arms.push_back(fill(hole, 1, a));
              return mk::pm_sum(x.scrutinee, std::move(arms));
            },
            [&](const val::PmPair& x) { return mk::pm_pair(x.scrutinee, fill(hole, 2, x.body)); },
            [&](const val::PmId& x) { return mk::pm_id(x.scrutinee, fill(hole, 1, x.body)); },
            [&](const auto&) -> Comp { throw std::logic_error("not a complex value"); },
        },
        cv->node);
    return ecv(out);
  }
  if (kids.empty()) return m;
  std::vector<Term> terms;
  for (const auto& c : kids) {
    if (const auto* v = std::get_if<Value>(&c.term)) {
      terms.push_back(ecv_thunks(*v));
    } else if (const auto* sub = std::get_if<Comp>(&c.term)) {
      terms.push_back(ecv(*sub));
    } else {
      terms.push_back(c.term);
    }
  }
  return std::get<Comp>(rebuild(m, terms));
}

// ---- normalization ----

// Swaps the two innermost variables.
Comp swap01(const Comp& n) {
  return map_vars(n, [](std::size_t i) { return mk::var(i == 0 ? 1 : i == 1 ? 0 : i); });
}

class Normalizer {
 public:
  Normalizer(const ConvOptions& opts, StepLog* log) : opts_(opts), log_(log) {}

  Term norm(const Term& t) {
    auto kids = children(t);
    Term r = t;
    if (!kids.empty()) {
      std::vector<Term> terms;
      terms.reserve(kids.size());
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (log_) path_.push_back(i);
        terms.push_back(norm(kids[i].term));
        if (log_) path_.pop_back();
      }
      r = rebuild(t, terms);
    }
    if (const auto* m = std::get_if<Comp>(&r)) {
      if (auto s = step(*m)) return norm(*s);
    } else if (const auto* v = std::get_if<Value>(&r)) {
      if (auto s = step(*v)) return norm(*s);
    }
    return r;
  }

 private:
  const ConvOptions& opts_;
  StepLog* log_;
  std::size_t steps_ = 0;
  std::vector<std::size_t> path_;

  void tick(const char* rule) {
    if (++steps_ > opts_.norm_fuel) {
      throw FuelExhausted(fmt::format("normalization exceeded {} steps", opts_.norm_fuel));
    }
    if (log_) {
      std::string p = "root";
      for (auto i : path_) p += fmt::format(".{}", i);
      log_->lines.push_back(fmt::format("{} at {}", rule, p));
    }
  }

  template <typename T>
  std::optional<T> fire(const char* rule, T t) {
    tick(rule);
    return t;
  }

  std::optional<Value> step(const Value& v) {
    if (const auto* x = as<val::Let>(v)) return fire("let-beta", substitute(x->body, x->bound));
    if (const auto* x = as<val::PmUnit>(v)) {
      if (as<val::Unit>(x->scrutinee)) return fire("pm-unit-beta", x->body);
    }
    if (const auto* x = as<val::PmSum>(v)) {
      if (const auto* i = as<val::Inj>(x->scrutinee); i && i->tag < x->arms.size()) {
        return fire("pm-sum-beta", substitute(x->arms[i->tag], i->payload));
      }
    }
    if (const auto* x = as<val::PmPair>(v)) {
      if (const auto* p = as<val::Pair>(x->scrutinee)) {
        return fire("pm-pair-beta", substitute_many(x->body, {p->second, p->first}));
      }
    }
    if (const auto* x = as<val::PmId>(v)) {
      if (const auto* r = as<val::Refl>(x->scrutinee)) {
        return fire("pm-id-beta", substitute(x->body, r->of));
      }
    }
    return std::nullopt;
  }

  std::optional<Comp> step(const Comp& m) {
    if (const auto* x = as<comp::To>(m)) {
      if (const auto* r = as<comp::Return>(x->head)) {
        return fire("to-beta", substitute(x->body, r->value));
      }
      if (const auto* inner = as<comp::To>(x->head)) {
        std::optional<VType> b = x->binder;
        if (b) b = shift(*b, 0, 1);
        Comp rest = mk::to(inner->body, shift(x->body, 1, 1), b);
        return fire("to-assoc", mk::to(inner->head, rest, inner->binder));
      }
      if (const auto* r = as<comp::Return>(x->body)) {
        if (const auto* var = as<val::Var>(r->value); var && var->index == 0) {
          return fire("to-eta", x->head);
        }
      }
      if (const auto* t = as<comp::Tuple>(x->body)) {
        std::vector<Comp> arms;
        for (const auto& a : t->arms) arms.push_back(mk::to(x->head, a, x->binder));
        return fire("to-tuple", mk::tuple(std::move(arms)));
      }
      if (const auto* l = as<comp::Lambda>(x->body); l && !occurs_free(l->domain, 0)) {
        std::optional<VType> b = x->binder;
        if (b) b = shift(*b, 0, 1);
        Comp body = mk::to(shift(x->head, 0, 1), swap01(l->body), b);
        return fire("to-lambda", mk::lam(shift(l->domain, 0, -1), body));
      }
      return std::nullopt;
    }
    if (const auto* x = as<comp::Force>(m)) {
      if (const auto* t = as<val::Thunk>(x->thunk)) return fire("force-thunk", t->body);
      return std::nullopt;
    }
    if (const auto* x = as<comp::PmSum>(m)) {
      if (const auto* i = as<val::Inj>(x->scrutinee); i && i->tag < x->arms.size()) {
        return fire("pm-sum-beta", substitute(x->arms[i->tag], i->payload));
      }
      return std::nullopt;
    }
    if (const auto* x = as<comp::PmUnit>(m)) {
      if (as<val::Unit>(x->scrutinee)) return fire("pm-unit-beta", x->body);
      return std::nullopt;
    }
    if (const auto* x = as<comp::PmPair>(m)) {
      if (const auto* p = as<val::Pair>(x->scrutinee)) {
        return fire("pm-pair-beta", substitute_many(x->body, {p->second, p->first}));
      }
      return std::nullopt;
    }
    if (const auto* x = as<comp::PmId>(m)) {
      if (const auto* r = as<val::Refl>(x->scrutinee)) {
        return fire("pm-id-beta", substitute(x->body, r->of));
      }
      return std::nullopt;
    }
    if (const auto* x = as<comp::Proj>(m)) {
      if (const auto* t = as<comp::Tuple>(x->of); t && x->tag < t->arms.size()) {
        return fire("proj-beta", t->arms[x->tag]);
      }
      return std::nullopt;
    }
    if (const auto* x = as<comp::Apply>(m)) {
      if (const auto* l = as<comp::Lambda>(x->fun)) {
        return fire("app-beta", substitute(l->body, x->arg));
      }
      return std::nullopt;
    }
    if (const auto* x = as<comp::Let>(m)) return fire("let-beta", substitute(x->body, x->bound));
    return std::nullopt;
  }
};

// ---- conversion ----

class Comparator {
 public:
  Comparator(const ConvOptions& opts, TypeCtx ctx) : opts_(opts), ctx_(std::move(ctx)) {}

  bool vtype(const VType& a, const VType& b) {
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const vt::U& x) { return ctype(x.body, as<vt::U>(b)->body); },
            [&](const vt::Unit&) { return true; },
            [&](const vt::Sum& x) {
              const auto& y = *as<vt::Sum>(b);
              if (x.arms.size() != y.arms.size()) return false;
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                if (!vtype(x.arms[i], y.arms[i])) return false;
              }
              return true;
            },
            [&](const vt::Sigma& x) {
              const auto& y = *as<vt::Sigma>(b);
              return vtype(x.first, y.first) &&
                     under(x.first, [&] { return vtype(x.second, y.second); });
            },
            [&](const vt::Id& x) {
              const auto& y = *as<vt::Id>(b);
              return vtype(x.carrier, y.carrier) && value(x.lhs, y.lhs) && value(x.rhs, y.rhs);
            },
        },
        a->node);
  }

  bool ctype(const CType& a, const CType& b) {
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const ct::F& x) { return vtype(x.returns, as<ct::F>(b)->returns); },
            [&](const ct::Prod& x) {
              const auto& y = *as<ct::Prod>(b);
              if (x.arms.size() != y.arms.size()) return false;
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                if (!ctype(x.arms[i], y.arms[i])) return false;
              }
              return true;
            },
            [&](const ct::Pi& x) {
              const auto& y = *as<ct::Pi>(b);
              return vtype(x.domain, y.domain) &&
                     under(x.domain, [&] { return ctype(x.codomain, y.codomain); });
            },
        },
        a->node);
  }

  bool value(const Value& a, const Value& b) {
    if (opts_.eta_id && id_typed(a) && id_typed(b)) return true;
    bool ta = as<val::Thunk>(a) != nullptr;
    bool tb = as<val::Thunk>(b) != nullptr;
    if (opts_.eta_fun_prod_thunk && ta != tb) {
      if (ta) return comp(as<val::Thunk>(a)->body, mk::force(b));
      return comp(mk::force(a), as<val::Thunk>(b)->body);
    }
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const val::Var& x) { return x.index == as<val::Var>(b)->index; },
            [&](const val::Thunk& x) { return comp(x.body, as<val::Thunk>(b)->body); },
            [&](const val::Unit&) { return true; },
            [&](const val::Inj& x) {
              const auto& y = *as<val::Inj>(b);
              return x.tag == y.tag && value(x.payload, y.payload);
            },
            [&](const val::Pair& x) {
              const auto& y = *as<val::Pair>(b);
              return value(x.first, y.first) && value(x.second, y.second);
            },
            [&](const val::Refl& x) { return value(x.of, as<val::Refl>(b)->of); },
            [&](const val::Let& x) {
              const auto& y = *as<val::Let>(b);
              return value(x.bound, y.bound) && under(nullptr, [&] { return value(x.body, y.body); });
            },
            [&](const val::PmUnit& x) {
              const auto& y = *as<val::PmUnit>(b);
              return value(x.scrutinee, y.scrutinee) && value(x.body, y.body);
            },
            [&](const val::PmSum& x) {
              const auto& y = *as<val::PmSum>(b);
              if (!value(x.scrutinee, y.scrutinee) || x.arms.size() != y.arms.size()) return false;
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                if (!under(nullptr, [&] { return value(x.arms[i], y.arms[i]); })) return false;
              }
              return true;
            },
            [&](const val::PmPair& x) {
              const auto& y = *as<val::PmPair>(b);
              return value(x.scrutinee, y.scrutinee) &&
                     under(nullptr, [&] { return under(nullptr, [&] { return value(x.body, y.body); }); });
            },
            [&](const val::PmId& x) {
              const auto& y = *as<val::PmId>(b);
              return value(x.scrutinee, y.scrutinee) &&
                     under(nullptr, [&] { return value(x.body, y.body); });
            },
        },
        a->node);
  }

  bool comp(const Comp& a, const Comp& b) {
    if (opts_.eta_fun_prod_thunk) {
      const auto* ta = as<comp::Tuple>(a);
      const auto* tb = as<comp::Tuple>(b);
      if ((ta != nullptr) != (tb != nullptr)) {
        const auto& t = ta ? *ta : *tb;
        const Comp& other = ta ? b : a;
        for (std::size_t i = 0; i < t.arms.size(); ++i) {
          Comp p = mk::proj(i, other);
          if (!(ta ? comp(t.arms[i], p) : comp(p, t.arms[i]))) return false;
        }
        return true;
      }
      const auto* la = as<comp::Lambda>(a);
      const auto* lb = as<comp::Lambda>(b);
      if ((la != nullptr) != (lb != nullptr)) {
        const auto& l = la ? *la : *lb;
        Comp applied = mk::app(mk::var(0), shift(la ? b : a, 0, 1));
        return under(l.domain, [&] { return la ? comp(l.body, applied) : comp(applied, l.body); });
      }
    }
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const comp::Return& x) { return value(x.value, as<comp::Return>(b)->value); },
            [&](const comp::To& x) {
              const auto& y = *as<comp::To>(b);
              return comp(x.head, y.head) &&
                     under(x.binder.value_or(nullptr), [&] { return comp(x.body, y.body); });
            },
            [&](const comp::Force& x) { return value(x.thunk, as<comp::Force>(b)->thunk); },
            [&](const comp::Tuple& x) { return comps(x.arms, as<comp::Tuple>(b)->arms); },
            [&](const comp::Proj& x) {
              const auto& y = *as<comp::Proj>(b);
              return x.tag == y.tag && comp(x.of, y.of);
            },
            [&](const comp::Lambda& x) {
              const auto& y = *as<comp::Lambda>(b);
              return vtype(x.domain, y.domain) &&
                     under(x.domain, [&] { return comp(x.body, y.body); });
            },
            [&](const comp::Apply& x) {
              const auto& y = *as<comp::Apply>(b);
              return value(x.arg, y.arg) && comp(x.fun, y.fun);
            },
            [&](const comp::Let& x) {
              const auto& y = *as<comp::Let>(b);
              return value(x.bound, y.bound) &&
                     under(x.binder.value_or(nullptr), [&] { return comp(x.body, y.body); });
            },
            [&](const comp::PmUnit& x) {
              const auto& y = *as<comp::PmUnit>(b);
              return value(x.scrutinee, y.scrutinee) && comp(x.body, y.body);
            },
            [&](const comp::PmSum& x) {
              const auto& y = *as<comp::PmSum>(b);
              if (!value(x.scrutinee, y.scrutinee) || x.arms.size() != y.arms.size()) return false;
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                if (!under(nullptr, [&] { return comp(x.arms[i], y.arms[i]); })) return false;
              }
              return true;
            },
            [&](const comp::PmPair& x) {
              const auto& y = *as<comp::PmPair>(b);
              return value(x.scrutinee, y.scrutinee) &&
                     under(nullptr, [&] { return under(nullptr, [&] { return comp(x.body, y.body); }); });
            },
            [&](const comp::PmId& x) {
              const auto& y = *as<comp::PmId>(b);
              return value(x.scrutinee, y.scrutinee) &&
                     under(nullptr, [&] { return comp(x.body, y.body); });
            },
            [&](const comp::Diverge&) { return true; },
            [&](const comp::Mu& x) {
              const auto& y = *as<comp::Mu>(b);
              VType z = x.type ? mk::U(*x.type) : nullptr;
              return under(z, [&] { return comp(x.body, y.body); });
            },
            [&](const comp::Print& x) {
              const auto& y = *as<comp::Print>(b);
              return x.element == y.element && comp(x.body, y.body);
            },
            [&](const comp::Choose& x) { return comps(x.arms, as<comp::Choose>(b)->arms); },
            [&](const comp::Error& x) { return x.name == as<comp::Error>(b)->name; },
            [&](const comp::Write& x) {
              const auto& y = *as<comp::Write>(b);
              return x.state == y.state && comp(x.body, y.body);
            },
            [&](const comp::Read& x) {
              const auto& y = *as<comp::Read>(b);
              if (x.arms.size() != y.arms.size()) return false;
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                if (x.arms[i].state != y.arms[i].state || !comp(x.arms[i].body, y.arms[i].body)) {
                  return false;
                }
              }
              return true;
            },
        },
        a->node);
  }

 private:
  const ConvOptions& opts_;
  TypeCtx ctx_;

  template <typename Fn>
  bool under(const VType& t, Fn fn) {
    ctx_.push_back(t);
    bool r = fn();
    ctx_.pop_back();
    return r;
  }

  bool comps(const std::vector<Comp>& a, const std::vector<Comp>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!comp(a[i], b[i])) return false;
    }
    return true;
  }

  bool id_typed(const Value& v) const {
    if (as<val::Refl>(v)) return true;
    const auto* x = as<val::Var>(v);
    if (!x || x->index >= ctx_.size()) return false;
    const VType& t = ctx_[ctx_.size() - 1 - x->index];
    return t && as<vt::Id>(t);
  }
};

// ---- shrinking ----

std::vector<Term> successors(const Term& t);

std::vector<Term> child_successors(const Term& t) {
  std::vector<Term> out;
  auto kids = children(t);
  for (std::size_t k = 0; k < kids.size(); ++k) {
    for (auto& s : successors(kids[k].term)) {
      std::vector<Term> terms;
      for (const auto& c : kids) terms.push_back(c.term);
      terms[k] = std::move(s);
      out.push_back(rebuild(t, terms));
    }
  }
  return out;
}

std::vector<Term> successors(const Term& t) {
  std::vector<Term> out;
  if (const auto* v = std::get_if<Value>(&t)) {
    if (const auto* th = as<val::Thunk>(*v)) {
      for (auto& m : effect_transitions(th->body)) out.push_back(mk::thunk(std::move(m)));
    }
  }
  for (auto& s : child_successors(t)) out.push_back(std::move(s));
  return out;
}

template <typename T>
bool shrink_search(const T& wanted, const ConvOptions& opts,
                   const std::function<bool(const T&)>& accept) {
  constexpr std::size_t kStateCap = 4096;
  std::vector<T> seen = {normalize(wanted, opts)};
  std::vector<T> frontier = seen;
  for (std::size_t depth = 0;; ++depth) {
    for (const auto& w : frontier) {
      if (accept(w)) return true;
    }
    if (depth >= opts.shrink_fuel) return false;
    std::vector<T> next;
    for (const auto& w : frontier) {
      for (const auto& s : successors(w)) {
        T n = normalize(std::get<T>(s), opts);
        bool dup = false;
        for (const auto& o : seen) {
          if (alpha_eq(o, n)) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        if (seen.size() >= kStateCap) return false;
        seen.push_back(n);
        next.push_back(n);
      }
    }
    if (next.empty()) return false;
    frontier = std::move(next);
  }
}

}  // namespace

Comp eliminate_complex_values(const Comp& m) { return ecv(m); }

VType normalize(const VType& t, const ConvOptions& opts, StepLog* log) {
  return std::get<VType>(Normalizer(opts, log).norm(t));
}
CType normalize(const CType& t, const ConvOptions& opts, StepLog* log) {
  return std::get<CType>(Normalizer(opts, log).norm(t));
}
Value normalize(const Value& t, const ConvOptions& opts, StepLog* log) {
  return std::get<Value>(Normalizer(opts, log).norm(t));
}
Comp normalize(const Comp& t, const ConvOptions& opts, StepLog* log) {
  return std::get<Comp>(Normalizer(opts, log).norm(t));
}

bool convertible(const VType& a, const VType& b, const ConvOptions& opts, const TypeCtx& ctx,
                 StepLog* log) {
  if (alpha_eq(a, b)) return true;
  return Comparator(opts, ctx).vtype(normalize(a, opts, log), normalize(b, opts, log));
}
bool convertible(const CType& a, const CType& b, const ConvOptions& opts, const TypeCtx& ctx,
                 StepLog* log) {
  if (alpha_eq(a, b)) return true;
  return Comparator(opts, ctx).ctype(normalize(a, opts, log), normalize(b, opts, log));
}
bool convertible(const Value& a, const Value& b, const ConvOptions& opts, const TypeCtx& ctx,
                 StepLog* log) {
  if (alpha_eq(a, b)) return true;
  return Comparator(opts, ctx).value(normalize(a, opts, log), normalize(b, opts, log));
}
bool convertible(const Comp& a, const Comp& b, const ConvOptions& opts, const TypeCtx& ctx,
                 StepLog* log) {
  if (alpha_eq(a, b)) return true;
  return Comparator(opts, ctx).comp(normalize(a, opts, log), normalize(b, opts, log));
}

std::vector<Comp> effect_transitions(const Comp& m) {
  std::vector<Comp> out;
  std::visit(overloaded{
                 [&](const comp::Print& x) { out.push_back(x.body); },
                 [&](const comp::Write& x) { out.push_back(x.body); },
                 [&](const comp::Choose& x) { out = x.arms; },
                 [&](const comp::Read& x) {
                   for (const auto& a : x.arms) out.push_back(a.body);
                 },
                 [&](const comp::Mu& x) { out.push_back(substitute(x.body, mk::thunk(m))); },
                 [&](const comp::To& x) {
                   for (auto& h : effect_transitions(x.head)) {
                     out.push_back(mk::to(h, x.body, x.binder, x.motive, m->span));
                   }
                 },
                 [&](const comp::Apply& x) {
                   for (auto& f : effect_transitions(x.fun)) out.push_back(mk::app(x.arg, f, m->span));
                 },
                 [&](const comp::Proj& x) {
                   for (auto& f : effect_transitions(x.of)) out.push_back(mk::proj(x.tag, f, m->span));
                 },
                 [&](const auto&) {},
             },
             m->node);
  return out;
}

bool shrink_check(const CType& candidate, const CType& wanted, const ConvOptions& opts,
                  const TypeCtx& ctx) {
  CType cand = normalize(candidate, opts);
  Comparator cmp(opts, ctx);
  return shrink_search<CType>(wanted, opts, [&](const CType& w) { return cmp.ctype(cand, w); });
}
bool shrink_check(const VType& candidate, const VType& wanted, const ConvOptions& opts,
                  const TypeCtx& ctx) {
  VType cand = normalize(candidate, opts);
  Comparator cmp(opts, ctx);
  return shrink_search<VType>(wanted, opts, [&](const VType& w) { return cmp.vtype(cand, w); });
}

bool shrink_any(const CType& wanted, const ConvOptions& opts,
                const std::function<bool(const CType&)>& accept) {
  return shrink_search<CType>(wanted, opts, accept);
}

}  // namespace dcbpv
