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

#include "dcbpv/typecheck.hpp"

#include <fmt/core.h>

#include <json.hpp>

#include "dcbpv/overloaded.hpp"
#include "dcbpv/printer.hpp"

namespace dcbpv {

std::string_view variant_name(Variant v) { return v == Variant::Minus ? "minus" : "plus"; }

std::string_view error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::Mismatch: return "Mismatch";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::NotASum: return "NotASum";
    case ErrorKind::MotiveRequired: return "MotiveRequired";
    case ErrorKind::DependentSeqInMinus: return "DependentSeqInMinus";
    case ErrorKind::EffectDisabled: return "EffectDisabled";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::ShrinkFailed: return "ShrinkFailed";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

TypeError::TypeError(ErrorKind kind, std::string message, std::string path, SourceSpan span,
                     std::string expected, std::string found)
    : std::runtime_error(fmt::format("{}: {}", error_kind_name(kind), message)),
      kind_(kind),
      message_(std::move(message)),
      path_(std::move(path)),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string TypeError::render(std::string_view file) const {
  std::string out = fmt::format("type error [{}]: {}\n", error_kind_name(kind_), message_);
  if (span_.known()) {
    out += fmt::format("  --> {}:{}:{}\n", file.empty() ? "<input>" : file, span_.line,
                       span_.column);
  }
  out += fmt::format("  at {}\n", path_);
  if (!expected_.empty()) out += fmt::format("  expected: {}\n", expected_);
  if (!found_.empty()) out += fmt::format("  found:    {}\n", found_);
  return out;
}

std::string TypeError::json() const {
  nlohmann::json j = {{"kind", error_kind_name(kind_)}, {"message", message_}, {"path", path_}};
  if (span_.known()) {
    j["span"] = {{"line", span_.line},
                 {"column", span_.column},
                 {"begin", span_.begin},
                 {"end", span_.end}};
  } else {
    j["span"] = nullptr;
  }
  j["expected"] = expected_.empty() ? nlohmann::json(nullptr) : nlohmann::json(expected_);
  j["found"] = found_.empty() ? nlohmann::json(nullptr) : nlohmann::json(found_);
  return j.dump();
}

Context Context::extend(VType a, std::string name) const {
  Context c = *this;
  while (c.names.size() < c.values.size()) {
    c.names.insert(c.names.begin(), fmt::format("v{}", c.values.size() - c.names.size() - 1));
  }
  if (name.empty()) name = fmt::format("x{}", c.values.size());
  c.values.push_back(std::move(a));
  c.names.push_back(std::move(name));
  if (c.comp_slot) c.comp_slot = shift(*c.comp_slot, 0, 1);
  return c;
}

VType Context::lookup(std::size_t i) const {
  return shift(values.at(values.size() - 1 - i), 0, static_cast<long>(i) + 1);
}

namespace {

template <typename Alt, typename T>
const Alt* as(const T& t) {
  return std::get_if<Alt>(&t->node);
}

Context prefix(const Context& ctx, std::size_t n) {
  Context c;
  c.values.assign(ctx.values.begin(), ctx.values.begin() + static_cast<long>(n));
  std::size_t pad = ctx.values.size() - std::min(ctx.names.size(), ctx.values.size());
  for (std::size_t i = 0; i < n; ++i) {
    c.names.push_back(i < pad ? fmt::format("v{}", i) : ctx.names[i - pad]);
  }
  return c;
}

class Checker {
 public:
  Checker(const EffectSignature& sig, const CheckOptions& opts) : sig_(sig), opts_(opts) {}

  // ---- errors and paths ----

  struct Seg {
    Checker& c;
    Seg(Checker& c, std::string s) : c(c) { c.path_.push_back(std::move(s)); }
    ~Seg() { c.path_.pop_back(); }
  };

  std::string path() const {
    std::string p = "root";
    for (const auto& s : path_) p += "/" + s;
    return p;
  }

  [[noreturn]] void fail(ErrorKind k, const std::string& msg, const SourceSpan& span,
                         std::string expected = {}, std::string found = {}) const {
    throw TypeError(k, msg, path(), span, std::move(expected), std::move(found));
  }

  static Names names(const Context& ctx) { return prefix(ctx, ctx.values.size()).names; }

  template <typename T>
  std::string pp(const Context& ctx, const T& t) const {
    return show(t, names(ctx));
  }

  template <typename T>
  bool conv(const Context& ctx, const T& a, const T& b) const {
    return convertible(a, b, opts_.conv, ctx.values);
  }

  template <typename T>
  void require_conv(const Context& ctx, const T& expected, const T& found,
                    const SourceSpan& span, const char* what) const {
    if (!conv(ctx, expected, found)) {
      fail(ErrorKind::Mismatch, fmt::format("{} does not match", what), span,
           pp(ctx, expected), pp(ctx, found));
    }
  }

  void require_effect(Effect e, const SourceSpan& span) const {
    if (!sig_.enables(e)) {
      fail(ErrorKind::EffectDisabled,
           fmt::format("effect '{}' is not enabled by the signature", effect_name(e)), span);
    }
  }

  bool plus() const { return opts_.variant == Variant::Plus; }

  // ---- types ----

  void wf(const Context& ctx, const VType& a) {
    std::visit(overloaded{
                   [&](const vt::U& x) {
                     Seg s(*this, "U");
                     wf(ctx, x.body);
                   },
                   [&](const vt::Unit&) {},
                   [&](const vt::Sum& x) {
                     for (std::size_t i = 0; i < x.arms.size(); ++i) {
                       Seg s(*this, fmt::format("arm{}", i + 1));
                       wf(ctx, x.arms[i]);
                     }
                   },
                   [&](const vt::Sigma& x) {
                     {
                       Seg s(*this, "first");
                       wf(ctx, x.first);
                     }
                     Seg s(*this, "second");
                     wf(ctx.extend(x.first), x.second);
                   },
                   [&](const vt::Id& x) {
                     {
                       Seg s(*this, "carrier");
                       wf(ctx, x.carrier);
                     }
                     {
                       Seg s(*this, "lhs");
                       check(ctx, x.lhs, x.carrier);
                     }
                     Seg s(*this, "rhs");
                     check(ctx, x.rhs, x.carrier);
                   },
               },
               a->node);
  }

  void wf(const Context& ctx, const CType& b) {
    std::visit(overloaded{
                   [&](const ct::F& x) {
                     Seg s(*this, "F");
                     wf(ctx, x.returns);
                   },
                   [&](const ct::Prod& x) {
                     for (std::size_t i = 0; i < x.arms.size(); ++i) {
                       Seg s(*this, fmt::format("arm{}", i + 1));
                       wf(ctx, x.arms[i]);
                     }
                   },
                   [&](const ct::Pi& x) {
                     {
                       Seg s(*this, "domain");
                       wf(ctx, x.domain);
                     }
                     Seg s(*this, "codomain");
                     wf(ctx.extend(x.domain), x.codomain);
                   },
               },
               b->node);
  }

  // ---- values ----

  VType var_type(const Context& ctx, std::size_t i, const SourceSpan& span) const {
    if (i >= ctx.values.size()) {
      fail(ErrorKind::UnboundVariable,
           fmt::format("variable #{} is not bound in a context of length {}", i,
                       ctx.values.size()),
           span);
    }
    return ctx.lookup(i);
  }

  static std::optional<Value> beta_reduct(const Value& v) {
    if (const auto* x = as<val::Let>(v)) return substitute(x->body, x->bound);
    if (const auto* x = as<val::PmUnit>(v); x && as<val::Unit>(x->scrutinee)) return x->body;
    if (const auto* x = as<val::PmSum>(v)) {
      if (const auto* i = as<val::Inj>(x->scrutinee); i && i->tag < x->arms.size()) {
        return substitute(x->arms[i->tag], i->payload);
      }
    }
    if (const auto* x = as<val::PmPair>(v)) {
      if (const auto* p = as<val::Pair>(x->scrutinee)) {
        return substitute_many(x->body, {p->second, p->first});
      }
    }
    if (const auto* x = as<val::PmId>(v)) {
      if (const auto* r = as<val::Refl>(x->scrutinee)) return substitute(x->body, r->of);
    }
    return std::nullopt;
  }

  void check(const Context& ctx, const Value& v, const VType& a) {
    try {
      check_node(ctx, v, a);
    } catch (const TypeError& e) {
      if (e.kind() != ErrorKind::MotiveRequired) throw;
      auto r = beta_reduct(v);
      if (!r) throw;
      Seg s(*this, "reduct");
      check(ctx, *r, a);
    }
  }

  void check_node(const Context& ctx, const Value& v, const VType& a) {
    const SourceSpan& sp = v->span;
    std::visit(
        overloaded{
            [&](const val::Thunk& x) {
              const auto* u = as<vt::U>(a);
              if (!u) fail(ErrorKind::Mismatch, "thunk checked at a non-U type", sp, pp(ctx, a));
              Seg s(*this, "thunk");
              check(ctx, x.body, u->body);
            },
            [&](const val::Unit&) {
              if (!as<vt::Unit>(a)) {
                fail(ErrorKind::Mismatch, "unit value checked at a non-Unit type", sp, pp(ctx, a),
                     "Unit");
              }
            },
            [&](const val::Inj& x) {
              const auto* sum = as<vt::Sum>(a);
              if (!sum) {
                fail(ErrorKind::Mismatch, "injection checked at a non-sum type", sp, pp(ctx, a));
              }
              if (x.tag >= sum->arms.size()) {
                fail(ErrorKind::ArityMismatch,
                     fmt::format("tag {} out of range for a sum of {} arms", x.tag + 1,
                                 sum->arms.size()),
                     sp, pp(ctx, a));
              }
              Seg s(*this, "payload");
              check(ctx, x.payload, sum->arms[x.tag]);
            },
            [&](const val::Pair& x) {
              const auto* sg = as<vt::Sigma>(a);
              if (!sg) fail(ErrorKind::Mismatch, "pair checked at a non-Sigma type", sp, pp(ctx, a));
              {
                Seg s(*this, "first");
                check(ctx, x.first, sg->first);
              }
              Seg s(*this, "second");
              check(ctx, x.second, substitute(sg->second, x.first));
            },
            [&](const val::Refl& x) {
              const auto* id = as<vt::Id>(a);
              if (!id) fail(ErrorKind::Mismatch, "refl checked at a non-Id type", sp, pp(ctx, a));
              Seg s(*this, "refl");
              check(ctx, x.of, id->carrier);
              require_conv(ctx, id->lhs, x.of, sp, "left endpoint");
              require_conv(ctx, id->rhs, x.of, sp, "right endpoint");
            },
            [&](const val::Let& x) {
              std::optional<VType> bound;
              try {
                Seg s(*this, "bound");
                bound = infer(ctx, x.bound);
              } catch (const TypeError& e) {
                if (e.kind() != ErrorKind::MotiveRequired) throw;
              }
              if (bound) {
                try {
                  Seg s(*this, "body");
                  check(ctx.extend(*bound), x.body, shift(a, 0, 1));
                  return;
                } catch (const TypeError&) {
                  Seg s(*this, "body[bound]");
                  try {
                    check(ctx, substitute(x.body, x.bound), a);
                    return;
                  } catch (const TypeError&) {
                  }
                  throw;
                }
              }
              Seg s(*this, "body[bound]");
              check(ctx, substitute(x.body, x.bound), a);
            },
            [&](const val::PmUnit& x) {
              {
                Seg s(*this, "scrutinee");
                check(ctx, x.scrutinee, mk::unit_type());
              }
              Seg s(*this, "body");
              check(ctx, x.body, a);
            },
            [&](const val::PmSum& x) {
              const vt::Sum& sum = scrutinee_sum(ctx, x.scrutinee, x.arms.size());
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                Seg s(*this, fmt::format("arm{}", i + 1));
                check(ctx.extend(sum.arms[i]), x.arms[i], shift(a, 0, 1));
              }
            },
            [&](const val::PmPair& x) {
              auto [a1, a2] = scrutinee_sigma(ctx, x.scrutinee);
              Seg s(*this, "body");
              check(ctx.extend(a1).extend(a2), x.body, shift(a, 0, 2));
            },
            [&](const val::PmId& x) {
              VType c = scrutinee_id(ctx, x.scrutinee);
              Seg s(*this, "body");
              check(ctx.extend(c), x.body, shift(a, 0, 1));
            },
            [&](const auto&) {
              VType found = infer(ctx, v);
              require_conv(ctx, a, found, sp, "value type");
            },
        },
        v->node);
  }

  VType infer(const Context& ctx, const Value& v) {
    const SourceSpan& sp = v->span;
    return std::visit(
        overloaded{
            [&](const val::Var& x) -> VType { return var_type(ctx, x.index, sp); },
            [&](const val::Thunk& x) -> VType {
              Seg s(*this, "thunk");
              return mk::U(infer(ctx, x.body));
            },
            [&](const val::Unit&) -> VType { return mk::unit_type(); },
            [&](const val::Inj&) -> VType {
              fail(ErrorKind::MotiveRequired,
                   "the type of an injection cannot be inferred; annotate it", sp);
            },
            [&](const val::Pair& x) -> VType {
              VType a1, a2;
              {
                Seg s(*this, "first");
                a1 = infer(ctx, x.first);
              }
              Seg s(*this, "second");
              a2 = infer(ctx, x.second);
              return mk::sigma(a1, shift(a2, 0, 1));
            },
            [&](const val::Refl& x) -> VType {
              Seg s(*this, "refl");
              return mk::id(infer(ctx, x.of), x.of, x.of);
            },
            [&](const val::Let& x) -> VType {
              VType b;
              {
                Seg s(*this, "bound");
                b = infer(ctx, x.bound);
              }
              Seg s(*this, "body");
              return substitute(infer(ctx.extend(b), x.body), x.bound);
            },
            [&](const val::PmUnit& x) -> VType {
              {
                Seg s(*this, "scrutinee");
                check(ctx, x.scrutinee, mk::unit_type());
              }
              Seg s(*this, "body");
              return infer(ctx, x.body);
            },
            [&](const val::PmSum& x) -> VType {
              const vt::Sum& sum = scrutinee_sum(ctx, x.scrutinee, x.arms.size());
              std::optional<VType> out;
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                Seg s(*this, fmt::format("arm{}", i + 1));
                VType t = strengthen(infer(ctx.extend(sum.arms[i]), x.arms[i]), 1, x.arms[i]->span);
                if (!out) {
                  out = t;
                } else {
                  require_conv(ctx, *out, t, x.arms[i]->span, "arm type");
                }
              }
              if (!out) fail(ErrorKind::MotiveRequired, "empty pattern match needs a type", sp);
              return *out;
            },
            [&](const val::PmPair& x) -> VType {
              auto [a1, a2] = scrutinee_sigma(ctx, x.scrutinee);
              Seg s(*this, "body");
              return strengthen(infer(ctx.extend(a1).extend(a2), x.body), 2, x.body->span);
            },
            [&](const val::PmId& x) -> VType {
              VType c = scrutinee_id(ctx, x.scrutinee);
              Seg s(*this, "body");
              return strengthen(infer(ctx.extend(c), x.body), 1, x.body->span);
            },
        },
        v->node);
  }

  // Drops `n` innermost binders from t; MotiveRequired if it mentions them.
  template <typename T>
  T strengthen(const T& t, std::size_t n, const SourceSpan& sp) const {
    for (std::size_t i = 0; i < n; ++i) {
      if (occurs_free(t, i)) {
        fail(ErrorKind::MotiveRequired,
             "the result type depends on a pattern variable; give a motive", sp);
      }
    }
    return shift(t, n, -static_cast<long>(n));
  }

  const vt::Sum& scrutinee_sum(const Context& ctx, const Value& v, std::size_t arms) {
    Seg s(*this, "scrutinee");
    VType t = infer(ctx, v);
    const auto* sum = as<vt::Sum>(t);
    if (!sum) fail(ErrorKind::NotASum, "pattern match on a value of non-sum type", v->span, {}, pp(ctx, t));
    if (sum->arms.size() != arms) {
      fail(ErrorKind::ArityMismatch,
           fmt::format("{} arms given for a sum of {} arms", arms, sum->arms.size()), v->span,
           {}, pp(ctx, t));
    }
    held_.push_back(t);
    return *sum;
  }

  std::pair<VType, VType> scrutinee_sigma(const Context& ctx, const Value& v) {
    Seg s(*this, "scrutinee");
    VType t = infer(ctx, v);
    const auto* sg = as<vt::Sigma>(t);
    if (!sg) fail(ErrorKind::Mismatch, "pair pattern on a value of non-Sigma type", v->span, {}, pp(ctx, t));
    return {sg->first, sg->second};
  }

  // Carrier, lhs and rhs of the scrutinee's identity type.
  const vt::Id& scrutinee_id_full(const Context& ctx, const Value& v) {
    Seg s(*this, "scrutinee");
    VType t = infer(ctx, v);
    const auto* id = as<vt::Id>(t);
    if (!id) fail(ErrorKind::Mismatch, "refl pattern on a value of non-Id type", v->span, {}, pp(ctx, t));
    held_.push_back(t);
    return *id;
  }

  VType scrutinee_id(const Context& ctx, const Value& v) {
    return scrutinee_id_full(ctx, v).carrier;
  }

  // ---- computations ----

  // A beta-redex whose parts cannot be inferred is checked through its
  // reduct.
  static Comp unforce(Comp m) {
    while (const auto* f = as<comp::Force>(m)) {
      const auto* t = as<val::Thunk>(f->thunk);
      if (!t) break;
      m = t->body;
    }
    return m;
  }

  static std::optional<Comp> beta_reduct(const Comp& m) {
    if (const auto* x = as<comp::PmSum>(m)) {
      if (const auto* i = as<val::Inj>(x->scrutinee); i && i->tag < x->arms.size()) {
        return substitute(x->arms[i->tag], i->payload);
      }
    } else if (const auto* x = as<comp::PmPair>(m)) {
      if (const auto* p = as<val::Pair>(x->scrutinee)) {
        return substitute_many(x->body, {p->second, p->first});
      }
    } else if (const auto* x = as<comp::PmId>(m)) {
      if (const auto* r = as<val::Refl>(x->scrutinee)) return substitute(x->body, r->of);
    } else if (const auto* x = as<comp::Proj>(m)) {
      Comp of = unforce(x->of);
      if (const auto* t = as<comp::Tuple>(of); t && x->tag < t->arms.size()) {
        return t->arms[x->tag];
      }
    } else if (const auto* x = as<comp::Apply>(m)) {
      Comp fun = unforce(x->fun);
      if (const auto* l = as<comp::Lambda>(fun)) return substitute(l->body, x->arg);
    } else if (const auto* x = as<comp::Force>(m)) {
      if (const auto* t = as<val::Thunk>(x->thunk)) return t->body;
    } else if (const auto* x = as<comp::To>(m)) {
      if (const auto* r = as<comp::Return>(x->head); r && !x->motive) {
        return substitute(x->body, r->value);
      }
    }
    return std::nullopt;
  }

  void check(const Context& ctx, const Comp& m, const CType& c) {
    try {
      check_node(ctx, m, c);
    } catch (const TypeError& e) {
      if (e.kind() != ErrorKind::MotiveRequired) throw;
      auto r = beta_reduct(m);
      if (!r) throw;
      Seg s(*this, "reduct");
      check(ctx, *r, c);
    }
  }

  CType infer(const Context& ctx, const Comp& m) {
    try {
      return infer_node(ctx, m);
    } catch (const TypeError& e) {
      if (e.kind() != ErrorKind::MotiveRequired) throw;
      auto r = beta_reduct(m);
      if (!r) throw;
      Seg s(*this, "reduct");
      return infer(ctx, *r);
    }
  }

  void check_node(const Context& ctx, const Comp& m, const CType& c) {
    const SourceSpan& sp = m->span;
    std::visit(
        overloaded{
            [&](const comp::Return& x) {
              const auto* f = as<ct::F>(c);
              if (!f) fail(ErrorKind::Mismatch, "return checked at a non-F type", sp, pp(ctx, c));
              Seg s(*this, "return");
              check(ctx, x.value, f->returns);
            },
            [&](const comp::Tuple& x) {
              const auto* p = as<ct::Prod>(c);
              if (!p) fail(ErrorKind::Mismatch, "tuple checked at a non-product type", sp, pp(ctx, c));
              if (p->arms.size() != x.arms.size()) {
                fail(ErrorKind::ArityMismatch,
                     fmt::format("{} components given for a product of {}", x.arms.size(),
                                 p->arms.size()),
                     sp, pp(ctx, c));
              }
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                Seg s(*this, fmt::format("arm{}", i + 1));
                check(ctx, x.arms[i], p->arms[i]);
              }
            },
            [&](const comp::Lambda& x) {
              const auto* p = as<ct::Pi>(c);
              if (!p) fail(ErrorKind::Mismatch, "lambda checked at a non-Pi type", sp, pp(ctx, c));
              {
                Seg s(*this, "domain");
                wf(ctx, x.domain);
                require_conv(ctx, p->domain, x.domain, sp, "lambda domain");
              }
              Seg s(*this, "body");
              check(ctx.extend(x.domain), x.body, p->codomain);
            },
            [&](const comp::To& x) {
              if (x.motive) {
                CType t = seq_motive(ctx, m, x);
                require_conv(ctx, c, t, sp, "sequencing result type");
              } else {
                seq_check(ctx, x, c, sp);
              }
            },
            [&](const comp::Let& x) {
              VType b = let_bound(ctx, x.bound, x.binder);
              if (!b) {
                Seg s(*this, "body[bound]");
                check(ctx, substitute(x.body, x.bound), c);
                return;
              }
              try {
                Seg s(*this, "body");
                check(ctx.extend(b), x.body, shift(c, 0, 1));
              } catch (const TypeError&) {
                try {
                  Seg s(*this, "body[bound]");
                  check(ctx, substitute(x.body, x.bound), c);
                  return;
                } catch (const TypeError&) {
                }
                throw;
              }
            },
            [&](const comp::PmUnit& x) {
              {
                Seg s(*this, "scrutinee");
                check(ctx, x.scrutinee, mk::unit_type());
              }
              if (x.motive) {
                require_conv(ctx, c, pm_unit_motive(ctx, x), sp, "match result type");
                return;
              }
              Seg s(*this, "body");
              check(ctx, x.body, c);
            },
            [&](const comp::PmSum& x) {
              if (x.motive) {
                require_conv(ctx, c, pm_sum_motive(ctx, x), sp, "match result type");
                return;
              }
              const vt::Sum& sum = scrutinee_sum(ctx, x.scrutinee, x.arms.size());
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                Seg s(*this, fmt::format("arm{}", i + 1));
                check(ctx.extend(sum.arms[i]), x.arms[i], shift(c, 0, 1));
              }
            },
            [&](const comp::PmPair& x) {
              if (x.motive) {
                require_conv(ctx, c, pm_pair_motive(ctx, x), sp, "match result type");
                return;
              }
              auto [a1, a2] = scrutinee_sigma(ctx, x.scrutinee);
              Seg s(*this, "body");
              check(ctx.extend(a1).extend(a2), x.body, shift(c, 0, 2));
            },
            [&](const comp::PmId& x) {
              if (x.motive) {
                require_conv(ctx, c, pm_id_motive(ctx, x), sp, "match result type");
                return;
              }
              VType carrier = scrutinee_id(ctx, x.scrutinee);
              Seg s(*this, "body");
              check(ctx.extend(carrier), x.body, shift(c, 0, 1));
            },
            [&](const comp::Diverge&) { require_effect(Effect::Diverge, sp); },
            [&](const comp::Error& x) {
              require_effect(Effect::Error, sp);
              if (!sig_.has_error(x.name)) {
                fail(ErrorKind::EffectDisabled, fmt::format("unknown error '{}'", x.name), sp);
              }
            },
            [&](const comp::Mu& x) {
              require_effect(Effect::Rec, sp);
              if (x.type) {
                Seg s(*this, "type");
                wf(ctx, *x.type);
                require_conv(ctx, c, *x.type, sp, "recursion annotation");
              }
              Seg s(*this, "body");
              check(ctx.extend(mk::U(c), "z"), x.body, shift(c, 0, 1));
            },
            [&](const comp::Print& x) {
              print_ok(x, sp);
              Seg s(*this, "body");
              check(ctx, x.body, c);
            },
            [&](const comp::Choose& x) {
              require_effect(Effect::Choose, sp);
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                Seg s(*this, fmt::format("arm{}", i + 1));
                check(ctx, x.arms[i], c);
              }
            },
            [&](const comp::Write& x) {
              write_ok(x, sp);
              Seg s(*this, "body");
              check(ctx, x.body, c);
            },
            [&](const comp::Read& x) {
              read_ok(x, sp);
              for (const auto& arm : x.arms) {
                Seg s(*this, arm.state);
                check(ctx, arm.body, c);
              }
            },
            [&](const auto&) {
              CType found = infer(ctx, m);
              require_conv(ctx, c, found, sp, "computation type");
            },
        },
        m->node);
  }

  CType infer_node(const Context& ctx, const Comp& m) {
    const SourceSpan& sp = m->span;
    return std::visit(
        overloaded{
            [&](const comp::Return& x) -> CType {
              Seg s(*this, "return");
              return mk::F(infer(ctx, x.value));
            },
            [&](const comp::Force& x) -> CType {
              Seg s(*this, "force");
              VType t = infer(ctx, x.thunk);
              const auto* u = as<vt::U>(t);
              if (!u) fail(ErrorKind::Mismatch, "force of a value of non-U type", sp, {}, pp(ctx, t));
              return u->body;
            },
            [&](const comp::Tuple& x) -> CType {
              std::vector<CType> arms;
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                Seg s(*this, fmt::format("arm{}", i + 1));
                arms.push_back(infer(ctx, x.arms[i]));
              }
              return mk::prod(std::move(arms));
            },
            [&](const comp::Proj& x) -> CType {
              CType t;
              {
                Seg s(*this, "of");
                t = infer(ctx, x.of);
              }
              const auto* p = as<ct::Prod>(t);
              if (!p) fail(ErrorKind::Mismatch, "projection from a non-product", sp, {}, pp(ctx, t));
              if (x.tag >= p->arms.size()) {
                fail(ErrorKind::ArityMismatch,
                     fmt::format("projection {} out of range for a product of {}", x.tag + 1,
                                 p->arms.size()),
                     sp, {}, pp(ctx, t));
              }
              return p->arms[x.tag];
            },
            [&](const comp::Lambda& x) -> CType {
              {
                Seg s(*this, "domain");
                wf(ctx, x.domain);
              }
              Seg s(*this, "body");
              return mk::pi(x.domain, infer(ctx.extend(x.domain), x.body));
            },
            [&](const comp::Apply& x) -> CType {
              CType t;
              {
                Seg s(*this, "fun");
                t = infer(ctx, x.fun);
              }
              const auto* p = as<ct::Pi>(t);
              if (!p) {
                fail(ErrorKind::NotAFunction, "argument pushed onto a non-function", sp, {},
                     pp(ctx, t));
              }
              {
                Seg s(*this, "arg");
                check(ctx, x.arg, p->domain);
              }
              return substitute(p->codomain, x.arg);
            },
            [&](const comp::To& x) -> CType {
              if (x.motive) return seq_motive(ctx, m, x);
              return seq_infer(ctx, x, sp);
            },
            [&](const comp::Let& x) -> CType {
              VType b = let_bound(ctx, x.bound, x.binder);
              if (!b) {
                Seg s(*this, "body[bound]");
                return infer(ctx, substitute(x.body, x.bound));
              }
              Seg s(*this, "body");
              return substitute(infer(ctx.extend(b), x.body), x.bound);
            },
            [&](const comp::PmUnit& x) -> CType {
              {
                Seg s(*this, "scrutinee");
                check(ctx, x.scrutinee, mk::unit_type());
              }
              if (x.motive) return pm_unit_motive(ctx, x);
              Seg s(*this, "body");
              return infer(ctx, x.body);
            },
            [&](const comp::PmSum& x) -> CType {
              if (x.motive) return pm_sum_motive(ctx, x);
              const vt::Sum& sum = scrutinee_sum(ctx, x.scrutinee, x.arms.size());
              std::optional<CType> out;
              for (std::size_t i = 0; i < x.arms.size(); ++i) {
                Seg s(*this, fmt::format("arm{}", i + 1));
                if (out) {
                  check(ctx.extend(sum.arms[i]), x.arms[i], shift(*out, 0, 1));
                } else {
                  out = strengthen(infer(ctx.extend(sum.arms[i]), x.arms[i]), 1, x.arms[i]->span);
                }
              }
              if (!out) fail(ErrorKind::MotiveRequired, "empty pattern match needs a motive", sp);
              return *out;
            },
            [&](const comp::PmPair& x) -> CType {
              if (x.motive) return pm_pair_motive(ctx, x);
              auto [a1, a2] = scrutinee_sigma(ctx, x.scrutinee);
              Seg s(*this, "body");
              return strengthen(infer(ctx.extend(a1).extend(a2), x.body), 2, x.body->span);
            },
            [&](const comp::PmId& x) -> CType {
              if (x.motive) return pm_id_motive(ctx, x);
              VType carrier = scrutinee_id(ctx, x.scrutinee);
              Seg s(*this, "body");
              return strengthen(infer(ctx.extend(carrier), x.body), 1, x.body->span);
            },
            [&](const comp::Diverge&) -> CType {
              require_effect(Effect::Diverge, sp);
              fail(ErrorKind::MotiveRequired, "diverge has every type; annotate it", sp);
            },
            [&](const comp::Error& x) -> CType {
              require_effect(Effect::Error, sp);
              if (!sig_.has_error(x.name)) {
                fail(ErrorKind::EffectDisabled, fmt::format("unknown error '{}'", x.name), sp);
              }
              fail(ErrorKind::MotiveRequired, "error has every type; annotate it", sp);
            },
            [&](const comp::Mu& x) -> CType {
              require_effect(Effect::Rec, sp);
              if (!x.type) fail(ErrorKind::MotiveRequired, "recursion needs a type annotation", sp);
              check(ctx, m, *x.type);
              return *x.type;
            },
            [&](const comp::Print& x) -> CType {
              print_ok(x, sp);
              Seg s(*this, "body");
              return infer(ctx, x.body);
            },
            [&](const comp::Choose& x) -> CType {
              require_effect(Effect::Choose, sp);
              if (x.arms.empty()) fail(ErrorKind::MotiveRequired, "empty choice needs a type", sp);
              CType out;
              {
                Seg s(*this, "arm1");
                out = infer(ctx, x.arms[0]);
              }
              for (std::size_t i = 1; i < x.arms.size(); ++i) {
                Seg s(*this, fmt::format("arm{}", i + 1));
                check(ctx, x.arms[i], out);
              }
              return out;
            },
            [&](const comp::Write& x) -> CType {
              write_ok(x, sp);
              Seg s(*this, "body");
              return infer(ctx, x.body);
            },
            [&](const comp::Read& x) -> CType {
              read_ok(x, sp);
              CType out;
              {
                Seg s(*this, x.arms[0].state);
                out = infer(ctx, x.arms[0].body);
              }
              for (std::size_t i = 1; i < x.arms.size(); ++i) {
                Seg s(*this, x.arms[i].state);
                check(ctx, x.arms[i].body, out);
              }
              return out;
            },
        },
        m->node);
  }

  // ---- effect side conditions ----

  void print_ok(const comp::Print& x, const SourceSpan& sp) const {
    require_effect(Effect::Print, sp);
    if (!sig_.has_element(x.element)) {
      fail(ErrorKind::EffectDisabled,
           fmt::format("'{}' is not an element of the printing monoid", x.element), sp);
    }
  }

  void write_ok(const comp::Write& x, const SourceSpan& sp) const {
    require_effect(Effect::State, sp);
    if (!sig_.state_index(x.state)) {
      fail(ErrorKind::EffectDisabled, fmt::format("unknown state '{}'", x.state), sp);
    }
  }

  void read_ok(const comp::Read& x, const SourceSpan& sp) const {
    require_effect(Effect::State, sp);
    if (x.arms.size() != sig_.states.size()) {
      fail(ErrorKind::ArityMismatch,
           fmt::format("read has {} arms but the signature has {} states", x.arms.size(),
                       sig_.states.size()),
           sp);
    }
    for (std::size_t i = 0; i < x.arms.size(); ++i) {
      if (x.arms[i].state != sig_.states[i]) {
        fail(ErrorKind::ArityMismatch,
             fmt::format("read arm {} is for '{}', expected '{}'", i + 1, x.arms[i].state,
                         sig_.states[i]),
             sp);
      }
    }
  }

  // ---- let ----

  // Type of a let-bound value, or null when it is not inferable.
  VType let_bound(const Context& ctx, const Value& v, const std::optional<VType>& binder) {
    Seg s(*this, "bound");
    if (binder) {
      wf(ctx, *binder);
      check(ctx, v, *binder);
      return *binder;
    }
    try {
      return infer(ctx, v);
    } catch (const TypeError& e) {
      if (e.kind() != ErrorKind::MotiveRequired) throw;
      return nullptr;
    }
  }

  // ---- sequencing ----

  // Type of the head as F A, honouring the binder annotation.
  VType seq_head(const Context& ctx, const comp::To& x, const SourceSpan& sp) {
    Seg s(*this, "head");
    if (x.binder) {
      wf(ctx, *x.binder);
      check(ctx, x.head, mk::F(*x.binder));
      return *x.binder;
    }
    CType t = infer(ctx, x.head);
    const auto* f = as<ct::F>(t);
    if (!f) {
      fail(ErrorKind::Mismatch, "the head of a sequencing must have an F type", sp, {},
           pp(ctx, t));
    }
    return f->returns;
  }

  std::optional<Value> head_return(const comp::To& x) const {
    Comp h = normalize(x.head, opts_.conv);
    if (const auto* r = as<comp::Return>(h)) return r->value;
    return std::nullopt;
  }

  void seq_check(const Context& ctx, const comp::To& x, const CType& c, const SourceSpan& sp) {
    VType a = seq_head(ctx, x, sp);
    try {
      Seg s(*this, "body");
      check(ctx.extend(a), x.body, shift(c, 0, 1));
    } catch (const TypeError&) {
      auto v = head_return(x);
      if (!v) throw;
      Seg s(*this, "body[head]");
      try {
        CType b = infer(ctx.extend(a), x.body);
        if (conv(ctx, c, substitute(b, *v))) return;
      } catch (const TypeError&) {
      }
      try {
        check(ctx, substitute(x.body, *v), c);
        return;
      } catch (const TypeError&) {
      }
      throw;
    }
  }

  CType seq_infer(const Context& ctx, const comp::To& x, const SourceSpan& sp) {
    VType a = seq_head(ctx, x, sp);
    CType b;
    {
      Seg s(*this, "body");
      b = infer(ctx.extend(a), x.body);
    }
    if (!occurs_free(b, 0)) return shift(b, 1, -1);
    if (auto v = head_return(x)) return substitute(b, *v);
    Seg s(*this, "body");
    fail(ErrorKind::MotiveRequired,
         "the continuation's type depends on the bound variable; give a motive", sp, {},
         pp(ctx.extend(a), b));
  }

  // Dependent sequencing: M to x. N as [z, Γ' |- B]. The last |Γ'| entries of
  // the context must be Γ'[thunk M/z].
  CType seq_motive(const Context& ctx, const Comp& whole, const comp::To& x) {
    const SourceSpan& sp = whole->span;
    const Motive& mot = *x.motive;
    std::size_t k = mot.extension.size();
    std::size_t n = ctx.values.size();
    if (k > n) {
      fail(ErrorKind::ArityMismatch,
           fmt::format("motive extends {} entries but the context has {}", k, n), sp);
    }
    long dk = -static_cast<long>(k);
    Context outer = prefix(ctx, n - k);
    Comp head;
    std::optional<VType> binder;
    try {
      head = shift(x.head, 0, dk);
      if (x.binder) binder = shift(*x.binder, 0, dk);
    } catch (const IndexUnderflow&) {
      fail(ErrorKind::UnboundVariable, "the head mentions variables of the motive's extension",
           sp);
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (occurs_free(mot.extension[i], i)) {
        if (!plus()) dep_minus(sp);
      }
    }
    if (occurs_free(mot.result, k) && !plus()) dep_minus(sp);

    comp::To shifted{head, x.body, binder, std::nullopt};
    VType a = seq_head(outer, shifted, sp);
    Value th = mk::thunk(head);

    // z : U F A, then the extension.
    Context zc = outer.extend(mk::U(mk::F(a)), "z");
    {
      Seg s(*this, "motive");
      for (std::size_t i = 0; i < k; ++i) {
        wf(zc, mot.extension[i]);
        zc = zc.extend(mot.extension[i]);
      }
      wf(zc, mot.result);
    }
    for (std::size_t i = 0; i < k; ++i) {
      VType want = substitute_at(mot.extension[i], i, th);
      Context pre = prefix(ctx, n - k + i);
      if (!conv(pre, ctx.values[n - k + i], want)) {
        fail(ErrorKind::Mismatch,
             fmt::format("context entry {} does not match the motive's extension", n - k + i), sp,
             pp(pre, want), pp(pre, ctx.values[n - k + i]));
      }
    }

    // Check N in Γ, x : A, Γ'[tr x/z] against B[tr x/z].
    Context bc = outer.extend(a, "x");
    for (std::size_t i = 0; i < k; ++i) {
      VType e = map_vars(mot.extension[i], [i](std::size_t j) {
        return j == i ? mk::tr(mk::var(j)) : mk::var(j);
      });
      bc = bc.extend(e);
    }
    CType target = map_vars(mot.result, [k](std::size_t j) {
      return j == k ? mk::tr(mk::var(j)) : mk::var(j);
    });
    Comp body = map_vars(x.body, [k](std::size_t j) {
      if (j == 0) return mk::var(k);
      if (j <= k) return mk::var(j - 1);
      return mk::var(j);
    });
    {
      Seg s(*this, "body");
      check(bc, body, target);
    }
    return substitute_at(mot.result, k, th);
  }

  [[noreturn]] void dep_minus(const SourceSpan& sp) const {
    fail(ErrorKind::DependentSeqInMinus,
         "the motive of a sequencing mentions the thunked head; only allowed in the plus variant",
         sp);
  }

  // ---- dependent pattern matching ----

  void no_extension(const Motive& m, const SourceSpan& sp) const {
    if (!m.extension.empty()) {
      fail(ErrorKind::ArityMismatch, "pattern-match motives take no context extension", sp);
    }
  }

  CType pm_unit_motive(const Context& ctx, const comp::PmUnit& x) {
    const Motive& mot = *x.motive;
    no_extension(mot, x.scrutinee->span);
    {
      Seg s(*this, "motive");
      wf(ctx.extend(mk::unit_type(), "z"), mot.result);
    }
    Seg s(*this, "body");
    check(ctx, x.body, substitute(mot.result, mk::unit()));
    return substitute(mot.result, x.scrutinee);
  }

  CType pm_sum_motive(const Context& ctx, const comp::PmSum& x) {
    const Motive& mot = *x.motive;
    no_extension(mot, x.scrutinee->span);
    const vt::Sum& sum = scrutinee_sum(ctx, x.scrutinee, x.arms.size());
    VType st = held_.back();
    {
      Seg s(*this, "motive");
      wf(ctx.extend(st, "z"), mot.result);
    }
    for (std::size_t i = 0; i < x.arms.size(); ++i) {
      Seg s(*this, fmt::format("arm{}", i + 1));
      CType target = map_vars(mot.result, [i](std::size_t j) {
        return j == 0 ? mk::inj(i, mk::var(0)) : mk::var(j);
      });
      check(ctx.extend(sum.arms[i]), x.arms[i], target);
    }
    return substitute(mot.result, x.scrutinee);
  }

  CType pm_pair_motive(const Context& ctx, const comp::PmPair& x) {
    const Motive& mot = *x.motive;
    no_extension(mot, x.scrutinee->span);
    VType st;
    {
      Seg s(*this, "scrutinee");
      st = infer(ctx, x.scrutinee);
    }
    const auto* sg = as<vt::Sigma>(st);
    if (!sg) {
      fail(ErrorKind::Mismatch, "pair pattern on a value of non-Sigma type", x.scrutinee->span, {},
           pp(ctx, st));
    }
    {
      Seg s(*this, "motive");
      wf(ctx.extend(st, "z"), mot.result);
    }
    CType target = map_vars(mot.result, [](std::size_t j) {
      return j == 0 ? mk::pair(mk::var(1), mk::var(0)) : mk::var(j + 1);
    });
    {
      Seg s(*this, "body");
      check(ctx.extend(sg->first).extend(sg->second), x.body, target);
    }
    return substitute(mot.result, x.scrutinee);
  }

  CType pm_id_motive(const Context& ctx, const comp::PmId& x) {
    const Motive& mot = *x.motive;
    no_extension(mot, x.scrutinee->span);
    const vt::Id& id = scrutinee_id_full(ctx, x.scrutinee);
    VType carrier = id.carrier;
    Value lhs = id.lhs, rhs = id.rhs;
    {
      Seg s(*this, "motive");
      Context mc = ctx.extend(carrier, "x").extend(shift(carrier, 0, 1), "x'");
      mc = mc.extend(mk::id(shift(carrier, 0, 2), mk::var(1), mk::var(0)), "p");
      wf(mc, mot.result);
    }
    CType target = map_vars(mot.result, [](std::size_t j) {
      if (j == 0) return mk::refl(mk::var(0));
      if (j <= 2) return mk::var(0);
      return mk::var(j - 2);
    });
    {
      Seg s(*this, "body");
      check(ctx.extend(carrier), x.body, target);
    }
    return substitute_many(mot.result, {x.scrutinee, rhs, lhs});
  }

  // ---- stacks ----

  void check_stack(const Context& ctx, CType hole, Stack k, const CType& out) {
    std::size_t depth = 0;
    for (; k; k = k->rest, ++depth) {
      Seg s(*this, fmt::format("frame{}", depth));
      hole = std::visit(
          overloaded{
              [&](const frame::Seq& f) -> CType {
                const auto* fa = as<ct::F>(hole);
                if (!fa) fail(ErrorKind::Mismatch, "sequencing frame needs an F hole", {}, {}, pp(ctx, hole));
                if (f.binder) require_conv(ctx, *f.binder, fa->returns, {}, "frame binder");
                if (f.motive && (!f.motive->extension.empty() || occurs_free(f.motive->result, 0))) {
                  fail(ErrorKind::MotiveRequired,
                       "a dependent frame can only be typed together with its head", {});
                }
                Context bc = ctx.extend(fa->returns, "x");
                if (f.motive) {
                  CType b = shift(f.motive->result, 1, -1);
                  check(bc, f.body, shift(b, 0, 1));
                  return b;
                }
                return strengthen(infer(bc, f.body), 1, f.body->span);
              },
              [&](const frame::Proj& f) -> CType {
                const auto* p = as<ct::Prod>(hole);
                if (!p) fail(ErrorKind::Mismatch, "projection frame needs a product hole", {}, {}, pp(ctx, hole));
                if (f.tag >= p->arms.size()) {
                  fail(ErrorKind::ArityMismatch, "projection frame out of range", {}, {}, pp(ctx, hole));
                }
                return p->arms[f.tag];
              },
              [&](const frame::Arg& f) -> CType {
                const auto* p = as<ct::Pi>(hole);
                if (!p) fail(ErrorKind::NotAFunction, "argument frame needs a Pi hole", {}, {}, pp(ctx, hole));
                check(ctx, f.arg, p->domain);
                return substitute(p->codomain, f.arg);
              },
          },
          k->top);
    }
    Seg s(*this, "nil");
    require_conv(ctx, out, hole, {}, "stack result type");
  }

  // Top-level computation check with the coercion retry.
  void check_top(const Context& ctx, const Comp& m, const CType& c) {
    try {
      check(ctx, m, c);
    } catch (const TypeError& e) {
      if (!(plus() && opts_.allow_shrink && sig_.any_enabled()) || e.kind() != ErrorKind::Mismatch) {
        throw;
      }
      bool ok = shrink_any(c, opts_.conv, [&](const CType& w) {
        try {
          check(ctx, m, w);
          return true;
        } catch (const TypeError&) {
          return false;
        }
      });
      if (!ok) {
        throw TypeError(ErrorKind::ShrinkFailed,
                        "no type reachable by shrinking the expected type fits: " + e.message(),
                        e.path(), e.span(), e.expected(), e.found());
      }
    }
  }

 private:
  const EffectSignature& sig_;
  const CheckOptions& opts_;
  std::vector<std::string> path_;
  // Keeps scrutinee types alive while references into them are in use.
  std::vector<VType> held_;
};

// Runs fn, mapping normalizer fuel and scoping failures to TypeError.
template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const FuelExhausted& e) {
    throw TypeError(ErrorKind::FuelExhausted, e.what(), "root", {});
  } catch (const IndexUnderflow& e) {
    throw TypeError(ErrorKind::UnboundVariable, e.what(), "root", {});
  }
}

}  // namespace

void wf_context(const Context& ctx, const EffectSignature& sig, const CheckOptions& opts) {
  guarded([&] {
    Checker c(sig, opts);
    for (std::size_t i = 0; i < ctx.values.size(); ++i) {
      Checker::Seg s(c, fmt::format("ctx{}", i));
      c.wf(prefix(ctx, i), ctx.values[i]);
    }
    if (ctx.comp_slot) {
      Checker::Seg s(c, "slot");
      c.wf(prefix(ctx, ctx.values.size()), *ctx.comp_slot);
    }
  });
}

void wf_vtype(const Context& ctx, const VType& a, const EffectSignature& sig,
              const CheckOptions& opts) {
  guarded([&] { Checker(sig, opts).wf(ctx, a); });
}

void wf_ctype(const Context& ctx, const CType& b, const EffectSignature& sig,
              const CheckOptions& opts) {
  guarded([&] { Checker(sig, opts).wf(ctx, b); });
}

void check_value(const Context& ctx, const Value& v, const VType& a, const EffectSignature& sig,
                 const CheckOptions& opts) {
  guarded([&] { Checker(sig, opts).check(ctx, v, a); });
}

VType infer_value(const Context& ctx, const Value& v, const EffectSignature& sig,
                  const CheckOptions& opts) {
  return guarded([&] { return Checker(sig, opts).infer(ctx, v); });
}

void check_comp(const Context& ctx, const Comp& m, const CType& b, const EffectSignature& sig,
                const CheckOptions& opts) {
  guarded([&] { Checker(sig, opts).check_top(ctx, m, b); });
}

CType infer_comp(const Context& ctx, const Comp& m, const EffectSignature& sig,
                 const CheckOptions& opts) {
  return guarded([&] { return Checker(sig, opts).infer(ctx, m); });
}

void check_stack(const Context& ctx, const CType& hole, const Stack& k, const CType& out,
                 const EffectSignature& sig, const CheckOptions& opts) {
  guarded([&] { Checker(sig, opts).check_stack(ctx, hole, k, out); });
}

Comp plug(const Comp& m, const Stack& k) {
  Comp acc = m;
  for (Stack s = k; s; s = s->rest) {
    acc = std::visit(overloaded{
                         [&](const frame::Seq& f) { return mk::to(acc, f.body, f.binder, f.motive); },
                         [&](const frame::Proj& f) { return mk::proj(f.tag, acc); },
                         [&](const frame::Arg& f) { return mk::app(f.arg, acc); },
                     },
                     s->top);
  }
  return acc;
}

void check_config(const Context& ctx, const Comp& m, const Stack& k, const CType& c,
                  const EffectSignature& sig, const CheckOptions& opts) {
  check_comp(ctx, plug(m, k), c, sig, opts);
}

}  // namespace dcbpv
