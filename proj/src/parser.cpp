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

#include "dcbpv/parser.hpp"

#include "lexer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <fmt/core.h>

namespace dcbpv {

namespace {

using detail::lex;
using detail::Tok;
using detail::Token;

const std::set<std::string> kReserved = {
    "U",     "Unit",  "Sum",   "Sigma",  "Id",     "F",    "Prod",    "Pi",    "thunk",
    "refl",  "let",   "in",    "pm",     "as",     "return", "force", "lam",   "to",
    "print", "choose", "error", "write", "read",   "diverge", "mu"};

template <typename T>
struct Def {
  T term;
  std::size_t depth;  // number of context variables in scope at definition
};

class Parser {
 public:
  Parser(const std::string& text, EffectSignature sig, Names names)
      : toks_(lex(text)), sig_(std::move(sig)), names_(std::move(names)) {}

  ProgramFile program();
  VType whole_vtype() { return finish(vtype()); }
  CType whole_ctype() { return finish(ctype()); }
  Value whole_value() { return finish(value()); }
  Comp whole_comp() { return finish(comp()); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  EffectSignature sig_;
  Names names_;
  std::size_t context_depth_ = 0;
  std::map<std::string, Def<VType>> vtype_defs_;
  std::map<std::string, Def<CType>> ctype_defs_;
  std::map<std::string, Def<Value>> value_defs_;
  std::map<std::string, Def<Comp>> comp_defs_;

  template <typename T>
  T finish(T t) {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return t;
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(fmt::format("{} near {}", msg, near), t.span);
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  void expect(const std::string& s) {
    if (!at(s)) fail(fmt::format("expected '{}'", s));
    next();
  }
  bool accept(const std::string& s) {
    if (!at(s)) return false;
    next();
    return true;
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected an identifier");
    return next().text;
  }
  std::string binder_name() {
    std::string n = ident();
    if (kReserved.count(n)) fail(fmt::format("'{}' is a keyword", n));
    return n;
  }
  std::size_t integer() {
    if (peek().kind != Tok::Int) fail("expected an integer");
    return std::stoul(next().text);
  }
  std::size_t tag() {
    SourceSpan s = peek().span;
    std::size_t n = integer();
    if (n == 0) throw ParseError("tags start at 1", s);
    return n - 1;
  }
  SourceSpan from(const SourceSpan& start) const {
    const SourceSpan& last = toks_[pos_ == 0 ? 0 : pos_ - 1].span;
    return SourceSpan{start.begin, std::max(start.begin, last.end), start.line, start.column};
  }

  void require(Effect e, const SourceSpan& s) {
    if (!sig_.enables(e)) {
      throw ParseError(fmt::format("effect '{}' is not enabled", effect_name(e)), s);
    }
  }

  template <typename Fn>
  auto bound(const std::vector<std::string>& ns, Fn fn) {
    for (const auto& n : ns) names_.push_back(n);
    auto r = fn();
    names_.resize(names_.size() - ns.size());
    return r;
  }

  std::optional<std::size_t> lookup(const std::string& n) const {
    for (std::size_t k = names_.size(); k-- > 0;) {
      if (names_[k] == n) return names_.size() - 1 - k;
    }
    return std::nullopt;
  }

  template <typename T>
  T inline_def(const Def<T>& d) {
    return shift(d.term, static_cast<long>(names_.size() - d.depth));
  }

  // ---- types ----

  VType vtype() {
    SourceSpan s = peek().span;
    if (accept("U")) return mk::U(ctype(), from(s));
    if (accept("Sigma")) {
      std::string x = binder_name();
      expect(":");
      VType a = vtype();
      expect(".");
      VType b = bound({x}, [&] { return vtype(); });
      return mk::sigma(a, b, from(s));
    }
    if (accept("Id")) {
      VType a = vtype_atom();
      Value l = value_atom();
      Value r = value_atom();
      return mk::id(a, l, r, from(s));
    }
    return vtype_atom();
  }

  VType vtype_atom() {
    SourceSpan s = peek().span;
    if (accept("Unit")) return mk::unit_type(from(s));
    if (accept("Sum")) {
      expect("(");
      std::vector<VType> arms;
      if (!at(")")) {
        do arms.push_back(vtype());
        while (accept(","));
      }
      expect(")");
      return mk::sum(std::move(arms), from(s));
    }
    if (accept("(")) {
      VType t = vtype();
      expect(")");
      return t;
    }
    if (peek().kind == Tok::Ident && !kReserved.count(peek().text)) {
      auto it = vtype_defs_.find(peek().text);
      if (it == vtype_defs_.end()) fail("unknown value type");
      next();
      return inline_def(it->second);
    }
    fail("expected a value type");
  }

  CType ctype() {
    SourceSpan s = peek().span;
    if (accept("F")) return mk::F(vtype(), from(s));
    if (accept("Pi")) {
      std::string x = binder_name();
      expect(":");
      VType a = vtype();
      expect(".");
      CType b = bound({x}, [&] { return ctype(); });
      return mk::pi(a, b, from(s));
    }
    if (accept("Prod")) {
      expect("(");
      std::vector<CType> arms;
      if (!at(")")) {
        do arms.push_back(ctype());
        while (accept(","));
      }
      expect(")");
      return mk::prod(std::move(arms), from(s));
    }
    if (accept("(")) {
      CType t = ctype();
      expect(")");
      return t;
    }
    if (peek().kind == Tok::Ident && !kReserved.count(peek().text)) {
      auto it = ctype_defs_.find(peek().text);
      if (it == ctype_defs_.end()) fail("unknown computation type");
      next();
      return inline_def(it->second);
    }
    fail("expected a computation type");
  }

  // ---- values ----

  Value value() {
    SourceSpan s = peek().span;
    if (accept("thunk")) return mk::thunk(operand(), from(s));
    if (accept("refl")) return mk::refl(value_atom(), from(s));
    if (accept("let")) {
      std::string x = binder_name();
      expect("=");
      Value v = value();
      expect("in");
      Value body = bound({x}, [&] { return value(); });
      return mk::let_v(v, body, from(s));
    }
    if (accept("pm")) {
      Value scr = value_atom();
      expect("as");
      if (at("[")) fail("value-level pattern matches take no motive");
      return value_branches(scr, s);
    }
    return value_atom();
  }

  Value value_branches(const Value& scr, const SourceSpan& s) {
    if (at("(") && at(")", 1)) {
      next();
      next();
      expect(".");
      return mk::pm_unit_v(scr, value(), from(s));
    }
    if (accept("refl")) {
      std::string x = binder_name();
      expect(".");
      return mk::pm_id_v(scr, bound({x}, [&] { return value(); }), from(s));
    }
    if (at("{")) {
      auto arms = sum_arms<Value>([&] { return value(); });
      return mk::pm_sum_v(scr, std::move(arms), from(s));
    }
    expect("(");
    std::string a = binder_name();
    expect(",");
    std::string b = binder_name();
    expect(")");
    expect(".");
    return mk::pm_pair_v(scr, bound({a, b}, [&] { return value(); }), from(s));
  }

  template <typename T, typename Fn>
  std::vector<T> sum_arms(Fn body) {
    expect("{");
    std::vector<T> arms;
    if (!at("}")) {
      do {
        SourceSpan s = peek().span;
        expect("(");
        std::size_t i = tag();
        if (i != arms.size()) throw ParseError("sum arms must be listed in order", s);
        expect(",");
        std::string x = binder_name();
        expect(")");
        expect(".");
        arms.push_back(bound({x}, body));
      } while (accept("|"));
    }
    expect("}");
    return arms;
  }

  Value value_atom() {
    SourceSpan s = peek().span;
    if (at("(")) {
      next();
      if (accept(")")) return mk::unit(from(s));
      if (peek().kind == Tok::Int && at(",", 1)) {
        std::size_t i = tag();
        expect(",");
        Value v = value();
        expect(")");
        return mk::inj(i, v, from(s));
      }
      Value a = value();
      if (accept(",")) {
        Value b = value();
        expect(")");
        return mk::pair(a, b, from(s));
      }
      expect(")");
      return a;
    }
    if (peek().kind == Tok::Ident && !kReserved.count(peek().text)) {
      std::string n = next().text;
      if (auto i = lookup(n)) return mk::var(*i, from(s));
      auto it = value_defs_.find(n);
      if (it != value_defs_.end()) return inline_def(it->second);
      throw ParseError(fmt::format("unbound variable '{}'", n), s);
    }
    fail("expected a value");
  }

  // ---- computations ----

  // Motive after the bound names `pre` (z, or x, x', p for Id).
  std::optional<Motive> motive(std::size_t arity) {
    if (!accept("[")) return std::nullopt;
    std::vector<std::string> ns;
    for (std::size_t k = 0; k < arity; ++k) {
      if (k > 0) expect(",");
      ns.push_back(binder_name());
    }
    Motive m;
    while (accept(",")) {
      std::string w = binder_name();
      expect(":");
      m.extension.push_back(bound(ns, [&] { return vtype(); }));
      ns.push_back(w);
    }
    expect("|-");
    m.result = bound(ns, [&] { return ctype(); });
    expect("]");
    return m;
  }

  Comp comp() {
    SourceSpan s = peek().span;
    if (at("lam") && !at("{", 1)) {
      next();
      std::string x = binder_name();
      expect(":");
      VType a = vtype();
      expect(".");
      return mk::lam(a, bound({x}, [&] { return comp(); }), from(s));
    }
    if (accept("let")) {
      std::string x = binder_name();
      std::optional<VType> ann;
      if (accept(":")) ann = vtype();
      expect("=");
      Value v = value();
      expect("in");
      Comp body = bound({x}, [&] { return comp(); });
      return mk::let_c(v, body, ann, from(s));
    }
    if (accept("pm")) {
      Value scr = value_atom();
      expect("as");
      return comp_branches(scr, s);
    }
    if (at("mu")) {
      require(Effect::Rec, s);
      next();
      std::string z = binder_name();
      std::optional<CType> ann;
      if (accept(":")) ann = ctype();
      expect(".");
      return mk::mu(bound({z}, [&] { return comp(); }), ann, from(s));
    }
    Comp head = comp_app();
    if (accept("to")) {
      std::string x = binder_name();
      std::optional<VType> ann;
      if (accept(":")) ann = vtype();
      std::optional<Motive> mot;
      if (at("[")) mot = motive(1);
      expect(".");
      Comp body = bound({x}, [&] { return comp(); });
      return mk::to(head, body, ann, mot, from(s));
    }
    return head;
  }

  Comp comp_branches(const Value& scr, const SourceSpan& s) {
    if (at("[")) {
      // The motive's arity depends on the pattern that follows it.
      std::size_t save = pos_;
      std::size_t depth = 0;
      do {
        if (at("[")) ++depth;
        if (at("]")) --depth;
        next();
      } while (depth > 0 && peek().kind != Tok::End);
      bool is_id = at("refl");
      pos_ = save;
      std::optional<Motive> mot = motive(is_id ? 3 : 1);
      return comp_pattern(scr, mot, s);
    }
    return comp_pattern(scr, std::nullopt, s);
  }

  Comp comp_pattern(const Value& scr, std::optional<Motive> mot, const SourceSpan& s) {
    if (at("(") && at(")", 1)) {
      next();
      next();
      expect(".");
      return mk::pm_unit(scr, comp(), mot, from(s));
    }
    if (accept("refl")) {
      std::string x = binder_name();
      expect(".");
      return mk::pm_id(scr, bound({x}, [&] { return comp(); }), mot, from(s));
    }
    if (at("{")) {
      auto arms = sum_arms<Comp>([&] { return comp(); });
      return mk::pm_sum(scr, std::move(arms), mot, from(s));
    }
    expect("(");
    std::string a = binder_name();
    expect(",");
    std::string b = binder_name();
    expect(")");
    expect(".");
    return mk::pm_pair(scr, bound({a, b}, [&] { return comp(); }), mot, from(s));
  }

  std::string element() {
    SourceSpan s = peek().span;
    std::string m;
    if (peek().kind == Tok::String || peek().kind == Tok::Ident) {
      m = next().text;
    } else {
      fail("expected a monoid element");
    }
    if (!sig_.has_element(m)) {
      throw ParseError(fmt::format("'{}' is not an element of the printing monoid", m), s);
    }
    return m;
  }

  std::string state_name() {
    SourceSpan s = peek().span;
    std::string n = ident();
    if (!sig_.state_index(n)) throw ParseError(fmt::format("unknown state '{}'", n), s);
    return n;
  }

  // Tries to read `value_atom '`; restores the position on failure.
  std::optional<Value> try_apply_arg() {
    std::size_t save = pos_;
    std::size_t depth = names_.size();
    try {
      Value v = value_atom();
      if (accept("'")) return v;
    } catch (const ParseError&) {
    }
    pos_ = save;
    names_.resize(depth);
    return std::nullopt;
  }

  // Operand of ' : a binder-style lambda may appear unparenthesized.
  Comp operand() {
    if (at("lam") && !at("{", 1)) return comp();
    return comp_app();
  }

  Comp comp_app() {
    SourceSpan s = peek().span;
    if (accept("return")) return mk::ret(value(), from(s));
    if (accept("force")) return mk::force(value_atom(), from(s));
    if (at("lam") && at("{", 1)) {
      next();
      next();
      std::vector<Comp> arms;
      if (!at("}")) {
        do arms.push_back(comp());
        while (accept("|"));
      }
      expect("}");
      return mk::tuple(std::move(arms), from(s));
    }
    if (peek().kind == Tok::Int && at("'", 1)) {
      std::size_t i = tag();
      next();
      return mk::proj(i, operand(), from(s));
    }
    if (at("print")) {
      require(Effect::Print, s);
      next();
      std::string m = element();
      return mk::print(m, comp_app(), from(s));
    }
    if (at("choose")) {
      require(Effect::Choose, s);
      next();
      expect("{");
      std::vector<Comp> arms;
      do arms.push_back(comp());
      while (accept("|"));
      expect("}");
      return mk::choose(std::move(arms), from(s));
    }
    if (at("error")) {
      require(Effect::Error, s);
      next();
      SourceSpan es = peek().span;
      std::string e = ident();
      if (!sig_.has_error(e)) throw ParseError(fmt::format("unknown error '{}'", e), es);
      return mk::error(e, from(s));
    }
    if (at("write")) {
      require(Effect::State, s);
      next();
      std::string st = state_name();
      return mk::write(st, comp_app(), from(s));
    }
    if (at("read")) {
      require(Effect::State, s);
      next();
      expect("{");
      std::map<std::string, Comp> seen;
      do {
        SourceSpan as = peek().span;
        std::string st = state_name();
        expect("->");
        Comp body = comp();
        if (!seen.emplace(st, body).second) {
          throw ParseError(fmt::format("duplicate read arm for '{}'", st), as);
        }
      } while (accept("|"));
      expect("}");
      if (seen.size() != sig_.states.size()) {
        throw ParseError("read needs exactly one arm per state", from(s));
      }
      std::vector<comp::ReadArm> arms;
      for (const auto& st : sig_.states) arms.push_back({st, seen.at(st)});
      return mk::read(std::move(arms), from(s));
    }
    if (at("diverge")) {
      require(Effect::Diverge, s);
      next();
      return mk::diverge(from(s));
    }
    if (auto v = try_apply_arg()) return mk::app(*v, operand(), from(s));
    if (accept("(")) {
      Comp m = comp();
      expect(")");
      return m;
    }
    if (peek().kind == Tok::Ident && !kReserved.count(peek().text)) {
      const std::string& n = peek().text;
      auto it = comp_defs_.find(n);
      if (it != comp_defs_.end()) {
        next();
        return inline_def(it->second);
      }
      if (lookup(n)) fail(fmt::format("'{}' is a value; use 'force {}' or 'return {}'", n, n, n));
      fail(fmt::format("unknown computation '{}'", n));
    }
    fail("expected a computation");
  }

  // ---- program files ----

  void header();
  void check_fresh_def(const std::string& n, const SourceSpan& s, ProgramFile& p) {
    for (const auto& d : p.definitions) {
      if (d.name == n) throw ParseError(fmt::format("'{}' is defined twice", n), s);
    }
  }
};

void Parser::header() {
  expect("{");
  EffectSignature sig;
  sig.enabled.clear();
  while (!accept("}")) {
    SourceSpan s = peek().span;
    std::string kw = ident();
    if (kw == "monoid") {
      if (accept("free")) {
        sig.monoid = FreeTextMonoid{};
      } else {
        expect("table");
        expect("{");
        FiniteTableMonoid t;
        do t.elements.push_back(ident());
        while (accept(","));
        expect(";");
        expect("unit");
        auto u = t.index_of(ident());
        if (!u) throw ParseError("unit is not a listed element", from(s));
        t.unit = *u;
        expect(";");
        std::size_t n = t.elements.size();
        std::vector<std::vector<std::optional<std::size_t>>> tab(
            n, std::vector<std::optional<std::size_t>>(n));
        for (std::size_t a = 0; a < n; ++a) {
          tab[a][t.unit] = a;
          tab[t.unit][a] = a;
        }
        while (!accept("}")) {
          SourceSpan es = peek().span;
          auto a = t.index_of(ident());
          expect("*");
          auto b = t.index_of(ident());
          expect("=");
          auto c = t.index_of(ident());
          expect(";");
          if (!a || !b || !c) throw ParseError("unknown monoid element", es);
          tab[*a][*b] = *c;
        }
        t.table.assign(n, std::vector<std::size_t>(n));
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            if (!tab[a][b]) {
              throw ParseError(fmt::format("missing product {} * {}", t.elements[a], t.elements[b]),
                               from(s));
            }
            t.table[a][b] = *tab[a][b];
          }
        }
        sig.monoid = t;
      }
    } else if (kw == "states") {
      expect("{");
      sig.states.clear();
      std::optional<std::size_t> init;
      do {
        sig.states.push_back(ident());
        if (accept("*")) init = sig.states.size() - 1;
      } while (accept(","));
      expect("}");
      sig.initial_state = init.value_or(0);
    } else if (kw == "errors") {
      expect("{");
      sig.errors.clear();
      if (!at("}")) {
        do sig.errors.push_back(ident());
        while (accept(","));
      }
      expect("}");
    } else if (kw == "enable") {
      do {
        SourceSpan es = peek().span;
        std::string n = ident();
        auto e = effect_from_name(n);
        if (!e) throw ParseError(fmt::format("unknown effect '{}'", n), es);
        if (!sig.enables(*e)) sig.enabled.push_back(*e);
      } while (accept(","));
    } else {
      throw ParseError(fmt::format("unknown header entry '{}'", kw), s);
    }
    expect(";");
  }
  try {
    sig.validate();
  } catch (const SignatureError& e) {
    throw ParseError(e.what(), peek().span);
  }
  sig_ = sig;
}

ProgramFile Parser::program() {
  ProgramFile p;
  sig_ = EffectSignature::pure();
  if (accept("effects")) header();
  p.signature = sig_;
  if (accept("context")) {
    expect("{");
    if (!at("}")) {
      do {
        std::string x = binder_name();
        expect(":");
        VType a = vtype();
        p.context.push_back({x, a});
        names_.push_back(x);
      } while (accept(","));
    }
    expect("}");
    accept(";");
    context_depth_ = names_.size();
  }
  while (peek().kind != Tok::End) {
    SourceSpan s = peek().span;
    std::string kw = ident();
    if (kw == "main") {
      if (p.main) throw ParseError("main is defined twice", s);
      expect(":");
      p.main_type = ctype();
      expect("=");
      p.main = comp();
      p.main_span = from(s);
      expect(";");
      continue;
    }
    if (kw == "equation") {
      Equation eq;
      eq.name = binder_name();
      std::size_t depth = names_.size();
      if (accept("(")) {
        if (!at(")")) {
          do {
            std::string x = binder_name();
            expect(":");
            VType a = vtype();
            eq.context.push_back({x, a});
            names_.push_back(x);
          } while (accept(","));
        }
        expect(")");
      }
      expect(":");
      eq.type = ctype();
      expect("=");
      eq.lhs = comp();
      expect("==");
      eq.rhs = comp();
      expect(";");
      names_.resize(depth);
      if (context_depth_ > 0) throw ParseError("equations take their own context", s);
      p.equations.push_back(eq);
      continue;
    }
    std::string n = binder_name();
    check_fresh_def(n, s, p);
    expect("=");
    std::size_t d = names_.size();
    if (kw == "vtype") {
      vtype_defs_[n] = {vtype(), d};
      p.definitions.push_back({DefinitionKind::VType, n, from(s)});
    } else if (kw == "ctype") {
      ctype_defs_[n] = {ctype(), d};
      p.definitions.push_back({DefinitionKind::CType, n, from(s)});
    } else if (kw == "val") {
      value_defs_[n] = {value(), d};
      p.definitions.push_back({DefinitionKind::Value, n, from(s)});
    } else if (kw == "comp") {
      comp_defs_[n] = {comp(), d};
      p.definitions.push_back({DefinitionKind::Comp, n, from(s)});
    } else {
      throw ParseError(fmt::format("unknown declaration '{}'", kw), s);
    }
    expect(";");
  }
  return p;
}

}  // namespace

Names ProgramFile::context_names() const {
  Names out;
  for (const auto& e : context) out.push_back(e.name);
  return out;
}

std::vector<VType> ProgramFile::context_types() const {
  std::vector<VType> out;
  for (const auto& e : context) out.push_back(e.type);
  return out;
}

ProgramFile parse_program(const std::string& text) {
  return Parser(text, EffectSignature::pure(), {}).program();
}

VType parse_vtype(const std::string& text, const EffectSignature& sig, const Names& names) {
  return Parser(text, sig, names).whole_vtype();
}
CType parse_ctype(const std::string& text, const EffectSignature& sig, const Names& names) {
  return Parser(text, sig, names).whole_ctype();
}
Value parse_value(const std::string& text, const EffectSignature& sig, const Names& names) {
  return Parser(text, sig, names).whole_value();
}
Comp parse_comp(const std::string& text, const EffectSignature& sig, const Names& names) {
  return Parser(text, sig, names).whole_comp();
}

namespace {

std::string show_context(const std::vector<ContextEntry>& ctx, Names& names) {
  std::string out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i > 0) out += ", ";
    out += ctx[i].name + " : " + show(ctx[i].type, names);
    names.push_back(ctx[i].name);
  }
  return out;
}

}  // namespace

std::string show_program(const ProgramFile& p) {
  std::string out = show_signature(p.signature) + "\n";
  Names names;
  if (!p.context.empty()) out += "context { " + show_context(p.context, names) + " }\n";
  if (p.main) {
    out += "main : " + show(*p.main_type, names) + " =\n  " + show(*p.main, names) + ";\n";
  }
  for (const auto& eq : p.equations) {
    Names en;
    std::string ctx = show_context(eq.context, en);
    out += fmt::format("equation {} ({}) : {} =\n  {}\n  == {};\n", eq.name, ctx,
                       show(eq.type, en), show(eq.lhs, en), show(eq.rhs, en));
  }
  return out;
}

}  // namespace dcbpv
