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

// Parser and scope checker for the source language (.dtt files).

#include <algorithm>
#include <set>

#include <fmt/core.h>

#include "dcbpv/translate.hpp"
#include "lexer.hpp"

namespace dcbpv {

namespace {

using detail::lex;
using detail::Tok;
using detail::Token;

const std::set<std::string> kKeywords = {
    "Unit", "Sum",    "Prod",  "Pi",    "Sigma", "Id",   "let",   "in",      "lam",
    "pm",   "as",     "refl",  "mu",    "print", "choose", "error", "write", "read",
    "diverge", "context", "main", "effects"};

src::Type ty(src::TypeNode n) { return std::make_shared<const src::TypeNode>(std::move(n)); }
src::Term tm(src::TermNode n) { return std::make_shared<const src::TermNode>(std::move(n)); }

class SourceParser {
 public:
  SourceParser(const std::string& text, const EffectSignature& sig, Names names)
      : text_(text), toks_(lex(text)), sig_(sig), names_(std::move(names)) {}

  SrcProgram program() {
    SrcProgram p;
    if (at("effects")) {
      p.signature = header();
      sig_ = p.signature;
    }
    if (accept("context")) {
      expect("{");
      if (!at("}")) {
        do {
          std::string x = name();
          expect(":");
          p.context.emplace_back(x, type());
          names_.push_back(x);
        } while (accept(","));
      }
      expect("}");
      accept(";");
    }
    expect("main");
    expect(":");
    p.main_type = type();
    expect("=");
    p.main = term();
    accept(";");
    end();
    return p;
  }

  src::Type whole_type() {
    src::Type t = type();
    end();
    return t;
  }

  src::Term whole_term() {
    src::Term t = term();
    end();
    return t;
  }

 private:
  // ---- tokens ----

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at(std::string_view s, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == s;
  }
  bool accept(std::string_view s) {
    if (!at(s)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail(fmt::format("expected '{}'", s));
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(fmt::format("{} near '{}'", msg, t.kind == Tok::End ? "end of input" : t.text),
                     t.span);
  }
  void end() const {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }
  SourceSpan from(const SourceSpan& s) const {
    SourceSpan out = s;
    if (pos_ > 0) out.end = toks_[pos_ - 1].span.end;
    return out;
  }

  std::string name() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text)) fail("expected a name");
    return next().text;
  }

  std::size_t tag() {
    const Token& t = peek();
    if (t.kind != Tok::Int) fail("expected a tag");
    std::size_t i = std::stoul(next().text);
    if (i == 0) throw ParseError("tags start at 1", t.span);
    return i - 1;
  }

  template <class Fn>
  auto bound(std::vector<std::string> xs, Fn fn) {
    for (auto& x : xs) names_.push_back(std::move(x));
    auto out = fn();
    names_.resize(names_.size() - xs.size());
    return out;
  }

  // The header has the same syntax as in kernel programs.
  EffectSignature header() {
    std::size_t begin = peek().span.begin;
    next();
    expect("{");
    int depth = 1;
    while (depth > 0) {
      if (peek().kind == Tok::End) fail("unterminated effects header");
      if (at("{")) ++depth;
      if (at("}")) --depth;
      next();
    }
    std::size_t end = toks_[pos_ - 1].span.end;
    accept(";");
    return parse_program(text_.substr(begin, end - begin)).signature;
  }

  // ---- types ----

  src::Type type() {
    SourceSpan s = peek().span;
    if (accept("Pi")) {
      std::string x = name();
      expect(":");
      src::Type a = type();
      expect(".");
      src::Type b = bound({x}, [&] { return type(); });
      return ty({src::ty::Pi{x, a, b}, from(s)});
    }
    if (accept("Sigma")) {
      std::string x = name();
      expect(":");
      src::Type a = type();
      expect(".");
      src::Type b = bound({x}, [&] { return type(); });
      return ty({src::ty::Sigma{x, a, b}, from(s)});
    }
    if (accept("Id")) {
      src::Type a = type_atom();
      src::Term l = atom();
      src::Term r = atom();
      return ty({src::ty::Id{a, l, r}, from(s)});
    }
    return type_atom();
  }

  std::vector<src::Type> type_list() {
    expect("(");
    std::vector<src::Type> out;
    if (!at(")")) {
      do out.push_back(type());
      while (accept(","));
    }
    expect(")");
    return out;
  }

  src::Type type_atom() {
    SourceSpan s = peek().span;
    if (accept("Unit")) return ty({src::ty::Unit{}, from(s)});
    if (accept("Sum")) return ty({src::ty::Sum{type_list()}, from(s)});
    if (accept("Prod")) return ty({src::ty::Prod{type_list()}, from(s)});
    if (accept("(")) {
      src::Type t = type();
      expect(")");
      return t;
    }
    fail("expected a type");
  }

  // ---- terms ----

  src::Term term() {
    SourceSpan s = peek().span;
    if (accept("let")) {
      std::string x = name();
      std::optional<src::Type> annot;
      if (accept(":")) annot = type();
      expect("=");
      src::Term m = term();
      expect("in");
      src::Term n = bound({x}, [&] { return term(); });
      return tm({src::tm::Let{x, annot, m, n}, from(s)});
    }
    if (accept("lam")) {
      if (at("{")) return tm({src::tm::Tuple{arms()}, from(s)});
      std::string x = name();
      expect(":");
      src::Type a = type();
      expect(".");
      src::Term body = bound({x}, [&] { return term(); });
      return tm({src::tm::Lam{x, a, body}, from(s)});
    }
    if (at("mu")) {
      gate(Effect::Rec);
      next();
      std::string x = name();
      expect(":");
      src::Type a = type();
      expect(".");
      src::Term body = bound({x}, [&] { return term(); });
      return tm({src::tm::Mu{x, a, body}, from(s)});
    }
    if (accept("pm")) {
      src::Term scr = postfix();
      expect("as");
      return branches(scr, s);
    }
    if (at("print")) {
      gate(Effect::Print);
      next();
      if (peek().kind != Tok::String && peek().kind != Tok::Ident) fail("expected a monoid element");
      std::string m = next().text;
      if (!sig_.has_element(m)) fail(fmt::format("'{}' is not an element of the monoid", m));
      return tm({src::tm::Print{m, term()}, from(s)});
    }
    if (at("choose")) {
      gate(Effect::Choose);
      next();
      auto as = arms();
      if (as.empty()) fail("choose needs at least one arm");
      return tm({src::tm::Choose{as}, from(s)});
    }
    if (at("error")) {
      gate(Effect::Error);
      next();
      std::string e = name();
      if (!sig_.has_error(e)) fail(fmt::format("unknown error '{}'", e));
      return tm({src::tm::Error{e}, from(s)});
    }
    if (at("write")) {
      gate(Effect::State);
      next();
      std::string st = name();
      if (!sig_.state_index(st)) fail(fmt::format("unknown state '{}'", st));
      return tm({src::tm::Write{st, term()}, from(s)});
    }
    if (at("read")) {
      gate(Effect::State);
      next();
      expect("{");
      std::vector<std::pair<std::string, src::Term>> got;
      do {
        std::string st = name();
        expect("->");
        got.emplace_back(st, term());
      } while (accept("|"));
      expect("}");
      std::vector<std::pair<std::string, src::Term>> ordered;
      for (const auto& st : sig_.states) {
        auto it = std::find_if(got.begin(), got.end(), [&](const auto& a) { return a.first == st; });
        if (it == got.end()) throw ParseError(fmt::format("read has no arm for state {}", st), s);
        ordered.push_back(*it);
      }
      if (got.size() != ordered.size()) throw ParseError("read arms must name distinct states", s);
      return tm({src::tm::Read{ordered}, from(s)});
    }
    if (at("diverge")) {
      gate(Effect::Diverge);
      next();
      return tm({src::tm::Diverge{}, from(s)});
    }
    return application();
  }

  void gate(Effect e) const {
    if (!sig_.enables(e)) {
      fail(fmt::format("effect '{}' is not enabled", effect_name(e)));
    }
  }

  std::vector<src::Term> arms() {
    expect("{");
    std::vector<src::Term> out;
    if (!at("}")) {
      do out.push_back(term());
      while (accept("|"));
    }
    expect("}");
    return out;
  }

  bool starts_argument() const {
    const Token& t = peek();
    if (t.kind == Tok::Ident) return !kKeywords.count(t.text) || t.text == "refl";
    return at("(");
  }

  src::Term application() {
    SourceSpan s = peek().span;
    src::Term f = postfix();
    while (starts_argument()) {
      src::Term a = postfix();
      f = tm({src::tm::App{f, a}, from(s)});
    }
    return f;
  }

  src::Term postfix() {
    SourceSpan s = peek().span;
    if (accept("refl")) return tm({src::tm::Refl{postfix()}, from(s)});
    src::Term t = atom();
    while (at(".") && peek(1).kind == Tok::Int) {
      next();
      t = tm({src::tm::Proj{tag(), t}, from(s)});
    }
    return t;
  }

  src::Term atom() {
    SourceSpan s = peek().span;
    if (accept("(")) {
      if (accept(")")) return tm({src::tm::Unit{}, from(s)});
      if (peek().kind == Tok::Int && at(",", 1)) {
        std::size_t i = tag();
        expect(",");
        src::Term v = term();
        expect(")");
        return tm({src::tm::Inj{i, v}, from(s)});
      }
      src::Term a = term();
      if (accept(",")) {
        src::Term b = term();
        expect(")");
        return tm({src::tm::Pair{a, b}, from(s)});
      }
      if (accept(":")) {
        src::Type t = type();
        expect(")");
        return tm({src::tm::Ann{a, t}, from(s)});
      }
      expect(")");
      return a;
    }
    if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
      const Token& t = next();
      for (std::size_t i = names_.size(); i-- > 0;) {
        if (names_[i] == t.text) return tm({src::tm::Var{names_.size() - 1 - i, t.text}, t.span});
      }
      throw ParseError(fmt::format("unbound variable '{}'", t.text), t.span);
    }
    fail("expected a term");
  }

  std::optional<src::Motive> motive(std::size_t arity) {
    if (!accept("[")) return std::nullopt;
    src::Motive m;
    do m.names.push_back(name());
    while (accept(","));
    if (m.names.size() != arity) {
      fail(fmt::format("this motive binds {} variable(s)", arity));
    }
    expect("|-");
    m.result = bound(m.names, [&] { return type(); });
    expect("]");
    return m;
  }

  src::Term branches(const src::Term& scr, const SourceSpan& s) {
    // The motive's arity depends on the pattern that follows it.
    std::size_t save = pos_;
    std::optional<src::Motive> mot;
    if (at("[")) {
      int depth = 0;
      do {
        if (at("[")) ++depth;
        if (at("]")) --depth;
        next();
      } while (depth > 0 && peek().kind != Tok::End);
    }
    bool is_id = at("refl");
    std::size_t arity = is_id ? 3 : 1;
    std::size_t after = pos_;
    pos_ = save;
    mot = motive(arity);
    if (pos_ != after) fail("malformed motive");

    if (at("(") && at(")", 1)) {
      next();
      next();
      expect(".");
      return tm({src::tm::PmUnit{scr, term(), mot}, from(s)});
    }
    if (accept("refl")) {
      std::string x = name();
      expect(".");
      src::Term body = bound({x}, [&] { return term(); });
      return tm({src::tm::PmId{scr, x, body, mot}, from(s)});
    }
    if (accept("{")) {
      std::vector<std::string> xs;
      std::vector<src::Term> bodies;
      if (!at("}")) {
        do {
          expect("(");
          std::size_t i = tag();
          if (i != bodies.size()) fail("sum arms must be listed in order");
          expect(",");
          std::string x = name();
          expect(")");
          expect(".");
          xs.push_back(x);
          bodies.push_back(bound({x}, [&] { return term(); }));
        } while (accept("|"));
      }
      expect("}");
      return tm({src::tm::PmSum{scr, xs, bodies, mot}, from(s)});
    }
    expect("(");
    std::string a = name();
    expect(",");
    std::string b = name();
    expect(")");
    expect(".");
    src::Term body = bound({a, b}, [&] { return term(); });
    return tm({src::tm::PmPair{scr, a, b, body, mot}, from(s)});
  }

  const std::string& text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  EffectSignature sig_;
  Names names_;
};

}  // namespace

SrcProgram parse_source(const std::string& text) {
  return SourceParser(text, EffectSignature::pure(), {}).program();
}

src::Type parse_source_type(const std::string& text, const Names& names,
                            const EffectSignature& sig) {
  return SourceParser(text, sig, names).whole_type();
}

src::Term parse_source_term(const std::string& text, const Names& names,
                            const EffectSignature& sig) {
  return SourceParser(text, sig, names).whole_term();
}

}  // namespace dcbpv
