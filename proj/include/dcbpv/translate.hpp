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

// A small dependently typed source language and its call-by-value and
// call-by-name translations into dCBPV.

#ifndef DCBPV_TRANSLATE_HPP
#define DCBPV_TRANSLATE_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dcbpv/parser.hpp"
#include "dcbpv/signature.hpp"
#include "dcbpv/syntax.hpp"
#include "dcbpv/typecheck.hpp"

namespace dcbpv {

namespace src {

struct TypeNode;
struct TermNode;
using Type = std::shared_ptr<const TypeNode>;
using Term = std::shared_ptr<const TermNode>;

/// Result type of a dependent elimination. `names` are the bound scrutinee
/// variables: one for sums, units and pairs, three (x, x', p) for Id.
struct Motive {
  std::vector<std::string> names;
  Type result;
};

namespace ty {
struct Unit {};
struct Sum {
  std::vector<Type> arms;
};
/// Projection product.
struct Prod {
  std::vector<Type> arms;
};
struct Pi {
  std::string name;
  Type domain;
  Type codomain;
};
struct Sigma {
  std::string name;
  Type first;
  Type second;
};
struct Id {
  Type carrier;
  Term lhs;
  Term rhs;
};
}  // namespace ty

struct TypeNode {
  std::variant<ty::Unit, ty::Sum, ty::Prod, ty::Pi, ty::Sigma, ty::Id> node;
  SourceSpan span;
};

namespace tm {
struct Var {
  std::size_t index;
  std::string name;
};
struct Let {
  std::string name;
  std::optional<Type> annot;
  Term bound;
  Term body;
};
struct Inj {
  std::size_t tag;
  Term payload;
};
struct PmSum {
  Term scrutinee;
  std::vector<std::string> names;
  std::vector<Term> arms;
  std::optional<Motive> motive;
};
struct Tuple {
  std::vector<Term> arms;
};
struct Proj {
  std::size_t tag;
  Term of;
};
struct Lam {
  std::string name;
  Type domain;
  Term body;
};
struct App {
  Term fun;
  Term arg;
};
struct Unit {};
struct PmUnit {
  Term scrutinee;
  Term body;
  std::optional<Motive> motive;
};
struct Pair {
  Term first;
  Term second;
};
struct PmPair {
  Term scrutinee;
  std::string first;
  std::string second;
  Term body;
  std::optional<Motive> motive;
};
struct Refl {
  Term of;
};
struct PmId {
  Term scrutinee;
  std::string name;
  Term body;
  std::optional<Motive> motive;
};
/// (M : A), used to guide motive generation.
struct Ann {
  Term term;
  Type type;
};
struct Print {
  std::string element;
  Term body;
};
struct Choose {
  std::vector<Term> arms;
};
struct Error {
  std::string name;
};
struct Write {
  std::string state;
  Term body;
};
struct Read {
  std::vector<std::pair<std::string, Term>> arms;
};
struct Diverge {};
struct Mu {
  std::string name;
  Type type;
  Term body;
};
}  // namespace tm

struct TermNode {
  std::variant<tm::Var, tm::Let, tm::Inj, tm::PmSum, tm::Tuple, tm::Proj, tm::Lam, tm::App,
               tm::Unit, tm::PmUnit, tm::Pair, tm::PmPair, tm::Refl, tm::PmId, tm::Ann,
               tm::Print, tm::Choose, tm::Error, tm::Write, tm::Read, tm::Diverge, tm::Mu>
      node;
  SourceSpan span;
};

}  // namespace src

struct SrcProgram {
  EffectSignature signature = EffectSignature::pure();
  std::vector<std::pair<std::string, src::Type>> context;
  src::Type main_type;
  src::Term main;
};

/// Parses and scope-checks a .dtt file. Throws ParseError.
SrcProgram parse_source(const std::string& text);
src::Type parse_source_type(const std::string& text, const Names& names = {},
                            const EffectSignature& sig = EffectSignature::all_effects());
src::Term parse_source_term(const std::string& text, const Names& names = {},
                            const EffectSignature& sig = EffectSignature::all_effects());

enum class Strategy { CBV, CBN };

std::string_view strategy_name(Strategy s);

enum class TranslateErrorKind { CbvNeedsPlus, DependentElimNeedsPlus };

std::string_view translate_error_name(TranslateErrorKind k);

class TranslateError : public std::runtime_error {
 public:
  TranslateError(TranslateErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  TranslateErrorKind kind() const { return kind_; }

 private:
  TranslateErrorKind kind_;
};

/// Source types of the variables in scope, outermost first; unknown entries
/// only weaken motive generation.
using SrcScope = std::vector<std::optional<src::Type>>;

/// A^v with every variable in scope read as a value variable, that is
/// A^v[tr x_1/z_1, ..., tr x_n/z_n].
VType cbv_translate_type(const src::Type& a, std::size_t depth = 0);
/// M^v : F(A^v[...]) in the context x_1 : A_1^v, ...
Comp cbv_translate_term(const src::Term& m, const SrcScope& scope = {});

CType cbn_translate_type(const src::Type& b);
Comp cbn_translate_term(const src::Term& m);

/// True if some elimination in m (or in a type inside it) carries a motive.
bool has_dependent_elim(const src::Term& m);

/// Translates a whole program. Throws TranslateError for the strategy and
/// variant combinations that have no well-defined translation.
ProgramFile translate_program(const SrcProgram& p, Strategy s, Variant v);

}  // namespace dcbpv

#endif  // DCBPV_TRANSLATE_HPP
