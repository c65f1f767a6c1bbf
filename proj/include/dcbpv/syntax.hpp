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

// Kernel syntax of dependently typed call-by-push-value.
//
// Value and computation types, values, computations and simple stacks are
// immutable trees shared through shared_ptr<const ...>. Variables are de
// Bruijn indices; index 0 is the innermost binder. Tags of sums, products and
// projections are 0-based here and 1-based in the concrete syntax.
//
// Binder counts per child:
//   Sigma.second, Pi.codomain, Lambda.body, Let.body, Mu.body, To.body,
//   PmSum arms, PmId body: 1.   PmPair body: 2.
//   Motive of To (ext. telescope G'): ext[i] under 1 + i, result under
//   1 + |G'|.  Motive of PmUnit/PmSum/PmPair: result under 1.
//   Motive of PmId: result under 3 (x, x', p; p innermost).

#ifndef DCBPV_SYNTAX_HPP
#define DCBPV_SYNTAX_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dcbpv {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
};

struct VTypeNode;
struct CTypeNode;
struct ValueNode;
struct CompNode;

using VType = std::shared_ptr<const VTypeNode>;
using CType = std::shared_ptr<const CTypeNode>;
using Value = std::shared_ptr<const ValueNode>;
using Comp = std::shared_ptr<const CompNode>;

namespace vt {
struct U {
  CType body;
};
struct Unit {};
struct Sum {
  std::vector<VType> arms;
};
struct Sigma {
  VType first;
  VType second;
};
struct Id {
  VType carrier;
  Value lhs;
  Value rhs;
};
}  // namespace vt

struct VTypeNode {
  std::variant<vt::U, vt::Unit, vt::Sum, vt::Sigma, vt::Id> node;
  SourceSpan span;
};

namespace ct {
struct F {
  VType returns;
};
struct Prod {
  std::vector<CType> arms;
};
struct Pi {
  VType domain;
  CType codomain;
};
}  // namespace ct

struct CTypeNode {
  std::variant<ct::F, ct::Prod, ct::Pi> node;
  SourceSpan span;
};

/// Result type of a dependent eliminator as a function of the scrutinee.
/// An absent motive selects the weak (non-dependent) rule.
struct Motive {
  std::vector<VType> extension;
  CType result;
};

namespace val {
struct Var {
  std::size_t index;
};
struct Thunk {
  Comp body;
};
struct Unit {};
struct Inj {
  std::size_t tag;
  Value payload;
};
struct Pair {
  Value first;
  Value second;
};
struct Refl {
  Value of;
};
struct Let {
  Value bound;
  Value body;
};
struct PmUnit {
  Value scrutinee;
  Value body;
};
struct PmSum {
  Value scrutinee;
  std::vector<Value> arms;
};
struct PmPair {
  Value scrutinee;
  Value body;
};
struct PmId {
  Value scrutinee;
  Value body;
};
}  // namespace val

struct ValueNode {
  std::variant<val::Var, val::Thunk, val::Unit, val::Inj, val::Pair, val::Refl,
               val::Let, val::PmUnit, val::PmSum, val::PmPair, val::PmId>
      node;
  SourceSpan span;
};

namespace comp {
struct Return {
  Value value;
};
/// M to x. N. `binder` optionally annotates the type of x.
struct To {
  Comp head;
  Comp body;
  std::optional<VType> binder;
  std::optional<Motive> motive;
};
struct Force {
  Value thunk;
};
/// lambda_i M_i, the introduction form of finite products.
struct Tuple {
  std::vector<Comp> arms;
};
struct Proj {
  std::size_t tag;
  Comp of;
};
struct Lambda {
  VType domain;
  Comp body;
};
/// V'M: push the argument V, then run M.
struct Apply {
  Value arg;
  Comp fun;
};
struct Let {
  Value bound;
  Comp body;
  std::optional<VType> binder;
};
struct PmUnit {
  Value scrutinee;
  Comp body;
  std::optional<Motive> motive;
};
struct PmSum {
  Value scrutinee;
  std::vector<Comp> arms;
  std::optional<Motive> motive;
};
struct PmPair {
  Value scrutinee;
  Comp body;
  std::optional<Motive> motive;
};
struct PmId {
  Value scrutinee;
  Comp body;
  std::optional<Motive> motive;
};
struct Diverge {};
struct Mu {
  Comp body;
  std::optional<CType> type;
};
struct Print {
  std::string element;
  Comp body;
};
struct Choose {
  std::vector<Comp> arms;
};
struct Error {
  std::string name;
};
struct Write {
  std::string state;
  Comp body;
};
struct ReadArm {
  std::string state;
  Comp body;
};
struct Read {
  std::vector<ReadArm> arms;
};
}  // namespace comp

struct CompNode {
  std::variant<comp::Return, comp::To, comp::Force, comp::Tuple, comp::Proj,
               comp::Lambda, comp::Apply, comp::Let, comp::PmUnit, comp::PmSum,
               comp::PmPair, comp::PmId, comp::Diverge, comp::Mu, comp::Print,
               comp::Choose, comp::Error, comp::Write, comp::Read>
      node;
  SourceSpan span;
};

// Simple stacks, as persistent lists. A null Stack is nil.
struct StackCell;
using Stack = std::shared_ptr<const StackCell>;

namespace frame {
/// [.] to x. M. The binder annotation and motive of the originating `to`
/// travel with the frame so that a configuration can be plugged back into a
/// term with the same typing information.
struct Seq {
  Comp body;
  std::optional<VType> binder;
  std::optional<Motive> motive;
};
struct Proj {
  std::size_t tag;
};
struct Arg {
  Value arg;
};
}  // namespace frame

using Frame = std::variant<frame::Seq, frame::Proj, frame::Arg>;

struct StackCell {
  Frame top;
  Stack rest;
};

inline Stack push(Frame f, Stack rest) {
  return std::make_shared<const StackCell>(StackCell{std::move(f), std::move(rest)});
}
std::size_t stack_depth(const Stack& k);

/// Raised by shift when a free index would become negative.
class IndexUnderflow : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Factories. Spans default to unknown; the parser passes real ones.
namespace mk {
VType U(CType body, SourceSpan s = {});
VType unit_type(SourceSpan s = {});
VType sum(std::vector<VType> arms, SourceSpan s = {});
VType sigma(VType first, VType second, SourceSpan s = {});
VType id(VType carrier, Value lhs, Value rhs, SourceSpan s = {});

CType F(VType returns, SourceSpan s = {});
CType prod(std::vector<CType> arms, SourceSpan s = {});
CType pi(VType domain, CType codomain, SourceSpan s = {});

Value var(std::size_t index, SourceSpan s = {});
Value thunk(Comp body, SourceSpan s = {});
Value unit(SourceSpan s = {});
Value inj(std::size_t tag, Value payload, SourceSpan s = {});
Value pair(Value first, Value second, SourceSpan s = {});
Value refl(Value of, SourceSpan s = {});
Value let_v(Value bound, Value body, SourceSpan s = {});
Value pm_unit_v(Value scrutinee, Value body, SourceSpan s = {});
Value pm_sum_v(Value scrutinee, std::vector<Value> arms, SourceSpan s = {});
Value pm_pair_v(Value scrutinee, Value body, SourceSpan s = {});
Value pm_id_v(Value scrutinee, Value body, SourceSpan s = {});

Comp ret(Value v, SourceSpan s = {});
Comp to(Comp head, Comp body, std::optional<VType> binder = std::nullopt,
        std::optional<Motive> motive = std::nullopt, SourceSpan s = {});
Comp force(Value v, SourceSpan s = {});
Comp tuple(std::vector<Comp> arms, SourceSpan s = {});
Comp proj(std::size_t tag, Comp of, SourceSpan s = {});
Comp lam(VType domain, Comp body, SourceSpan s = {});
Comp app(Value arg, Comp fun, SourceSpan s = {});
Comp let_c(Value bound, Comp body, std::optional<VType> binder = std::nullopt,
           SourceSpan s = {});
Comp pm_unit(Value scrutinee, Comp body, std::optional<Motive> motive = std::nullopt,
             SourceSpan s = {});
Comp pm_sum(Value scrutinee, std::vector<Comp> arms,
            std::optional<Motive> motive = std::nullopt, SourceSpan s = {});
Comp pm_pair(Value scrutinee, Comp body, std::optional<Motive> motive = std::nullopt,
             SourceSpan s = {});
Comp pm_id(Value scrutinee, Comp body, std::optional<Motive> motive = std::nullopt,
           SourceSpan s = {});
Comp diverge(SourceSpan s = {});
Comp mu(Comp body, std::optional<CType> type = std::nullopt, SourceSpan s = {});
Comp print(std::string element, Comp body, SourceSpan s = {});
Comp choose(std::vector<Comp> arms, SourceSpan s = {});
Comp error(std::string name, SourceSpan s = {});
Comp write(std::string state, Comp body, SourceSpan s = {});
Comp read(std::vector<comp::ReadArm> arms, SourceSpan s = {});

/// thunk (return v), written tr v.
Value tr(Value v);
}  // namespace mk

// Variable maps. A VarMap sends a free index (relative to the term's own
// context) to a replacement value in the target context; the traversal
// shifts replacements under binders.
using VarMap = std::function<Value(std::size_t index)>;

VType map_vars(const VType& t, const VarMap& f);
CType map_vars(const CType& t, const VarMap& f);
Value map_vars(const Value& t, const VarMap& f);
Comp map_vars(const Comp& t, const VarMap& f);
Motive map_vars(const Motive& m, std::size_t binders, const VarMap& f);
Stack map_vars(const Stack& k, const VarMap& f);

/// Moves free indices >= cutoff by delta. Throws IndexUnderflow.
template <typename T>
T shift(const T& t, std::size_t cutoff, long delta);
template <typename T>
T shift(const T& t, long delta) {
  return shift(t, 0, delta);
}

/// Discharges the outermost free variable (index 0) with v; all other free
/// indices move down by one.
template <typename T>
T substitute(const T& t, const Value& v);

/// Substitutes vs[0] for index 0, vs[1] for index 1, ...; remaining indices
/// move down by vs.size(). The replacement values live in the outer context.
template <typename T>
T substitute_many(const T& t, const std::vector<Value>& vs);

/// Substitutes v for index `at` only; indices above `at` move down by one.
template <typename T>
T substitute_at(const T& t, std::size_t at, const Value& v);

/// Calls f on every free index of the term.
void for_each_free(const VType& t, const std::function<void(std::size_t)>& f);
void for_each_free(const CType& t, const std::function<void(std::size_t)>& f);
void for_each_free(const Value& t, const std::function<void(std::size_t)>& f);
void for_each_free(const Comp& t, const std::function<void(std::size_t)>& f);

template <typename T>
bool occurs_free(const T& t, std::size_t index) {
  bool found = false;
  for_each_free(t, [&](std::size_t i) { found = found || i == index; });
  return found;
}

/// True when every free index is below `depth`.
template <typename T>
bool well_scoped(const T& t, std::size_t depth) {
  bool ok = true;
  for_each_free(t, [&](std::size_t i) { ok = ok && i < depth; });
  return ok;
}

// Structural equality; with de Bruijn indices this is alpha-equivalence.
// Spans are ignored.
bool alpha_eq(const VType& a, const VType& b);
bool alpha_eq(const CType& a, const CType& b);
bool alpha_eq(const Value& a, const Value& b);
bool alpha_eq(const Comp& a, const Comp& b);
bool alpha_eq(const Stack& a, const Stack& b);
bool alpha_eq(const std::optional<Motive>& a, const std::optional<Motive>& b);

/// A value is simple when no let or pm value constructor occurs in it,
/// including inside thunked computations. Computation-level pm/let do not
/// count.
bool is_simple(const Value& v);
/// No complex value occurs in a value position of m. Type annotations and
/// motives are not inspected.
bool complex_value_free(const Comp& m);

/// Computation effects used syntactically by m (ignoring types).
struct EffectUse {
  bool diverge = false;
  bool rec = false;
  bool print = false;
  bool choose = false;
  bool error = false;
  bool state = false;

  bool any() const { return diverge || rec || print || choose || error || state; }
};
EffectUse effects_used(const Comp& m);
EffectUse effects_used(const Value& v);

/// Any syntax node.
using Term = std::variant<VType, CType, Value, Comp>;

/// An immediate subterm together with the number of binders it sits under.
struct Child {
  Term term;
  std::size_t binders;
};

/// Immediate subterms in a fixed order, including annotations and motives.
std::vector<Child> children(const Term& t);
/// Rebuilds t with its children replaced (same order and count as
/// children(t)); tags, names and the span are kept.
Term rebuild(const Term& t, const std::vector<Term>& kids);

/// Number of nodes; used for fuel heuristics and test generators.
std::size_t term_size(const Comp& m);
std::size_t term_size(const Value& v);

}  // namespace dcbpv

#endif  // DCBPV_SYNTAX_HPP
