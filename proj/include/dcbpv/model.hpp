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

// Finite-set denotational model: value types are finite sets, computation
// types are algebras for a monad, terms are interpreted environment-wise.

#ifndef DCBPV_MODEL_HPP
#define DCBPV_MODEL_HPP

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dcbpv/signature.hpp"
#include "dcbpv/syntax.hpp"
#include "dcbpv/typecheck.hpp"

namespace dcbpv {

struct Elem;

/// Immutable, cheaply copied list of elements.
class ElemList {
 public:
  ElemList() = default;
  ElemList(std::vector<Elem> v);
  ElemList(std::initializer_list<Elem> v);

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  const Elem& operator[](std::size_t i) const;
  const Elem& at(std::size_t i) const;
  const Elem& front() const { return (*this)[0]; }
  std::vector<Elem>::const_iterator begin() const;
  std::vector<Elem>::const_iterator end() const;
  void push_back(Elem e);
  void set(std::size_t i, Elem e);

  friend bool operator==(const ElemList& a, const ElemList& b);

 private:
  std::vector<Elem>& own();
  std::shared_ptr<std::vector<Elem>> items_;
};

/// A semantic element. F-level elements are Ret/Err/Div leaves and effect
/// nodes; U B elements are elements of B's carrier.
struct Elem {
  enum class Kind { Unit, Inj, Pair, Refl, Ret, Err, Div, Node, Tuple, Fun };
  Kind kind = Kind::Unit;
  std::size_t tag = 0;  // Inj tag, Err index, Ret writer element
  std::string label;    // Node operation: print:<m>, choose, read, write:<s>
  ElemList kids;  // Fun: argument, result, argument, result, ...

  friend bool operator==(const Elem& a, const Elem& b);
  friend bool operator<(const Elem& a, const Elem& b);
};

std::string show_elem(const Elem& e, const std::vector<std::string>& errors = {});

/// T X = X + E.
struct ExceptionSpec {
  std::vector<std::string> errors;
};
/// T X = M x X for a finite monoid; only the non-dependent fragment.
struct WriterSpec {
  FiniteTableMonoid monoid;
};
/// Effect trees over a signature; carriers of F types are not enumerable.
/// Recursion is cut off after `mu_depth` unfoldings (the Kleene approximant).
struct FreeSpec {
  EffectSignature sig;
  std::size_t mu_depth = 3;
};

using FinMonadSpec = std::variant<ExceptionSpec, WriterSpec, FreeSpec>;

enum class ModelErrorKind { InfiniteModel, UnsupportedEffect, CapExceeded };

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ModelErrorKind kind() const { return kind_; }

 private:
  ModelErrorKind kind_;
};

struct ModelOptions {
  /// Bound on enumerated environments and on any single carrier.
  std::size_t cap = 1000000;
  /// Signature used to re-infer types of subterms.
  EffectSignature sig = EffectSignature::all_effects();
  Variant variant = Variant::Plus;
};

using Env = std::vector<Elem>;  // outermost first

/// Elements of the value type in the given environment.
std::vector<Elem> interp_vtype(const Context& ctx, const Env& env, const VType& a,
                               const FinMonadSpec& spec, const ModelOptions& opts = {});
/// Carrier of the computation type's algebra.
std::vector<Elem> interp_ctype(const Context& ctx, const Env& env, const CType& b,
                               const FinMonadSpec& spec, const ModelOptions& opts = {});

Elem interp_value(const Context& ctx, const Env& env, const Value& v, const VType& a,
                  const FinMonadSpec& spec, const ModelOptions& opts = {});
Elem interp_comp(const Context& ctx, const Env& env, const Comp& m, const CType& b,
                 const FinMonadSpec& spec, const ModelOptions& opts = {});

/// Every environment of the context, in lexicographic order.
std::vector<Env> environments(const Context& ctx, const FinMonadSpec& spec,
                              const ModelOptions& opts = {});

/// Checks the algebra laws of b's interpretation in env by enumeration.
bool algebra_laws_hold(const Context& ctx, const Env& env, const CType& b,
                       const FinMonadSpec& spec, const ModelOptions& opts = {});

struct Verdict {
  enum class Kind { Equal, Counterexample, CapExceeded };
  Kind kind = Kind::Equal;
  std::size_t environments = 0;
  std::string env;  // rendered counterexample environment
  std::string lhs;
  std::string rhs;
};

std::string_view verdict_name(Verdict::Kind k);

/// Compares both sides in every environment of ctx; stops at the first
/// difference.
Verdict check_equation(const Context& ctx, const Comp& lhs, const Comp& rhs, const CType& ty,
                       const FinMonadSpec& spec, const ModelOptions& opts = {});

// ---- the equational theory ----

/// One instantiation of the schematic equations: value types A and C are
/// sums of `a` and `c` units, B is a computation type, and the exception
/// monad has `errors` errors.
struct Figure4Instance {
  std::size_t a = 1;
  std::size_t c = 1;
  std::string b = "F Unit";
  std::size_t errors = 1;

  std::string describe() const;
};

/// Program text with all twenty equations, terms as metavariables: each
/// schematic computation is the force of a context variable of thunk type.
std::string figure4_program(const Figure4Instance& inst);

/// Default sweep: |A| <= 4, |C| <= 2, |E| <= 2 and a few shapes of B.
std::vector<Figure4Instance> figure4_grid();

struct SuiteRow {
  std::string equation;
  std::string instance;
  Verdict verdict;
};

/// Type-checks both sides of every equation (plus variant) and compares
/// them in the exception model.
std::vector<SuiteRow> check_figure4(const std::vector<Figure4Instance>& grid,
                                    const ModelOptions& opts = {});

// ---- dependent Kleisli extensions ----

/// Element of a fiber of F-shaped family over A + E: a fiber value or an
/// error point.
struct ExcElem {
  bool err = false;
  std::size_t index = 0;
  friend bool operator==(const ExcElem&, const ExcElem&) = default;
};

/// A family over A + E whose fiber at t is B(t) + E; fibers[t] = |B(t)|,
/// indexed by t = 0..|A|-1 for A and |A|..|A|+|E|-1 for E.
struct ExcFamily {
  std::size_t a_size = 0;
  std::size_t e_size = 0;
  std::vector<std::size_t> fibers;
};

/// f in Pi a:A. B(a) + E, extended to Pi t:A+E. B(t) + E by f*(e) = e.
std::vector<ExcElem> dep_kleisli_exception(const ExcFamily& fam, const std::vector<ExcElem>& f);

/// All dependent functions Pi t:A+E. B(t) + E.
std::vector<std::vector<ExcElem>> all_dependent_functions(const ExcFamily& fam);

struct WriterRefutation {
  enum class Kind { Refutation, ExtensionFound };
  Kind kind = Kind::Refutation;
  /// B(m, a) is inhabited (by *) iff m is the unit; indexed [m][a].
  std::vector<std::vector<bool>> predicate;
  /// Number of dependent functions Pi x : M x A. M x B(x).
  std::size_t search_space = 0;
  /// How many of them restrict to eta . (a |-> *).
  std::size_t extensions = 0;
};

WriterRefutation refute_dependent_kleisli_writer(const FiniteTableMonoid& m, std::size_t a_size);

}  // namespace dcbpv

#endif  // DCBPV_MODEL_HPP
