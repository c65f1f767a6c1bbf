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

// Bidirectional type checker for dCBPV- and dCBPV+, with stack typing.

#ifndef DCBPV_TYPECHECK_HPP
#define DCBPV_TYPECHECK_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcbpv/equality.hpp"
#include "dcbpv/signature.hpp"
#include "dcbpv/syntax.hpp"

namespace dcbpv {

enum class Variant { Minus, Plus };

std::string_view variant_name(Variant v);

struct CheckOptions {
  Variant variant = Variant::Minus;
  /// Only consulted in Plus: accept a computation at a type that shrinks to
  /// one it checks against.
  bool allow_shrink = true;
  ConvOptions conv;
};

enum class ErrorKind {
  UnboundVariable,
  Mismatch,
  NotAFunction,
  NotASum,
  MotiveRequired,
  DependentSeqInMinus,
  EffectDisabled,
  ArityMismatch,
  ShrinkFailed,
  FuelExhausted,
};

std::string_view error_kind_name(ErrorKind k);

class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorKind kind, std::string message, std::string path, SourceSpan span,
            std::string expected = {}, std::string found = {});

  ErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }
  /// Slash-separated route from the checked term to the offending subterm.
  const std::string& path() const { return path_; }
  const SourceSpan& span() const { return span_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

  /// Summary line, location and expected/found types.
  std::string render(std::string_view file = {}) const;
  /// JSON object with kind, message, path, span and types.
  std::string json() const;

 private:
  ErrorKind kind_;
  std::string message_;
  std::string path_;
  SourceSpan span_;
  std::string expected_;
  std::string found_;
};

/// Value telescope (outermost first) plus the optional stack hole type.
struct Context {
  std::vector<VType> values;
  std::vector<std::string> names;  // for printing; may be shorter than values
  std::optional<CType> comp_slot;

  Context extend(VType a, std::string name = {}) const;
  /// Type of Var(i), shifted into this context.
  VType lookup(std::size_t i) const;
};

void wf_context(const Context& ctx, const EffectSignature& sig, const CheckOptions& opts = {});
void wf_vtype(const Context& ctx, const VType& a, const EffectSignature& sig,
              const CheckOptions& opts = {});
void wf_ctype(const Context& ctx, const CType& b, const EffectSignature& sig,
              const CheckOptions& opts = {});

void check_value(const Context& ctx, const Value& v, const VType& a, const EffectSignature& sig,
                 const CheckOptions& opts = {});
VType infer_value(const Context& ctx, const Value& v, const EffectSignature& sig,
                  const CheckOptions& opts = {});

/// Checks m against b. In Plus with allow_shrink, a failed check is retried
/// against every type `b` shrinks to (ShrinkFailed if none works).
void check_comp(const Context& ctx, const Comp& m, const CType& b, const EffectSignature& sig,
                const CheckOptions& opts = {});
CType infer_comp(const Context& ctx, const Comp& m, const EffectSignature& sig,
                 const CheckOptions& opts = {});

void check_stack(const Context& ctx, const CType& hole, const Stack& k, const CType& out,
                 const EffectSignature& sig, const CheckOptions& opts = {});

/// Plugs m into k and checks the result at c.
void check_config(const Context& ctx, const Comp& m, const Stack& k, const CType& c,
                  const EffectSignature& sig, const CheckOptions& opts = {});

/// The computation obtained by plugging m into the holes of k.
Comp plug(const Comp& m, const Stack& k);

}  // namespace dcbpv

#endif  // DCBPV_TYPECHECK_HPP
