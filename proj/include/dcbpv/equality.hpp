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

// Judgemental equality: complex-value elimination, a directed normalizer for
// the sequencing and beta laws, conversion up to eta, and the effect
// coercion ("shrinking") check.

#ifndef DCBPV_EQUALITY_HPP
#define DCBPV_EQUALITY_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcbpv/syntax.hpp"

namespace dcbpv {

struct ConvOptions {
  bool eta_id = false;
  bool eta_fun_prod_thunk = true;
  std::size_t shrink_fuel = 64;
  std::size_t norm_fuel = 10000;
};

class FuelExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One line per rewrite: rule name and the path to the redex.
struct StepLog {
  std::vector<std::string> lines;
};

/// Variable types for conversion, outermost first; entries may be null when
/// a binder carries no annotation. Only consulted when eta_id is set.
using TypeCtx = std::vector<VType>;

/// Hoists every complex value out of value positions of m into
/// computation-level let/pm. Types, annotations and motives are untouched.
Comp eliminate_complex_values(const Comp& m);

VType normalize(const VType& t, const ConvOptions& opts = {}, StepLog* log = nullptr);
CType normalize(const CType& t, const ConvOptions& opts = {}, StepLog* log = nullptr);
Value normalize(const Value& t, const ConvOptions& opts = {}, StepLog* log = nullptr);
Comp normalize(const Comp& t, const ConvOptions& opts = {}, StepLog* log = nullptr);

bool convertible(const VType& a, const VType& b, const ConvOptions& opts = {},
                 const TypeCtx& ctx = {}, StepLog* log = nullptr);
bool convertible(const CType& a, const CType& b, const ConvOptions& opts = {},
                 const TypeCtx& ctx = {}, StepLog* log = nullptr);
bool convertible(const Value& a, const Value& b, const ConvOptions& opts = {},
                 const TypeCtx& ctx = {}, StepLog* log = nullptr);
bool convertible(const Comp& a, const Comp& b, const ConvOptions& opts = {},
                 const TypeCtx& ctx = {}, StepLog* log = nullptr);

/// Single effect transitions of a computation at evaluation position: print,
/// write, choose, read and mu steps, under sequencing heads, projections and
/// applications.
std::vector<Comp> effect_transitions(const Comp& m);

/// True when `wanted` rewrites to something convertible with `candidate` by
/// at most opts.shrink_fuel effect transitions inside thunks in the type.
bool shrink_check(const CType& candidate, const CType& wanted, const ConvOptions& opts = {},
                  const TypeCtx& ctx = {});
bool shrink_check(const VType& candidate, const VType& wanted, const ConvOptions& opts = {},
                  const TypeCtx& ctx = {});

/// Breadth-first over the types `wanted` shrinks to (itself first); true as
/// soon as `accept` holds for one of them.
bool shrink_any(const CType& wanted, const ConvOptions& opts,
                const std::function<bool(const CType&)>& accept);

}  // namespace dcbpv

#endif  // DCBPV_EQUALITY_HPP
