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

#ifndef DCBPV_PRINTER_HPP
#define DCBPV_PRINTER_HPP

#include <string>
#include <vector>

#include "dcbpv/signature.hpp"
#include "dcbpv/syntax.hpp"

namespace dcbpv {

/// Names of the variables in scope, outermost first. Var(i) prints as
/// names[size - 1 - i]; bound variables get fresh names that avoid these.
using Names = std::vector<std::string>;

std::string show(const VType& t, const Names& names = {});
std::string show(const CType& t, const Names& names = {});
std::string show(const Value& v, const Names& names = {});
std::string show(const Comp& m, const Names& names = {});
std::string show(const Stack& k, const Names& names = {});

/// Printing-monoid element; the empty free-text element prints as "ε".
std::string show_element(const std::string& m);

/// The concrete-syntax header for a signature ("effects { ... }").
std::string show_signature(const EffectSignature& sig);

}  // namespace dcbpv

#endif  // DCBPV_PRINTER_HPP
