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

#ifndef DCBPV_PARSER_HPP
#define DCBPV_PARSER_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dcbpv/printer.hpp"
#include "dcbpv/signature.hpp"
#include "dcbpv/syntax.hpp"

namespace dcbpv {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, SourceSpan span)
      : std::runtime_error(what), span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

struct ContextEntry {
  std::string name;
  VType type;
};

/// A pair of computations claimed equal at `type` in `context`.
struct Equation {
  std::string name;
  std::vector<ContextEntry> context;
  CType type;
  Comp lhs;
  Comp rhs;
};

enum class DefinitionKind { VType, CType, Value, Comp };

struct Definition {
  DefinitionKind kind;
  std::string name;
  SourceSpan span;
};

/// A parsed .dcbpv file. Definitions are inlined at their use sites; the list
/// is kept for diagnostics only.
struct ProgramFile {
  EffectSignature signature = EffectSignature::pure();
  std::vector<ContextEntry> context;
  std::vector<Definition> definitions;
  std::optional<CType> main_type;
  std::optional<Comp> main;
  SourceSpan main_span;
  std::vector<Equation> equations;

  Names context_names() const;
  std::vector<VType> context_types() const;
};

ProgramFile parse_program(const std::string& text);

// Single-phrase parsers; `names` are the variables in scope, outermost first.
// The signature gates which effect forms are accepted.
VType parse_vtype(const std::string& text, const EffectSignature& sig = EffectSignature::all_effects(),
                  const Names& names = {});
CType parse_ctype(const std::string& text, const EffectSignature& sig = EffectSignature::all_effects(),
                  const Names& names = {});
Value parse_value(const std::string& text, const EffectSignature& sig = EffectSignature::all_effects(),
                  const Names& names = {});
Comp parse_comp(const std::string& text, const EffectSignature& sig = EffectSignature::all_effects(),
                const Names& names = {});

/// Prints a whole program so that parse_program reads it back.
std::string show_program(const ProgramFile& p);

}  // namespace dcbpv

#endif  // DCBPV_PARSER_HPP
