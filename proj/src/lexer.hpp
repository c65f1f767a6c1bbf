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

// Tokens shared by the kernel and source-language parsers.

#ifndef DCBPV_SRC_LEXER_HPP
#define DCBPV_SRC_LEXER_HPP

#include <string>
#include <vector>

#include "dcbpv/syntax.hpp"

namespace dcbpv::detail {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

/// Throws ParseError on a stray character or an unterminated string.
std::vector<Token> lex(const std::string& text);

}  // namespace dcbpv::detail

#endif  // DCBPV_SRC_LEXER_HPP
