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

#include "lexer.hpp"

#include <cctype>
#include <utility>

#include <fmt/core.h>

#include "dcbpv/parser.hpp"

namespace dcbpv::detail {

namespace {

// Multi-byte spellings accepted as aliases.
const std::vector<std::pair<std::string, std::string>> kAliases = {
    {"\xCE\xBB", "lam"}, {"\xCE\xBC", "mu"}, {"\xE2\x8A\xA2", "|-"}, {"\xE2\x86\x92", "->"}};

}  // namespace

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  std::size_t line_start = 0;
  auto span_from = [&](std::size_t b) {
    return SourceSpan{b, i, line, static_cast<int>(b - line_start) + 1};
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t b = i;
    bool aliased = false;
    for (const auto& [spelling, canon] : kAliases) {
      if (text.compare(i, spelling.size(), spelling) == 0) {
        i += spelling.size();
        Tok k = std::isalpha(static_cast<unsigned char>(canon[0])) ? Tok::Ident : Tok::Punct;
        out.push_back({k, canon, span_from(b)});
        aliased = true;
        break;
      }
    }
    if (aliased) continue;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
      }
      out.push_back({Tok::Ident, text.substr(b, i - b), span_from(b)});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::Int, text.substr(b, i - b), span_from(b)});
      continue;
    }
    if (c == '"') {
      std::string s;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        if (text[i] == '\n') throw ParseError("unterminated string", span_from(b));
        s += text[i++];
      }
      if (i >= text.size()) throw ParseError("unterminated string", span_from(b));
      ++i;
      out.push_back({Tok::String, s, span_from(b)});
      continue;
    }
    static const std::vector<std::string> two = {"|-", "->", "=="};
    bool matched = false;
    for (const auto& p : two) {
      if (text.compare(i, 2, p) == 0) {
        i += 2;
        out.push_back({Tok::Punct, p, span_from(b)});
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("(){}[],.:;|'=*").find(c) != std::string::npos) {
      ++i;
      out.push_back({Tok::Punct, std::string(1, c), span_from(b)});
      continue;
    }
    ++i;
    throw ParseError(fmt::format("unexpected character '{}'", c), span_from(b));
  }
  out.push_back({Tok::End, "", SourceSpan{i, i, line, static_cast<int>(i - line_start) + 1}});
  return out;
}

}  // namespace dcbpv::detail
