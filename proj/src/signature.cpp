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

#include "dcbpv/signature.hpp"

#include <algorithm>
#include <set>

#include <fmt/core.h>

namespace dcbpv {

std::string_view effect_name(Effect e) {
  switch (e) {
    case Effect::Diverge: return "diverge";
    case Effect::Rec: return "rec";
    case Effect::Print: return "print";
    case Effect::Choose: return "choose";
    case Effect::Error: return "error";
    case Effect::State: return "state";
  }
  return "?";
}

std::optional<Effect> effect_from_name(std::string_view name) {
  for (Effect e : {Effect::Diverge, Effect::Rec, Effect::Print, Effect::Choose,
                   Effect::Error, Effect::State}) {
    if (effect_name(e) == name) return e;
  }
  return std::nullopt;
}

std::optional<std::size_t> FiniteTableMonoid::index_of(std::string_view name) const {
  auto it = std::find(elements.begin(), elements.end(), name);
  if (it == elements.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements.begin());
}

bool FiniteTableMonoid::lawful() const {
  const std::size_t n = elements.size();
  if (n == 0 || unit >= n || table.size() != n) return false;
  for (const auto& row : table) {
    if (row.size() != n) return false;
    for (std::size_t c : row) {
      if (c >= n) return false;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (table[unit][a] != a || table[a][unit] != a) return false;
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) return false;
      }
    }
  }
  return true;
}

bool EffectSignature::enables(Effect e) const {
  return std::find(enabled.begin(), enabled.end(), e) != enabled.end();
}

std::optional<std::size_t> EffectSignature::state_index(std::string_view name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

bool EffectSignature::has_error(std::string_view name) const {
  return std::find(errors.begin(), errors.end(), name) != errors.end();
}

bool EffectSignature::has_element(std::string_view element) const {
  if (const auto* t = std::get_if<FiniteTableMonoid>(&monoid)) {
    return t->index_of(element).has_value();
  }
  return true;
}

std::string EffectSignature::monoid_unit() const {
  if (const auto* t = std::get_if<FiniteTableMonoid>(&monoid)) {
    return t->elements.at(t->unit);
  }
  return "";
}

std::string EffectSignature::monoid_mul(const std::string& m, const std::string& n) const {
  if (const auto* t = std::get_if<FiniteTableMonoid>(&monoid)) {
    auto a = t->index_of(m);
    auto b = t->index_of(n);
    if (!a || !b) {
      throw SignatureError(fmt::format("'{}' or '{}' is not a monoid element", m, n));
    }
    return t->elements[t->table[*a][*b]];
  }
  return m + n;
}

void EffectSignature::validate() const {
  if (states.empty()) throw SignatureError("the state set must be nonempty");
  if (initial_state >= states.size()) throw SignatureError("initial state out of range");
  if (std::set<std::string>(states.begin(), states.end()).size() != states.size()) {
    throw SignatureError("state names must be distinct");
  }
  if (std::set<std::string>(errors.begin(), errors.end()).size() != errors.size()) {
    throw SignatureError("error names must be distinct");
  }
  if (const auto* t = std::get_if<FiniteTableMonoid>(&monoid)) {
    if (!t->lawful()) throw SignatureError("monoid table is not associative and unital");
  }
}

EffectSignature EffectSignature::all_effects() {
  EffectSignature sig;
  sig.states = {"s0", "s1"};
  sig.errors = {"e"};
  sig.enabled = {Effect::Diverge, Effect::Rec, Effect::Print,
                 Effect::Choose, Effect::Error, Effect::State};
  return sig;
}

EffectSignature EffectSignature::pure() { return EffectSignature{}; }

}  // namespace dcbpv
