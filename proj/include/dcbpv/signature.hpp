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

#ifndef DCBPV_SIGNATURE_HPP
#define DCBPV_SIGNATURE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dcbpv {

enum class Effect { Diverge, Rec, Print, Choose, Error, State };

std::string_view effect_name(Effect e);
std::optional<Effect> effect_from_name(std::string_view name);

/// Free monoid over text tokens: unit is the empty string, product is
/// concatenation.
struct FreeTextMonoid {};

/// A finite monoid given by its multiplication table over named elements.
struct FiniteTableMonoid {
  std::vector<std::string> elements;
  std::size_t unit = 0;
  /// table[a][b] is the index of a * b.
  std::vector<std::vector<std::size_t>> table;

  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Checks associativity and unitality by enumeration.
  bool lawful() const;
};

using Monoid = std::variant<FreeTextMonoid, FiniteTableMonoid>;

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The machine "hardware" and the set of effect operations a program may use.
struct EffectSignature {
  Monoid monoid = FreeTextMonoid{};
  std::vector<std::string> states = {"s0"};
  std::size_t initial_state = 0;
  std::vector<std::string> errors;
  std::vector<Effect> enabled;

  bool enables(Effect e) const;
  bool any_enabled() const { return !enabled.empty(); }
  std::optional<std::size_t> state_index(std::string_view name) const;
  bool has_error(std::string_view name) const;
  bool has_element(std::string_view element) const;
  const std::string& initial() const { return states.at(initial_state); }

  /// Unit of the printing monoid, in its textual representation.
  std::string monoid_unit() const;
  /// Right multiplication m * n of printing-monoid elements.
  std::string monoid_mul(const std::string& m, const std::string& n) const;

  /// Throws SignatureError when an invariant is violated: state and error
  /// names distinct, s0 in range, finite tables lawful.
  void validate() const;

  /// Everything enabled, states {s0, s1}, errors {e}, free text monoid.
  static EffectSignature all_effects();
  static EffectSignature pure();
};

}  // namespace dcbpv

#endif  // DCBPV_SIGNATURE_HPP
