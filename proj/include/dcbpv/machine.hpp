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

// CK-machine with effect hardware: a printed monoid element and a state.

#ifndef DCBPV_MACHINE_HPP
#define DCBPV_MACHINE_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dcbpv/signature.hpp"
#include "dcbpv/syntax.hpp"

namespace dcbpv {

struct Configuration {
  Comp comp;
  Stack stack;
  std::string printed;
  std::string state;
};

enum class TerminalKind { Returned, ProdLambda, PiLambda, StuckOnVar, ErrorHalt };

std::string_view terminal_kind_name(TerminalKind k);

struct Stepped {
  std::string rule;
  Configuration next;
};

struct Terminal {
  TerminalKind kind;
  Value value;        // Returned only
  std::string error;  // ErrorHalt only
  Configuration final;
};

/// A choose at the head: one successor per arm, in order.
struct NeedsChoice {
  std::vector<Configuration> branches;
};

using StepResult = std::variant<Stepped, Terminal, NeedsChoice>;

enum class MachineErrorKind { ComplexValuePresent, IllTyped, ScriptExhausted, ExplorationCap };

class MachineError : public std::runtime_error {
 public:
  MachineError(MachineErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  MachineErrorKind kind() const { return kind_; }

 private:
  MachineErrorKind kind_;
};

struct Scheduler {
  enum class Kind { First, Fixed, Seeded, Interactive };
  Kind kind = Kind::First;
  std::vector<std::size_t> script;  // Fixed: 0-based choices, in order
  std::uint64_t seed = 0;
  /// Interactive: given the number of branches, returns a 0-based choice.
  std::function<std::size_t(std::size_t)> ask;

  static Scheduler first() { return {}; }
  static Scheduler fixed(std::vector<std::size_t> script);
  static Scheduler seeded(std::uint64_t seed);
  static Scheduler interactive(std::function<std::size_t(std::size_t)> ask);
};

struct Outcome {
  bool fuel_exhausted = false;
  TerminalKind kind = TerminalKind::Returned;  // meaningful when !fuel_exhausted
  Value value;
  std::string error;
  Configuration final;  // the terminal, or the last configuration reached
  std::size_t steps = 0;
};

/// 0 terminal, 2 fuel exhausted, 3 error halt.
int exit_code(const Outcome& o);

struct TraceEntry {
  std::string rule;
  Configuration config;  // after the step
};

struct Trace {
  Configuration initial;
  std::vector<TraceEntry> steps;
  Outcome outcome;
};

/// <M, nil, unit, s0>. Throws ComplexValuePresent.
Configuration inject(const Comp& m, const EffectSignature& sig);

StepResult step(const Configuration& cfg, const EffectSignature& sig);

/// Names of the transition rows whose left-hand side matches cfg. Used to
/// test determinism and terminality; step applies the unique match.
std::vector<std::string> matching_rules(const Configuration& cfg, const EffectSignature& sig);
bool is_terminal(const Configuration& cfg);

Outcome run(const Comp& m, const EffectSignature& sig, Scheduler sched, std::size_t fuel);
Trace trace(const Comp& m, const EffectSignature& sig, Scheduler sched, std::size_t fuel);

/// Every outcome over all resolutions of choice, deduplicated.
std::vector<Outcome> run_all(const Comp& m, const EffectSignature& sig, std::size_t fuel,
                             std::size_t max_configs = 1000000);

bool same_outcome(const Outcome& a, const Outcome& b);

/// "<M, K, m, s>" in concrete syntax.
std::string show_config(const Configuration& cfg);

}  // namespace dcbpv

#endif  // DCBPV_MACHINE_HPP
