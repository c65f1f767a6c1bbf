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

#include "dcbpv/machine.hpp"

#include <deque>
#include <optional>
#include <random>

#include <fmt/core.h>

#include "dcbpv/printer.hpp"

namespace dcbpv {

std::string_view terminal_kind_name(TerminalKind k) {
  switch (k) {
    case TerminalKind::Returned: return "Returned";
    case TerminalKind::ProdLambda: return "ProdLambda";
    case TerminalKind::PiLambda: return "PiLambda";
    case TerminalKind::StuckOnVar: return "StuckOnVar";
    case TerminalKind::ErrorHalt: return "ErrorHalt";
  }
  return "?";
}

Scheduler Scheduler::fixed(std::vector<std::size_t> script) {
  Scheduler s;
  s.kind = Kind::Fixed;
  s.script = std::move(script);
  return s;
}

Scheduler Scheduler::seeded(std::uint64_t seed) {
  Scheduler s;
  s.kind = Kind::Seeded;
  s.seed = seed;
  return s;
}

Scheduler Scheduler::interactive(std::function<std::size_t(std::size_t)> ask) {
  Scheduler s;
  s.kind = Kind::Interactive;
  s.ask = std::move(ask);
  return s;
}

int exit_code(const Outcome& o) {
  if (o.fuel_exhausted) return 2;
  if (o.kind == TerminalKind::ErrorHalt) return 3;
  return 0;
}

namespace {

template <typename Alt, typename T>
const Alt* as(const T& t) {
  return std::get_if<Alt>(&t->node);
}

template <typename F>
const F* top(const Configuration& c) {
  return c.stack ? std::get_if<F>(&c.stack->top) : nullptr;
}

Configuration with(const Configuration& c, Comp m, Stack k) {
  return Configuration{std::move(m), std::move(k), c.printed, c.state};
}

Configuration with(const Configuration& c, Comp m) { return with(c, std::move(m), c.stack); }

// One transition row: a left-hand-side test and its effect. Choose produces
// several successors.
struct Row {
  const char* name;
  std::function<bool(const Configuration&)> matches;
  std::function<std::vector<Configuration>(const Configuration&, const EffectSignature&)> fire;
};

std::vector<Configuration> one(Configuration c) { return {std::move(c)}; }

const std::vector<Row>& rows() {
  static const std::vector<Row> table = {
      {"let", [](const Configuration& c) { return as<comp::Let>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature&) {
         const auto* x = as<comp::Let>(c.comp);
         return one(with(c, substitute(x->body, x->bound)));
       }},
      {"to-push", [](const Configuration& c) { return as<comp::To>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature&) {
         const auto* x = as<comp::To>(c.comp);
         return one(with(c, x->head, push(frame::Seq{x->body, x->binder, x->motive}, c.stack)));
       }},
      {"return-pop",
       [](const Configuration& c) {
         return as<comp::Return>(c.comp) && top<frame::Seq>(c) != nullptr;
       },
       [](const Configuration& c, const EffectSignature&) {
         const auto* x = as<comp::Return>(c.comp);
         return one(with(c, substitute(top<frame::Seq>(c)->body, x->value), c.stack->rest));
       }},
      {"force-thunk",
       [](const Configuration& c) {
         const auto* f = as<comp::Force>(c.comp);
         return f && as<val::Thunk>(f->thunk);
       },
       [](const Configuration& c, const EffectSignature&) {
         return one(with(c, as<val::Thunk>(as<comp::Force>(c.comp)->thunk)->body));
       }},
      {"pm-sum",
       [](const Configuration& c) {
         const auto* p = as<comp::PmSum>(c.comp);
         if (!p) return false;
         const auto* i = as<val::Inj>(p->scrutinee);
         return i && i->tag < p->arms.size();
       },
       [](const Configuration& c, const EffectSignature&) {
         const auto* p = as<comp::PmSum>(c.comp);
         const auto* i = as<val::Inj>(p->scrutinee);
         return one(with(c, substitute(p->arms[i->tag], i->payload)));
       }},
      {"pm-pair",
       [](const Configuration& c) {
         const auto* p = as<comp::PmPair>(c.comp);
         return p && as<val::Pair>(p->scrutinee);
       },
       [](const Configuration& c, const EffectSignature&) {
         const auto* p = as<comp::PmPair>(c.comp);
         const auto* v = as<val::Pair>(p->scrutinee);
         return one(with(c, substitute_many(p->body, {v->second, v->first})));
       }},
      {"pm-unit",
       [](const Configuration& c) {
         const auto* p = as<comp::PmUnit>(c.comp);
         return p && as<val::Unit>(p->scrutinee);
       },
       [](const Configuration& c, const EffectSignature&) {
         return one(with(c, as<comp::PmUnit>(c.comp)->body));
       }},
      {"pm-id",
       [](const Configuration& c) {
         const auto* p = as<comp::PmId>(c.comp);
         return p && as<val::Refl>(p->scrutinee);
       },
       [](const Configuration& c, const EffectSignature&) {
         const auto* p = as<comp::PmId>(c.comp);
         return one(with(c, substitute(p->body, as<val::Refl>(p->scrutinee)->of)));
       }},
      {"proj-push", [](const Configuration& c) { return as<comp::Proj>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature&) {
         const auto* x = as<comp::Proj>(c.comp);
         return one(with(c, x->of, push(frame::Proj{x->tag}, c.stack)));
       }},
      {"tuple-pop",
       [](const Configuration& c) {
         const auto* t = as<comp::Tuple>(c.comp);
         const auto* f = top<frame::Proj>(c);
         return t && f && f->tag < t->arms.size();
       },
       [](const Configuration& c, const EffectSignature&) {
         const auto* t = as<comp::Tuple>(c.comp);
         return one(with(c, t->arms[top<frame::Proj>(c)->tag], c.stack->rest));
       }},
      {"arg-push", [](const Configuration& c) { return as<comp::Apply>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature&) {
         const auto* x = as<comp::Apply>(c.comp);
         return one(with(c, x->fun, push(frame::Arg{x->arg}, c.stack)));
       }},
      {"lambda-pop",
       [](const Configuration& c) {
         return as<comp::Lambda>(c.comp) && top<frame::Arg>(c) != nullptr;
       },
       [](const Configuration& c, const EffectSignature&) {
         const auto* l = as<comp::Lambda>(c.comp);
         return one(with(c, substitute(l->body, top<frame::Arg>(c)->arg), c.stack->rest));
       }},
      // Effects.
      {"diverge", [](const Configuration& c) { return as<comp::Diverge>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature&) { return one(c); }},
      {"mu", [](const Configuration& c) { return as<comp::Mu>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature&) {
         const auto* x = as<comp::Mu>(c.comp);
         return one(with(c, substitute(x->body, mk::thunk(c.comp))));
       }},
      {"choose", [](const Configuration& c) { return as<comp::Choose>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature&) {
         std::vector<Configuration> out;
         for (const auto& a : as<comp::Choose>(c.comp)->arms) out.push_back(with(c, a));
         return out;
       }},
      {"print", [](const Configuration& c) { return as<comp::Print>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature& sig) {
         const auto* x = as<comp::Print>(c.comp);
         Configuration n = with(c, x->body);
         n.printed = sig.monoid_mul(c.printed, x->element);
         return one(std::move(n));
       }},
      {"write", [](const Configuration& c) { return as<comp::Write>(c.comp) != nullptr; },
       [](const Configuration& c, const EffectSignature&) {
         const auto* x = as<comp::Write>(c.comp);
         Configuration n = with(c, x->body);
         n.state = x->state;
         return one(std::move(n));
       }},
      {"read",
       [](const Configuration& c) {
         const auto* r = as<comp::Read>(c.comp);
         if (!r) return false;
         for (const auto& a : r->arms) {
           if (a.state == c.state) return true;
         }
         return false;
       },
       [](const Configuration& c, const EffectSignature&) {
         for (const auto& a : as<comp::Read>(c.comp)->arms) {
           if (a.state == c.state) return one(with(c, a.body));
         }
         return std::vector<Configuration>{};
       }},
  };
  return table;
}

bool stuck_on_var(const Comp& m) {
  if (const auto* f = as<comp::Force>(m)) return as<val::Var>(f->thunk) != nullptr;
  if (const auto* p = as<comp::PmSum>(m)) return as<val::Var>(p->scrutinee) != nullptr;
  if (const auto* p = as<comp::PmPair>(m)) return as<val::Var>(p->scrutinee) != nullptr;
  if (const auto* p = as<comp::PmUnit>(m)) return as<val::Var>(p->scrutinee) != nullptr;
  if (const auto* p = as<comp::PmId>(m)) return as<val::Var>(p->scrutinee) != nullptr;
  return false;
}

std::optional<Terminal> terminal_of(const Configuration& c) {
  if (!c.stack) {
    if (const auto* r = as<comp::Return>(c.comp)) {
      return Terminal{TerminalKind::Returned, r->value, {}, c};
    }
    if (as<comp::Tuple>(c.comp)) return Terminal{TerminalKind::ProdLambda, nullptr, {}, c};
    if (as<comp::Lambda>(c.comp)) return Terminal{TerminalKind::PiLambda, nullptr, {}, c};
  }
  if (stuck_on_var(c.comp)) return Terminal{TerminalKind::StuckOnVar, nullptr, {}, c};
  if (const auto* e = as<comp::Error>(c.comp)) {
    return Terminal{TerminalKind::ErrorHalt, nullptr, e->name, c};
  }
  return std::nullopt;
}

std::size_t pick(Scheduler& s, std::size_t n, std::size_t& used, std::mt19937_64& rng) {
  switch (s.kind) {
    case Scheduler::Kind::First:
      return 0;
    case Scheduler::Kind::Fixed: {
      if (used >= s.script.size()) {
        throw MachineError(MachineErrorKind::ScriptExhausted,
                           fmt::format("choice script exhausted after {} choices", used));
      }
      std::size_t i = s.script[used++];
      if (i >= n) {
        throw MachineError(MachineErrorKind::ScriptExhausted,
                           fmt::format("choice {} out of range for {} branches", i + 1, n));
      }
      return i;
    }
    case Scheduler::Kind::Seeded:
      return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    case Scheduler::Kind::Interactive: {
      std::size_t i = s.ask(n);
      if (i >= n) {
        throw MachineError(MachineErrorKind::ScriptExhausted,
                           fmt::format("choice {} out of range for {} branches", i + 1, n));
      }
      return i;
    }
  }
  return 0;
}

Outcome from_terminal(const Terminal& t, std::size_t steps) {
  Outcome o;
  o.kind = t.kind;
  o.value = t.value;
  o.error = t.error;
  o.final = t.final;
  o.steps = steps;
  return o;
}

Outcome drive(const Comp& m, const EffectSignature& sig, Scheduler sched, std::size_t fuel,
              Trace* log) {
  Configuration c = inject(m, sig);
  if (log) log->initial = c;
  std::mt19937_64 rng(sched.seed);
  std::size_t used = 0;
  for (std::size_t n = 0;; ++n) {
    StepResult r = step(c, sig);
    if (const auto* t = std::get_if<Terminal>(&r)) return from_terminal(*t, n);
    if (n >= fuel) {
      Outcome o;
      o.fuel_exhausted = true;
      o.final = c;
      o.steps = n;
      return o;
    }
    std::string rule;
    if (auto* s = std::get_if<Stepped>(&r)) {
      rule = s->rule;
      c = std::move(s->next);
    } else {
      auto& ch = std::get<NeedsChoice>(r);
      if (ch.branches.empty()) {
        throw MachineError(MachineErrorKind::IllTyped, "choose with no branches");
      }
      std::size_t i = pick(sched, ch.branches.size(), used, rng);
      rule = fmt::format("choose[{}]", i + 1);
      c = std::move(ch.branches[i]);
    }
    if (log) log->steps.push_back(TraceEntry{rule, c});
  }
}

}  // namespace

std::vector<std::string> matching_rules(const Configuration& cfg, const EffectSignature&) {
  std::vector<std::string> out;
  for (const auto& r : rows()) {
    if (r.matches(cfg)) out.push_back(r.name);
  }
  return out;
}

bool is_terminal(const Configuration& cfg) { return terminal_of(cfg).has_value(); }

Configuration inject(const Comp& m, const EffectSignature& sig) {
  if (!complex_value_free(m)) {
    throw MachineError(MachineErrorKind::ComplexValuePresent,
                       "the computation contains complex values; eliminate them first");
  }
  return Configuration{m, nullptr, sig.monoid_unit(), sig.initial()};
}

StepResult step(const Configuration& cfg, const EffectSignature& sig) {
  const Row* hit = nullptr;
  for (const auto& r : rows()) {
    if (!r.matches(cfg)) continue;
    if (hit) {
      throw MachineError(MachineErrorKind::IllTyped,
                         fmt::format("rows '{}' and '{}' both apply", hit->name, r.name));
    }
    hit = &r;
  }
  if (!hit) {
    if (auto t = terminal_of(cfg)) return *t;
    throw MachineError(MachineErrorKind::IllTyped,
                       "no transition applies to the non-terminal configuration " +
                           show_config(cfg));
  }
  auto next = hit->fire(cfg, sig);
  if (std::string_view(hit->name) == "choose") return NeedsChoice{std::move(next)};
  return Stepped{hit->name, std::move(next.front())};
}

Outcome run(const Comp& m, const EffectSignature& sig, Scheduler sched, std::size_t fuel) {
  return drive(m, sig, std::move(sched), fuel, nullptr);
}

Trace trace(const Comp& m, const EffectSignature& sig, Scheduler sched, std::size_t fuel) {
  Trace t;
  t.outcome = drive(m, sig, std::move(sched), fuel, &t);
  return t;
}

bool same_outcome(const Outcome& a, const Outcome& b) {
  if (a.fuel_exhausted != b.fuel_exhausted) return false;
  if (a.fuel_exhausted) {
    return alpha_eq(a.final.comp, b.final.comp) && alpha_eq(a.final.stack, b.final.stack) &&
           a.final.printed == b.final.printed && a.final.state == b.final.state;
  }
  return a.kind == b.kind && alpha_eq(a.final.comp, b.final.comp) &&
         alpha_eq(a.final.stack, b.final.stack) && a.final.printed == b.final.printed &&
         a.final.state == b.final.state;
}

std::vector<Outcome> run_all(const Comp& m, const EffectSignature& sig, std::size_t fuel,
                             std::size_t max_configs) {
  std::vector<Outcome> out;
  auto add = [&](Outcome o) {
    for (const auto& e : out) {
      if (same_outcome(e, o)) return;
    }
    out.push_back(std::move(o));
  };
  std::deque<std::pair<Configuration, std::size_t>> work;
  work.emplace_back(inject(m, sig), 0);
  std::size_t visited = 0;
  while (!work.empty()) {
    auto [c, n] = std::move(work.front());
    work.pop_front();
    if (++visited > max_configs) {
      throw MachineError(MachineErrorKind::ExplorationCap,
                         fmt::format("exploration exceeded {} configurations", max_configs));
    }
    StepResult r = step(c, sig);
    if (const auto* t = std::get_if<Terminal>(&r)) {
      add(from_terminal(*t, n));
      continue;
    }
    if (n >= fuel) {
      Outcome o;
      o.fuel_exhausted = true;
      o.final = c;
      o.steps = n;
      add(std::move(o));
      continue;
    }
    if (auto* s = std::get_if<Stepped>(&r)) {
      work.emplace_back(std::move(s->next), n + 1);
    } else {
      for (auto& b : std::get<NeedsChoice>(r).branches) work.emplace_back(std::move(b), n + 1);
    }
  }
  return out;
}

std::string show_config(const Configuration& cfg) {
  return fmt::format("<{}, {}, {}, {}>", show(cfg.comp), show(cfg.stack),
                     show_element(cfg.printed), cfg.state);
}

}  // namespace dcbpv
