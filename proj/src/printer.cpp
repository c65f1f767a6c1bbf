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

#include "dcbpv/printer.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "dcbpv/overloaded.hpp"

namespace dcbpv {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs, const std::string& sep, auto&& fn) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += sep;
    out += fn(xs[i], i);
  }
  return out;
}

// Forms whose last component extends as far as possible; they need
// parentheses wherever something may follow them.
bool open_ended(const Comp& m) {
  return std::holds_alternative<comp::To>(m->node) ||
         std::holds_alternative<comp::Lambda>(m->node) ||
         std::holds_alternative<comp::Let>(m->node) ||
         std::holds_alternative<comp::PmUnit>(m->node) ||
         std::holds_alternative<comp::PmSum>(m->node) ||
         std::holds_alternative<comp::PmPair>(m->node) ||
         std::holds_alternative<comp::PmId>(m->node) ||
         std::holds_alternative<comp::Mu>(m->node);
}

bool value_atomic(const Value& v) {
  return std::holds_alternative<val::Var>(v->node) ||
         std::holds_alternative<val::Unit>(v->node) ||
         std::holds_alternative<val::Inj>(v->node) ||
         std::holds_alternative<val::Pair>(v->node);
}

bool vtype_atomic(const VType& t) {
  return std::holds_alternative<vt::Unit>(t->node) || std::holds_alternative<vt::Sum>(t->node);
}

class Printer {
 public:
  explicit Printer(Names names) : names_(std::move(names)) {}

  std::string fresh(const std::string& base) {
    std::string candidate = fmt::format("{}{}", base, names_.size());
    while (std::find(names_.begin(), names_.end(), candidate) != names_.end()) {
      candidate += "_";
    }
    return candidate;
  }

  // Runs fn with `n` fresh names bound; returns fn's result.
  template <typename Fn>
  std::string with(const std::vector<std::string>& bound, Fn fn) {
    for (const auto& b : bound) names_.push_back(b);
    std::string out = fn();
    names_.resize(names_.size() - bound.size());
    return out;
  }

  std::string bind1(const std::string& base, auto fn) {
    std::string x = fresh(base);
    return with({x}, [&] { return fn(x); });
  }

  std::string var(std::size_t i) const {
    if (i < names_.size()) return names_[names_.size() - 1 - i];
    return fmt::format("#{}", i);
  }

  std::string vtype(const VType& t) {
    return std::visit(
        overloaded{
            [&](const vt::U& x) { return "U " + ctype(x.body); },
            [&](const vt::Unit&) { return std::string("Unit"); },
            [&](const vt::Sum& x) {
              return "Sum(" + join(x.arms, ", ", [&](const VType& a, auto) { return vtype(a); }) +
                     ")";
            },
            [&](const vt::Sigma& x) {
              std::string first = vtype(x.first);
              return bind1("x", [&](const std::string& n) {
                return fmt::format("Sigma {} : {}. {}", n, first, vtype(x.second));
              });
            },
            [&](const vt::Id& x) {
              return fmt::format("Id {} {} {}", vtype_atom(x.carrier), value_atom(x.lhs),
                                 value_atom(x.rhs));
            },
        },
        t->node);
  }

  std::string vtype_atom(const VType& t) {
    if (vtype_atomic(t)) return vtype(t);
    return "(" + vtype(t) + ")";
  }

  std::string ctype(const CType& t) {
    return std::visit(
        overloaded{
            [&](const ct::F& x) { return "F " + vtype(x.returns); },
            [&](const ct::Prod& x) {
              return "Prod(" +
                     join(x.arms, ", ", [&](const CType& a, auto) { return ctype(a); }) + ")";
            },
            [&](const ct::Pi& x) {
              std::string dom = vtype(x.domain);
              return bind1("x", [&](const std::string& n) {
                return fmt::format("Pi {} : {}. {}", n, dom, ctype(x.codomain));
              });
            },
        },
        t->node);
  }

  std::string value_atom(const Value& v) {
    if (value_atomic(v)) return value(v);
    return "(" + value(v) + ")";
  }

  // Branch syntax shared by value and computation pattern matches.
  template <typename Body>
  std::string branches_sum(const std::vector<Body>& arms, auto&& body) {
    std::string out = "{";
    for (std::size_t i = 0; i < arms.size(); ++i) {
      out += i == 0 ? " " : " | ";
      out += bind1("x", [&](const std::string& n) {
        return fmt::format("({}, {}). {}", i + 1, n, body(arms[i]));
      });
    }
    return out + (arms.empty() ? "}" : " }");
  }

  std::string value(const Value& v) {
    return std::visit(
        overloaded{
            [&](const val::Var& x) { return var(x.index); },
            [&](const val::Thunk& x) { return "thunk " + comp_arg(x.body); },
            [&](const val::Unit&) { return std::string("()"); },
            [&](const val::Inj& x) { return fmt::format("({}, {})", x.tag + 1, value(x.payload)); },
            [&](const val::Pair& x) {
              return fmt::format("({}, {})", value(x.first), value(x.second));
            },
            [&](const val::Refl& x) { return "refl " + value_atom(x.of); },
            [&](const val::Let& x) {
              std::string bound = value(x.bound);
              return bind1("x", [&](const std::string& n) {
                return fmt::format("let {} = {} in {}", n, bound, value(x.body));
              });
            },
            [&](const val::PmUnit& x) {
              return fmt::format("pm {} as (). {}", value_atom(x.scrutinee), value(x.body));
            },
            [&](const val::PmSum& x) {
              return fmt::format("pm {} as {}", value_atom(x.scrutinee),
                                 branches_sum(x.arms, [&](const Value& b) { return value(b); }));
            },
            [&](const val::PmPair& x) {
              std::string a = fresh("x");
              names_.push_back(a);
              std::string b = fresh("x");
              names_.pop_back();
              return fmt::format("pm {} as ({}, {}). {}", value_atom(x.scrutinee), a, b,
                                 with({a, b}, [&] { return value(x.body); }));
            },
            [&](const val::PmId& x) {
              std::string scr = value_atom(x.scrutinee);
              return bind1("x", [&](const std::string& n) {
                return fmt::format("pm {} as refl {}. {}", scr, n, value(x.body));
              });
            },
        },
        v->node);
  }

  std::string motive(const std::optional<Motive>& m, const std::vector<std::string>& bound) {
    if (!m) return "";
    std::vector<std::string> all = bound;
    std::string out = " [" + join(bound, ", ", [](const std::string& s, auto) { return s; });
    for (const auto& e : m->extension) {
      std::string ty = with(all, [&] { return vtype(e); });
      names_.insert(names_.end(), all.begin(), all.end());
      std::string n = fresh("w");
      names_.resize(names_.size() - all.size());
      out += fmt::format(", {} : {}", n, ty);
      all.push_back(n);
    }
    out += " |- " + with(all, [&] { return ctype(m->result); }) + "]";
    return out;
  }

  std::vector<std::string> fresh_many(const std::vector<std::string>& bases) {
    std::vector<std::string> out;
    for (const auto& b : bases) {
      out.push_back(fresh(b));
      names_.push_back(out.back());
    }
    names_.resize(names_.size() - out.size());
    return out;
  }

  // A computation in argument position: parenthesized when open-ended.
  std::string comp_arg(const Comp& m) {
    if (open_ended(m)) return "(" + comp(m) + ")";
    return comp(m);
  }

  std::string comp(const Comp& m) {
    return std::visit(
        overloaded{
            [&](const comp::Return& x) { return "return " + value(x.value); },
            [&](const comp::To& x) {
              std::string head = comp_arg(x.head);
              std::string ann = x.binder ? " : " + vtype(*x.binder) : "";
              std::string mot = motive(x.motive, fresh_many({"z"}));
              return bind1("x", [&](const std::string& n) {
                return fmt::format("{} to {}{}{}. {}", head, n, ann, mot, comp(x.body));
              });
            },
            [&](const comp::Force& x) { return "force " + value_atom(x.thunk); },
            [&](const comp::Tuple& x) {
              if (x.arms.empty()) return std::string("lam { }");
              return "lam { " + join(x.arms, " | ", [&](const Comp& a, auto) { return comp(a); }) +
                     " }";
            },
            [&](const comp::Proj& x) { return fmt::format("{} ' {}", x.tag + 1, comp_arg(x.of)); },
            [&](const comp::Lambda& x) {
              std::string dom = vtype(x.domain);
              return bind1("x", [&](const std::string& n) {
                return fmt::format("lam {} : {}. {}", n, dom, comp(x.body));
              });
            },
            [&](const comp::Apply& x) {
              return fmt::format("{} ' {}", value_atom(x.arg), comp_arg(x.fun));
            },
            [&](const comp::Let& x) {
              std::string bound = value(x.bound);
              std::string ann = x.binder ? " : " + vtype(*x.binder) : "";
              return bind1("x", [&](const std::string& n) {
                return fmt::format("let {}{} = {} in {}", n, ann, bound, comp(x.body));
              });
            },
            [&](const comp::PmUnit& x) {
              return fmt::format("pm {} as{} (). {}", value_atom(x.scrutinee),
                                 motive(x.motive, fresh_many({"z"})), comp(x.body));
            },
            [&](const comp::PmSum& x) {
              return fmt::format("pm {} as{} {}", value_atom(x.scrutinee),
                                 motive(x.motive, fresh_many({"z"})),
                                 branches_sum(x.arms, [&](const Comp& b) { return comp(b); }));
            },
            [&](const comp::PmPair& x) {
              auto ab = fresh_many({"x", "x"});
              return fmt::format("pm {} as{} ({}, {}). {}", value_atom(x.scrutinee),
                                 motive(x.motive, fresh_many({"z"})), ab[0], ab[1],
                                 with(ab, [&] { return comp(x.body); }));
            },
            [&](const comp::PmId& x) {
              std::string scr = value_atom(x.scrutinee);
              std::string mot = motive(x.motive, fresh_many({"x", "x", "p"}));
              return bind1("x", [&](const std::string& n) {
                return fmt::format("pm {} as{} refl {}. {}", scr, mot, n, comp(x.body));
              });
            },
            [&](const comp::Diverge&) { return std::string("diverge"); },
            [&](const comp::Mu& x) {
              std::string ann = x.type ? " : " + ctype(*x.type) : "";
              return bind1("z", [&](const std::string& n) {
                return fmt::format("mu {}{}. {}", n, ann, comp(x.body));
              });
            },
            [&](const comp::Print& x) {
              return fmt::format("print {} {}", quote(x.element), comp_arg(x.body));
            },
            [&](const comp::Choose& x) {
              return "choose { " +
                     join(x.arms, " | ", [&](const Comp& a, auto) { return comp(a); }) + " }";
            },
            [&](const comp::Error& x) { return "error " + x.name; },
            [&](const comp::Write& x) {
              return fmt::format("write {} {}", x.state, comp_arg(x.body));
            },
            [&](const comp::Read& x) {
              return "read { " +
                     join(x.arms, " | ",
                          [&](const comp::ReadArm& a, auto) {
                            return a.state + " -> " + comp(a.body);
                          }) +
                     " }";
            },
        },
        m->node);
  }

  std::string stack(const Stack& k) {
    std::string out;
    for (const StackCell* c = k.get(); c != nullptr; c = c->rest.get()) {
      out += std::visit(
          overloaded{
              [&](const frame::Seq& x) {
                std::string ann = x.binder ? " : " + vtype(*x.binder) : "";
                std::string mot = motive(x.motive, fresh_many({"z"}));
                return bind1("x", [&](const std::string& n) {
                  return fmt::format("([.] to {}{}{}. {})", n, ann, mot, comp(x.body));
                });
              },
              [&](const frame::Proj& x) { return fmt::format("{}", x.tag + 1); },
              [&](const frame::Arg& x) { return value_atom(x.arg); },
          },
          c->top);
      out += " :: ";
    }
    return out + "nil";
  }

 private:
  Names names_;
};

}  // namespace

std::string show(const VType& t, const Names& names) { return Printer(names).vtype(t); }
std::string show(const CType& t, const Names& names) { return Printer(names).ctype(t); }
std::string show(const Value& v, const Names& names) { return Printer(names).value(v); }
std::string show(const Comp& m, const Names& names) { return Printer(names).comp(m); }
std::string show(const Stack& k, const Names& names) { return Printer(names).stack(k); }

std::string show_element(const std::string& m) { return m.empty() ? "ε" : m; }

std::string show_signature(const EffectSignature& sig) {
  std::string out = "effects {\n";
  if (const auto* t = std::get_if<FiniteTableMonoid>(&sig.monoid)) {
    out += "  monoid table { " +
           join(t->elements, ", ", [](const std::string& s, auto) { return s; }) + "; unit " +
           t->elements[t->unit] + ";";
    for (std::size_t a = 0; a < t->elements.size(); ++a) {
      for (std::size_t b = 0; b < t->elements.size(); ++b) {
        if (a == t->unit || b == t->unit) continue;
        out += fmt::format(" {} * {} = {};", t->elements[a], t->elements[b],
                           t->elements[t->table[a][b]]);
      }
    }
    out += " };\n";
  } else {
    out += "  monoid free;\n";
  }
  out += "  states { " +
         join(sig.states, ", ",
              [&](const std::string& s, std::size_t i) {
                return i == sig.initial_state ? s + "*" : s;
              }) +
         " };\n";
  out += "  errors { " + join(sig.errors, ", ", [](const std::string& s, auto) { return s; }) +
         " };\n";
  if (!sig.enabled.empty()) {
    out += "  enable " +
           join(sig.enabled, ", ", [](Effect e, auto) { return std::string(effect_name(e)); }) +
           ";\n";
  }
  out += "}";
  return out;
}

}  // namespace dcbpv
