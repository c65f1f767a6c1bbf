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

#include "dcbpv/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dcbpv/equality.hpp"
#include "dcbpv/machine.hpp"
#include "dcbpv/model.hpp"
#include "dcbpv/printer.hpp"
#include "dcbpv/translate.hpp"
#include "dcbpv/typecheck.hpp"

namespace dcbpv {

namespace {

using json = nlohmann::json;

struct Flags {
  std::string command;
  std::string file;
  std::string variant = "minus";
  std::string strategy = "cbv";
  std::string scheduler = "first";
  std::size_t fuel = 10000;
  std::string monad = "exception";
  std::size_t cap = 1000000;
  bool json = false;
  bool explain = false;
  bool no_shrink = false;
  bool figure4 = false;
};

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage(fmt::format("cannot read '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Variant variant_of(const Flags& f) { return f.variant == "plus" ? Variant::Plus : Variant::Minus; }

CheckOptions check_options(const Flags& f) {
  CheckOptions o;
  o.variant = variant_of(f);
  o.allow_shrink = !f.no_shrink;
  return o;
}

struct Paint {
  bool on;
  std::string operator()(std::string_view code, const std::string& s) const {
    if (!on) return s;
    return fmt::format("\x1b[{}m{}\x1b[0m", code, s);
  }
};

// "(2, ())" becomes "(2,())"; quoted text is left alone.
std::string compact(const std::string& s) {
  std::string out;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    out += c;
    if (!quoted && c == ',' && i + 1 < s.size() && s[i + 1] == ' ') ++i;
  }
  return out;
}

int parse_failure(const CliStreams& io, const Flags& f, const ParseError& e) {
  if (f.json) {
    io.out << json{{"command", f.command},
                   {"ok", false},
                   {"error",
                    {{"kind", "ParseError"},
                     {"message", e.what()},
                     {"line", e.span().line},
                     {"column", e.span().column}}}}
                  .dump(2)
           << "\n";
  } else {
    io.err << fmt::format("{}:{}:{}: parse error: {}\n", f.file, e.span().line, e.span().column,
                          e.what());
  }
  return kExitTypeError;
}

int type_failure(const CliStreams& io, const Flags& f, const TypeError& e) {
  if (f.json) {
    io.out << json{{"command", f.command}, {"ok", false}, {"error", json::parse(e.json())}}.dump(2)
           << "\n";
  } else {
    io.err << Paint{io.color}("31", e.render(f.file)) << "\n";
  }
  return kExitTypeError;
}

// Checks the context, main and every equation.
void check_program(const ProgramFile& p, const CheckOptions& co) {
  Context ctx;
  for (const auto& e : p.context) {
    wf_vtype(ctx, e.type, p.signature, co);
    ctx = ctx.extend(e.type, e.name);
  }
  if (p.main) {
    wf_ctype(ctx, *p.main_type, p.signature, co);
    check_comp(ctx, *p.main, *p.main_type, p.signature, co);
  }
  for (const auto& eq : p.equations) {
    Context ec;
    for (const auto& e : eq.context) {
      wf_vtype(ec, e.type, p.signature, co);
      ec = ec.extend(e.type, e.name);
    }
    wf_ctype(ec, eq.type, p.signature, co);
    check_comp(ec, eq.lhs, eq.type, p.signature, co);
    check_comp(ec, eq.rhs, eq.type, p.signature, co);
  }
}

int cmd_check(const CliStreams& io, const Flags& f) {
  ProgramFile p = parse_program(read_file(f.file));
  check_program(p, check_options(f));
  std::vector<std::string> steps;
  if (f.explain && p.main) {
    StepLog log;
    normalize(*p.main, ConvOptions{}, &log);
    steps = log.lines;
  }
  Names ns = p.context_names();
  if (f.json) {
    json out{{"command", "check"}, {"ok", true}, {"variant", f.variant}};
    if (p.main) out["main_type"] = show(*p.main_type, ns);
    json eqs = json::array();
    for (const auto& eq : p.equations) eqs.push_back(eq.name);
    out["equations"] = eqs;
    if (f.explain) out["explain"] = steps;
    io.out << out.dump(2) << "\n";
    return kExitOk;
  }
  Paint paint{io.color};
  if (p.main) io.out << paint("32", "OK") << ": " << show(*p.main_type, ns) << "\n";
  for (const auto& eq : p.equations) io.out << paint("32", "OK") << ": equation " << eq.name << "\n";
  if (!p.main && p.equations.empty()) io.out << paint("32", "OK") << "\n";
  for (const auto& s : steps) io.out << "  " << s << "\n";
  return kExitOk;
}

// ---- running ----

Scheduler scheduler_of(const Flags& f, const CliStreams& io) {
  const std::string& s = f.scheduler;
  if (s == "first") return Scheduler::first();
  if (s.rfind("fixed:", 0) == 0) {
    std::vector<std::size_t> script;
    std::stringstream ss(s.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t k = std::stoul(item);
        if (k == 0) throw Usage("fixed choices are 1-based");
        script.push_back(k - 1);
      } catch (const std::logic_error&) {
        throw Usage(fmt::format("bad choice '{}' in --scheduler", item));
      }
    }
    return Scheduler::fixed(script);
  }
  if (s.rfind("seeded:", 0) == 0) {
    try {
      return Scheduler::seeded(std::stoull(s.substr(7)));
    } catch (const std::logic_error&) {
      throw Usage("bad seed in --scheduler");
    }
  }
  if (s == "interactive") {
    return Scheduler::interactive([&io](std::size_t n) -> std::size_t {
      for (;;) {
        io.out << fmt::format("choice k of {}? ", n) << std::flush;
        std::size_t k = 0;
        if (!(io.in >> k)) return 0;
        if (k >= 1 && k <= n) return k - 1;
      }
    });
  }
  throw Usage(fmt::format("unknown scheduler '{}'", s));
}

std::string outcome_head(const Outcome& o) {
  if (o.fuel_exhausted) return "FuelExhausted";
  std::string kind(terminal_kind_name(o.kind));
  if (o.kind == TerminalKind::Returned) return kind + " " + compact(show(o.value));
  if (o.kind == TerminalKind::ErrorHalt) return kind + " " + o.error;
  return kind;
}

std::string outcome_line(const Outcome& o) {
  return fmt::format("{} | printed {} | state {} | {} steps", outcome_head(o),
                     show_element(o.final.printed), o.final.state, o.steps);
}

json outcome_json(const Outcome& o) {
  json j{{"terminal", o.fuel_exhausted ? "FuelExhausted" : std::string(terminal_kind_name(o.kind))},
         {"printed", o.final.printed},
         {"state", o.final.state},
         {"steps", o.steps},
         {"exit", exit_code(o)}};
  if (!o.fuel_exhausted && o.kind == TerminalKind::Returned) j["value"] = compact(show(o.value));
  if (!o.fuel_exhausted && o.kind == TerminalKind::ErrorHalt) j["error"] = o.error;
  return j;
}

// Parses, checks and prepares a closed main for the machine.
Comp runnable(const ProgramFile& p, const Flags& f) {
  check_program(p, check_options(f));
  if (!p.main) throw Usage("the program has no main");
  if (!p.context.empty()) throw Usage("run and trace need a closed main (no context block)");
  return complex_value_free(*p.main) ? *p.main : eliminate_complex_values(*p.main);
}

void warn_stuck(const CliStreams& io, const Outcome& o) {
  if (!o.fuel_exhausted && o.kind == TerminalKind::StuckOnVar) {
    io.err << "warning: the machine is stuck on a free variable\n";
  }
}

int cmd_run(const CliStreams& io, const Flags& f) {
  ProgramFile p = parse_program(read_file(f.file));
  Comp m = runnable(p, f);
  std::vector<Outcome> outcomes;
  std::vector<std::string> rules;
  if (f.scheduler == "all") {
    outcomes = run_all(m, p.signature, f.fuel);
  } else if (f.explain) {
    Trace t = trace(m, p.signature, scheduler_of(f, io), f.fuel);
    for (const auto& s : t.steps) rules.push_back(s.rule);
    outcomes.push_back(t.outcome);
  } else {
    outcomes.push_back(run(m, p.signature, scheduler_of(f, io), f.fuel));
  }
  int code = kExitOk;
  for (const auto& o : outcomes) {
    if (code == kExitOk) code = exit_code(o);
    warn_stuck(io, o);
  }
  if (f.json) {
    json out{{"command", "run"}, {"ok", true}, {"outcomes", json::array()}};
    for (const auto& o : outcomes) out["outcomes"].push_back(outcome_json(o));
    if (f.explain) out["explain"] = rules;
    io.out << out.dump(2) << "\n";
    return code;
  }
  for (const auto& r : rules) io.out << "  " << r << "\n";
  for (const auto& o : outcomes) io.out << outcome_line(o) << "\n";
  return code;
}

int cmd_trace(const CliStreams& io, const Flags& f) {
  ProgramFile p = parse_program(read_file(f.file));
  Comp m = runnable(p, f);
  Trace t = trace(m, p.signature, scheduler_of(f, io), f.fuel);
  warn_stuck(io, t.outcome);
  if (f.json) {
    json steps = json::array();
    for (const auto& s : t.steps) steps.push_back({{"rule", s.rule}, {"config", show_config(s.config)}});
    io.out << json{{"command", "trace"},
                   {"ok", true},
                   {"initial", show_config(t.initial)},
                   {"steps", steps},
                   {"outcome", outcome_json(t.outcome)}}
                  .dump(2)
           << "\n";
    return exit_code(t.outcome);
  }
  Paint paint{io.color};
  io.out << fmt::format("{:>4}  {}\n", 0, show_config(t.initial));
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    io.out << fmt::format("{:>4}  {}  {}\n", i + 1, paint("36", t.steps[i].rule),
                          show_config(t.steps[i].config));
  }
  io.out << outcome_line(t.outcome) << "\n";
  return exit_code(t.outcome);
}

// ---- translation ----

int cmd_translate(const CliStreams& io, const Flags& f) {
  SrcProgram src = parse_source(read_file(f.file));
  Strategy s = f.strategy == "cbn" ? Strategy::CBN : Strategy::CBV;
  ProgramFile p;
  try {
    p = translate_program(src, s, variant_of(f));
  } catch (const TranslateError& e) {
    if (f.json) {
      io.out << json{{"command", "translate"},
                     {"ok", false},
                     {"error", {{"kind", translate_error_name(e.kind())}, {"message", e.what()}}}}
                    .dump(2)
             << "\n";
    } else {
      io.err << Paint{io.color}("31", fmt::format("{}: {}", translate_error_name(e.kind()), e.what()))
             << "\n";
    }
    return kExitTypeError;
  }
  std::string text = show_program(p);
  // The output is only useful if it checks; report it either way.
  std::optional<TypeError> bad;
  try {
    check_program(p, check_options(f));
  } catch (const TypeError& e) {
    bad = e;
  }
  if (f.json) {
    json out{{"command", "translate"},
             {"ok", !bad},
             {"strategy", f.strategy},
             {"variant", f.variant},
             {"program", text}};
    if (bad) out["error"] = json::parse(bad->json());
    io.out << out.dump(2) << "\n";
  } else {
    io.out << text;
    if (bad) io.err << Paint{io.color}("31", bad->render()) << "\n";
  }
  return bad ? kExitTypeError : kExitOk;
}

// ---- model checking ----

struct Row {
  std::string equation;
  std::size_t instantiations = 0;
  std::size_t environments = 0;
  std::string verdict = "Equal";
  std::string detail;
};

int worse(const std::string& v) {
  if (v == "Equal") return 0;
  if (v == "CapExceeded") return 1;
  return 2;
}

void add_verdict(Row& r, const Verdict& v, const std::string& where) {
  ++r.instantiations;
  r.environments += v.environments;
  std::string name(verdict_name(v.kind));
  if (worse(name) > worse(r.verdict)) {
    r.verdict = name;
    if (v.kind == Verdict::Kind::Counterexample) {
      r.detail = fmt::format("{}{}: {} /= {}", where, v.env, v.lhs, v.rhs);
    }
  }
}

FinMonadSpec monad_of(const Flags& f, const EffectSignature& sig) {
  if (f.monad == "writer") {
    const auto* t = std::get_if<FiniteTableMonoid>(&sig.monoid);
    if (!t) throw Usage("--monad writer needs a monoid table in the header");
    return WriterSpec{*t};
  }
  if (f.monad == "tree") return FreeSpec{sig};
  ExceptionSpec e;
  if (sig.enables(Effect::Error)) e.errors = sig.errors;
  return e;
}

int cmd_model_check(const CliStreams& io, const Flags& f) {
  ModelOptions mo;
  mo.cap = f.cap;
  std::vector<Row> rows;
  std::map<std::string, std::size_t> at;
  auto row = [&](const std::string& name) -> Row& {
    auto it = at.find(name);
    if (it != at.end()) return rows[it->second];
    at[name] = rows.size();
    rows.push_back(Row{name, 0, 0, "Equal", {}});
    return rows.back();
  };
  if (f.figure4) {
    for (const auto& r : check_figure4(figure4_grid(), mo)) {
      add_verdict(row(r.equation), r.verdict, "[" + r.instance + "] ");
    }
  } else {
    if (f.file.empty()) throw Usage("model-check needs a file or --figure4");
    ProgramFile p = parse_program(read_file(f.file));
    check_program(p, check_options(f));
    mo.sig = p.signature;
    mo.variant = variant_of(f);
    FinMonadSpec spec = monad_of(f, p.signature);
    for (const auto& eq : p.equations) {
      Context ctx;
      for (const auto& e : eq.context) ctx = ctx.extend(e.type, e.name);
      Row& r = row(eq.name);
      try {
        add_verdict(r, check_equation(ctx, eq.lhs, eq.rhs, eq.type, spec, mo), "");
      } catch (const ModelError& e) {
        r.instantiations = 1;
        r.verdict = "Unsupported";
        r.detail = e.what();
      }
    }
  }
  bool all_equal = true;
  for (const auto& r : rows) all_equal = all_equal && r.verdict == "Equal";
  if (f.json) {
    json out{{"command", "model-check"}, {"ok", true}, {"all_equal", all_equal}, {"rows", json::array()}};
    for (const auto& r : rows) {
      json j{{"equation", r.equation},
             {"instantiations", r.instantiations},
             {"environments", r.environments},
             {"verdict", r.verdict}};
      if (!r.detail.empty()) j["detail"] = r.detail;
      out["rows"].push_back(j);
    }
    io.out << out.dump(2) << "\n";
    return kExitOk;
  }
  Paint paint{io.color};
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.equation.size());
  io.out << fmt::format("{:<{}}  {:>14}  {:>12}  {}\n", "equation", w, "instantiations", "environments",
                        "verdict");
  for (const auto& r : rows) {
    std::string v = paint(r.verdict == "Equal" ? "32" : "31", r.verdict);
    io.out << fmt::format("{:<{}}  {:>14}  {:>12}  {}\n", r.equation, w, r.instantiations, r.environments, v);
    if (!r.detail.empty()) io.out << "    " << r.detail << "\n";
  }
  return kExitOk;
}

int dispatch(const CliStreams& io, const Flags& f) {
  try {
    if (f.command == "check") return cmd_check(io, f);
    if (f.command == "run") return cmd_run(io, f);
    if (f.command == "trace") return cmd_trace(io, f);
    if (f.command == "translate") return cmd_translate(io, f);
    return cmd_model_check(io, f);
  } catch (const ParseError& e) {
    return parse_failure(io, f, e);
  } catch (const TypeError& e) {
    return type_failure(io, f, e);
  } catch (const Usage& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MachineError& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitTypeError;
  } catch (const ModelError& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitTypeError;
  }
}

}  // namespace

bool color_from_env() {
  const char* v = std::getenv("DCBPV_COLOR");
  return !(v && std::string(v) == "0");
}

int run_cli(const std::vector<std::string>& argv, CliStreams io) {
  Flags f;
  CLI::App app{"Dependent call-by-push-value toolchain", "dcbpv"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, bool needs_file) {
    auto* file = sub->add_option("file", f.file, "input file");
    if (needs_file) file->required();
    sub->add_option("--variant", f.variant, "minus or plus")->check(CLI::IsMember({"minus", "plus"}));
    sub->add_flag("--json", f.json, "machine-readable output");
    sub->add_flag("--no-shrink", f.no_shrink, "disable shrink coercion in dCBPV+");
  };
  auto* check = app.add_subcommand("check", "type-check a program");
  common(check, true);
  check->add_flag("--explain", f.explain, "print the normalization steps of main");

  for (auto [name, help] : {std::pair{"run", "run main on the abstract machine"},
                            std::pair{"trace", "print every machine configuration"}}) {
    auto* sub = app.add_subcommand(name, help);
    common(sub, true);
    sub->add_option("--scheduler", f.scheduler, "first | fixed:<i,j,...> | seeded:<n> | interactive | all");
    sub->add_option("--fuel", f.fuel, "step bound")->check(CLI::PositiveNumber);
    if (std::string(name) == "run") sub->add_flag("--explain", f.explain, "print the rule of every step");
  }

  auto* tr = app.add_subcommand("translate", "translate a .dtt source program");
  common(tr, true);
  tr->add_option("--strategy", f.strategy, "cbv or cbn")->check(CLI::IsMember({"cbv", "cbn"}));

  auto* mc = app.add_subcommand("model-check", "check equations in a finite model");
  common(mc, false);
  mc->add_flag("--figure4", f.figure4, "sweep the built-in equation suite");
  mc->add_option("--monad", f.monad, "exception | writer | tree")
      ->check(CLI::IsMember({"exception", "writer", "tree"}));
  mc->add_option("--cap", f.cap, "bound on enumerated environments")->check(CLI::PositiveNumber);

  std::vector<std::string> args = argv;
  if (args.empty()) args.push_back("dcbpv");
  std::vector<char*> raw;
  for (auto& a : args) raw.push_back(a.data());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, io.out, io.err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) f.command = sub->get_name();
  return dispatch(io, f);
}

}  // namespace dcbpv
