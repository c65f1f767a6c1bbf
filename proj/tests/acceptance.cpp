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

// Acceptance checks over the corpus. Prints one PASS/FAIL line per criterion.
// Usage: acceptance [corpus-dir]

#include <fmt/core.h>

#include <algorithm>
#include <cstdlib>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dcbpv/equality.hpp"
#include "dcbpv/machine.hpp"
#include "dcbpv/model.hpp"
#include "dcbpv/parser.hpp"
#include "dcbpv/printer.hpp"
#include "dcbpv/translate.hpp"
#include "dcbpv/typecheck.hpp"

using namespace dcbpv;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kFuel = 10000;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Entry {
  std::string name;
  ProgramFile file;
  Context ctx;
  Variant variant = Variant::Minus;  // the weakest variant it checks in
  Comp runnable;                     // main without complex values; closed programs only
};

CheckOptions opts(Variant v, bool shrink = true) {
  CheckOptions o;
  o.variant = v;
  o.allow_shrink = shrink;
  return o;
}

bool checks(const Entry& e, Variant v) {
  try {
    Context ctx;
    for (const auto& c : e.file.context) {
      wf_vtype(ctx, c.type, e.file.signature, opts(v));
      ctx = ctx.extend(c.type, c.name);
    }
    wf_ctype(ctx, *e.file.main_type, e.file.signature, opts(v));
    check_comp(ctx, *e.file.main, *e.file.main_type, e.file.signature, opts(v));
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

struct Corpus {
  std::vector<Entry> kernel;
  std::vector<Entry> equations_only;
  std::vector<std::pair<std::string, SrcProgram>> source;
  std::vector<std::string> problems;
};

Corpus load(const fs::path& dir) {
  Corpus c;
  std::vector<fs::path> paths;
  for (const auto& d : fs::directory_iterator(dir)) paths.push_back(d.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    try {
      if (p.extension() == ".dtt") {
        c.source.emplace_back(p.filename().string(), parse_source(slurp(p)));
        continue;
      }
      if (p.extension() != ".dcbpv") continue;
      Entry e{p.filename().string(), parse_program(slurp(p)), {}, Variant::Minus, nullptr};
      if (!e.file.main) {
        c.equations_only.push_back(std::move(e));
        continue;
      }
      for (const auto& x : e.file.context) e.ctx = e.ctx.extend(x.type, x.name);
      if (checks(e, Variant::Minus)) {
        e.variant = Variant::Minus;
      } else if (checks(e, Variant::Plus)) {
        e.variant = Variant::Plus;
      } else {
        c.problems.push_back(e.name + " is ill-typed");
        continue;
      }
      if (e.file.context.empty()) e.runnable = eliminate_complex_values(*e.file.main);
      c.kernel.push_back(std::move(e));
    } catch (const std::exception& ex) {
      c.problems.push_back(p.filename().string() + ": " + ex.what());
    }
  }
  return c;
}

bool may_loop(const EffectSignature& sig) {
  return sig.enables(Effect::Diverge) || sig.enables(Effect::Rec);
}

// Visits every configuration reachable from `m` within the fuel, following
// each branch of every choice. The visitor sees the configuration and the
// number of steps taken to reach it.
void explore(const Comp& m, const EffectSignature& sig,
             const std::function<void(const Configuration&, std::size_t)>& visit) {
  std::vector<std::pair<Configuration, std::size_t>> todo{{inject(m, sig), 0}};
  while (!todo.empty()) {
    auto [cfg, n] = todo.back();
    todo.pop_back();
    visit(cfg, n);
    if (n >= kFuel) continue;
    StepResult r = step(cfg, sig);
    if (auto* s = std::get_if<Stepped>(&r)) {
      todo.push_back({s->next, n + 1});
    } else if (auto* c = std::get_if<NeedsChoice>(&r)) {
      for (auto it = c->branches.rbegin(); it != c->branches.rend(); ++it) todo.push_back({*it, n + 1});
    }
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Report {
  int failed = 0;
  void line(int n, bool ok, const std::string& what, const std::string& detail) {
    if (!ok) ++failed;
    fmt::print("{} {} {}: {}\n", ok ? "PASS" : "FAIL", n, what, detail);
  }
};

// ---- 1 ----

void determinism(const Corpus& c, Report& rep) {
  auto t0 = Clock::now();
  std::size_t programs = 0, configs = 0, bad = 0;
  std::string first_bad;
  for (const auto& e : c.kernel) {
    if (!e.runnable) continue;
    ++programs;
    explore(e.runnable, e.file.signature, [&](const Configuration& cfg, std::size_t) {
      ++configs;
      auto rules = matching_rules(cfg, e.file.signature);
      bool ok = is_terminal(cfg) ? rules.empty() : rules.size() == 1;
      if (!ok) {
        ++bad;
        if (first_bad.empty()) first_bad = e.name + " at " + show_config(cfg);
      }
    });
  }
  double secs = seconds_since(t0);
  bool ok = programs >= 40 && bad == 0 && secs < 5.0;
  rep.line(1, ok, "determinism",
           fmt::format("{} programs, {} configurations, {} violations, {:.2f}s{}", programs, configs,
                       bad, secs, first_bad.empty() ? "" : "; first: " + first_bad));
}

// ---- 2 ----

void normalization(const Corpus& c, Report& rep) {
  std::size_t programs = 0, exhausted = 0, longest = 0;
  std::string which;
  for (const auto& e : c.kernel) {
    if (!e.runnable || may_loop(e.file.signature)) continue;
    ++programs;
    for (const auto& o : run_all(e.runnable, e.file.signature, kFuel)) {
      longest = std::max(longest, o.steps);
      if (o.fuel_exhausted) {
        ++exhausted;
        which = e.name;
      }
    }
  }
  rep.line(2, programs > 0 && exhausted == 0, "strong normalization",
           fmt::format("{} programs without diverge/rec, {} fuel exhaustions{}, longest run {} steps",
                       programs, exhausted, which.empty() ? "" : " (" + which + ")", longest));
}

// ---- 3 ----

// Number of reached configurations that fail to re-check at the program's type.
std::size_t recheck_failures(const Entry& e, Variant v, bool shrink, std::size_t* reached) {
  std::size_t fails = 0;
  explore(e.runnable, e.file.signature, [&](const Configuration& cfg, std::size_t) {
    ++*reached;
    try {
      check_config({}, cfg.comp, cfg.stack, *e.file.main_type, e.file.signature, opts(v, shrink));
    } catch (const TypeError&) {
      ++fails;
    }
  });
  return fails;
}

void subject_reduction(const Corpus& c, Report& rep) {
  std::size_t minus = 0, plus = 0, configs = 0, fails = 0;
  std::string first;
  const Entry* counter = nullptr;
  for (const auto& e : c.kernel) {
    if (!e.runnable) continue;
    if (e.name == "shrink_counterexample.dcbpv") counter = &e;
    (e.variant == Variant::Minus ? minus : plus) += 1;
    std::size_t f = recheck_failures(e, e.variant, true, &configs);
    if (f > 0 && first.empty()) first = e.name;
    fails += f;
  }
  bool ce_ok = false;
  std::string ce = "counterexample missing";
  if (counter) {
    std::size_t reached = 0;
    bool initial = true;
    try {
      check_config({}, counter->runnable, {}, *counter->file.main_type, counter->file.signature,
                   opts(Variant::Plus, false));
    } catch (const TypeError&) {
      initial = false;
    }
    std::size_t f = recheck_failures(*counter, Variant::Plus, false, &reached);
    ce_ok = counter->variant == Variant::Plus && initial && f > 0;
    ce = fmt::format("counterexample: initial {}, {} of {} configurations fail without shrink",
                     initial ? "checks" : "fails", f, reached);
  }
  rep.line(3, fails == 0 && ce_ok && minus > 0 && plus > 0, "subject reduction",
           fmt::format("{} minus + {} plus programs, {} configurations, {} re-check failures{}; {}",
                       minus, plus, configs, fails, first.empty() ? "" : " (" + first + ")", ce));
}

// ---- 4 ----

void figure4(Report& rep) {
  auto t0 = Clock::now();
  auto grid = figure4_grid();
  std::size_t a_max = 0, e_max = 0;
  for (const auto& g : grid) {
    a_max = std::max(a_max, g.a);
    e_max = std::max(e_max, g.errors);
  }
  std::set<std::string> equations;
  std::size_t rows = 0, unequal = 0;
  std::string first;
  for (const auto& r : check_figure4(grid)) {
    ++rows;
    equations.insert(r.equation);
    if (r.verdict.kind != Verdict::Kind::Equal) {
      ++unequal;
      if (first.empty()) first = r.equation + " [" + r.instance + "]";
    }
  }
  double secs = seconds_since(t0);
  bool ok = unequal == 0 && equations.size() >= 16 && a_max == 4 && e_max == 2 && secs < 60.0;
  rep.line(4, ok, "equational soundness",
           fmt::format("{} equations x {} instances (|A| <= {}, |E| <= {}), {} not Equal{}, {:.1f}s",
                       equations.size(), grid.size(), a_max, e_max, unequal,
                       first.empty() ? "" : " (" + first + ")", secs));
}

// ---- 5 ----

FinMonadSpec model_for(const EffectSignature& sig) {
  bool effectful = sig.enables(Effect::Print) || sig.enables(Effect::Choose) ||
                   sig.enables(Effect::State) || may_loop(sig);
  if (effectful) return FreeSpec{sig};
  ExceptionSpec e;
  if (sig.enables(Effect::Error)) e.errors = sig.errors;
  return e;
}

void complex_values(const Corpus& c, Report& rep) {
  std::size_t comps = 0, changed = 0, bad = 0;
  std::string first;
  auto one = [&](const std::string& where, const Context& ctx, const Comp& m, const CType& ty,
                 const EffectSignature& sig, Variant v) {
    ++comps;
    std::string why;
    try {
      Comp out = eliminate_complex_values(m);
      if (!alpha_eq(out, m)) ++changed;
      if (!complex_value_free(out)) why = "complex value left";
      check_comp(ctx, out, ty, sig, opts(v));
      ModelOptions mo;
      mo.sig = sig;
      mo.variant = v;
      Verdict vd = check_equation(ctx, m, out, ty, model_for(sig), mo);
      if (vd.kind != Verdict::Kind::Equal) why = std::string(verdict_name(vd.kind));
    } catch (const std::exception& ex) {
      why = ex.what();
    }
    if (!why.empty()) {
      ++bad;
      if (first.empty()) first = where + ": " + why;
      if (std::getenv("DCBPV_VERBOSE")) fmt::print("  {}: {}\n", where, why);
    }
  };
  for (const auto& e : c.kernel) {
    one(e.name, e.ctx, *e.file.main, *e.file.main_type, e.file.signature, e.variant);
  }
  std::vector<const Entry*> with_eqs;
  for (const auto& e : c.kernel) with_eqs.push_back(&e);
  for (const auto& e : c.equations_only) with_eqs.push_back(&e);
  for (const Entry* ep : with_eqs) {
    const Entry& e = *ep;
    for (const auto& eq : e.file.equations) {
      Context ctx;
      for (const auto& x : eq.context) ctx = ctx.extend(x.type, x.name);
      one(e.name + "/" + eq.name + " lhs", ctx, eq.lhs, eq.type, e.file.signature, Variant::Plus);
      one(e.name + "/" + eq.name + " rhs", ctx, eq.rhs, eq.type, e.file.signature, Variant::Plus);
    }
  }
  rep.line(5, bad == 0 && changed > 0, "complex-value elimination",
           fmt::format("{} computations ({} with complex values), {} failures{}", comps, changed,
                       bad, first.empty() ? "" : "; first: " + first));
}

// ---- 6 ----

bool target_checks(const ProgramFile& p, Variant v) {
  Entry e{"", p, {}, v, nullptr};
  return checks(e, v);
}

void translation_gates(const Corpus& c, Report& rep) {
  std::size_t cbv_rejected = 0, cbv_plus = 0, cbn_weak = 0, cbn_dep = 0, bad = 0;
  std::string first;
  auto fail = [&](const std::string& s) {
    ++bad;
    if (first.empty()) first = s;
  };
  for (const auto& [name, p] : c.source) {
    try {
      translate_program(p, Strategy::CBV, Variant::Minus);
      fail(name + ": cbv into minus accepted");
    } catch (const TranslateError& e) {
      if (e.kind() == TranslateErrorKind::CbvNeedsPlus) ++cbv_rejected;
      else fail(name + ": wrong cbv rejection");
    }
    try {
      if (target_checks(translate_program(p, Strategy::CBV, Variant::Plus), Variant::Plus)) ++cbv_plus;
      else fail(name + ": cbv output ill-typed in plus");
    } catch (const std::exception& e) {
      fail(name + ": " + e.what());
    }
    bool weak = !has_dependent_elim(p.main);
    bool ok = false;
    try {
      ok = target_checks(translate_program(p, Strategy::CBN, Variant::Minus), Variant::Minus);
    } catch (const TranslateError&) {
    }
    if (ok != weak) fail(name + (weak ? ": weak cbn output rejected" : ": dependent cbn accepted in minus"));
    else (weak ? cbn_weak : cbn_dep) += 1;
  }
  bool ok = bad == 0 && cbv_rejected >= 3 && cbv_plus >= 3 && cbn_weak >= 3 && cbn_dep >= 3;
  rep.line(6, ok, "translation gates",
           fmt::format("{} sources: cbv/minus rejected {}, cbv/plus checks {}, cbn/minus weak checks {}, "
                       "cbn/minus dependent rejected {}{}",
                       c.source.size(), cbv_rejected, cbv_plus, cbn_weak, cbn_dep,
                       first.empty() ? "" : "; first: " + first));
}

// ---- 7 ----

FiniteTableMonoid cyclic(std::size_t n) {
  FiniteTableMonoid m;
  for (std::size_t i = 0; i < n; ++i) m.elements.push_back(i == 0 ? "1" : std::string(i, 'a'));
  m.unit = 0;
  m.table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.table[i][j] = (i + j) % n;
  }
  return m;
}

// Every f : Pi a:A. B(a) + E for the family.
std::vector<std::vector<ExcElem>> functions_on_a(const ExcFamily& fam) {
  std::vector<std::vector<ExcElem>> fs{{}};
  for (std::size_t i = 0; i < fam.a_size; ++i) {
    std::vector<std::vector<ExcElem>> next;
    for (const auto& p : fs) {
      for (std::size_t j = 0; j < fam.fibers[i]; ++j) {
        next.push_back(p);
        next.back().push_back({false, j});
      }
      for (std::size_t j = 0; j < fam.e_size; ++j) {
        next.push_back(p);
        next.back().push_back({true, j});
      }
    }
    fs = std::move(next);
  }
  return fs;
}

void dependent_kleisli(Report& rep) {
  auto t0 = Clock::now();
  std::size_t families = 0, checked = 0, bad = 0;
  for (std::size_t a = 0; a <= 4; ++a) {
    for (std::size_t e = 0; e <= 2; ++e) {
      std::size_t points = a + e;
      std::vector<std::size_t> sizes(points, 0);
      for (;;) {
        ExcFamily fam{a, e, sizes};
        ++families;
        // Uniqueness is checked against every dependent function on small families.
        std::vector<std::vector<ExcElem>> all;
        if (points <= 4) all = all_dependent_functions(fam);
        for (const auto& f : functions_on_a(fam)) {
          ++checked;
          auto star = dep_kleisli_exception(fam, f);
          bool ok = star.size() == points && std::equal(f.begin(), f.end(), star.begin());
          for (std::size_t j = 0; j < e; ++j) ok = ok && star[a + j] == ExcElem{true, j};
          for (std::size_t t = 0; t < points && ok; ++t) {
            ok = star[t].err ? star[t].index < e : star[t].index < sizes[t];
          }
          std::size_t homs = 0;
          for (const auto& g : all) {
            bool h = std::equal(f.begin(), f.end(), g.begin());
            for (std::size_t j = 0; j < e; ++j) h = h && g[a + j] == ExcElem{true, j};
            if (h) ++homs;
            if (h && g != star) ok = false;
          }
          if (!all.empty() || points == 0) ok = ok && (points == 0 || homs == 1);
          if (!ok) ++bad;
        }
        std::size_t i = 0;
        while (i < points && ++sizes[i] > 2) sizes[i++] = 0;
        if (i == points) break;
      }
    }
  }
  // Unit law: the extension of the unit is the identity on A + E.
  for (std::size_t a = 0; a <= 4; ++a) {
    for (std::size_t e = 0; e <= 2; ++e) {
      ExcFamily fam{a, e, std::vector<std::size_t>(a + e, a)};
      std::vector<ExcElem> unit;
      for (std::size_t i = 0; i < a; ++i) unit.push_back({false, i});
      auto star = dep_kleisli_exception(fam, unit);
      for (std::size_t j = 0; j < e; ++j) unit.push_back({true, j});
      if (star != unit) ++bad;
      ++checked;
    }
  }
  auto refuted = refute_dependent_kleisli_writer(cyclic(2), 1);
  auto trivial = refute_dependent_kleisli_writer(cyclic(1), 1);
  double secs = seconds_since(t0);
  bool ok = bad == 0 && refuted.kind == WriterRefutation::Kind::Refutation &&
            trivial.kind == WriterRefutation::Kind::ExtensionFound && secs < 1.0;
  rep.line(7, ok, "dependent Kleisli",
           fmt::format("exception: {} families, {} extensions, {} law failures; writer Z/2 x {{a}}: {}; "
                       "trivial monoid: {}; {:.2f}s",
                       families, checked, bad,
                       refuted.kind == WriterRefutation::Kind::Refutation ? "Refutation" : "ExtensionFound",
                       trivial.kind == WriterRefutation::Kind::Refutation ? "Refutation" : "ExtensionFound",
                       secs));
}

// ---- 8 ----

void print_twice(const Corpus& c, Report& rep) {
  const SrcProgram* p = nullptr;
  for (const auto& [name, s] : c.source) {
    if (name == "src_print_twice.dtt") p = &s;
  }
  if (!p) {
    rep.line(8, false, "cbv/cbn printing", "src_print_twice.dtt missing");
    return;
  }
  auto printed = [&](Strategy s, Variant v) -> std::string {
    ProgramFile t = translate_program(*p, s, v);
    if (!target_checks(t, v)) return "<ill-typed>";
    Outcome o = run(eliminate_complex_values(*t.main), t.signature, Scheduler::first(), kFuel);
    if (o.fuel_exhausted || o.kind != TerminalKind::Returned) return "<no return>";
    return o.final.printed;
  };
  std::string v = printed(Strategy::CBV, Variant::Plus);
  std::string n = printed(Strategy::CBN, Variant::Minus);
  rep.line(8, v == "a" && n == "aa", "cbv/cbn printing",
           fmt::format("cbv printed \"{}\", cbn printed \"{}\"", v, n));
}

}  // namespace

int main(int argc, char** argv) {
  fs::path dir = argc > 1 ? argv[1] : "corpus";
  Corpus c = load(dir);
  for (const auto& p : c.problems) fmt::print("corpus: {}\n", p);
  Report rep;
  determinism(c, rep);
  normalization(c, rep);
  subject_reduction(c, rep);
  figure4(rep);
  complex_values(c, rep);
  translation_gates(c, rep);
  dependent_kleisli(rep);
  print_twice(c, rep);
  return rep.failed == 0 && c.problems.empty() ? 0 : 1;
}
