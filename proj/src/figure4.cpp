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

// The equations of dCBPV, one schematic instance each.

#include <fmt/format.h>

#include "dcbpv/model.hpp"
#include "dcbpv/parser.hpp"

namespace dcbpv {

namespace {

// A, C : value types; B, B2 : computation types. Both sides of each
// equation live in the equation's own context.
constexpr const char* kEquations = R"(
equation to_beta (v : A, m : U Pi x : A. B) : B =
  (return v) to x. x ' force m
  == v ' force m;

equation F_eta (m : U F A) : F A =
  force m
  == (force m) to x. return x;

equation U_beta (m : U B) : B =
  force (thunk (force m))
  == force m;

equation U_eta (v : U B) : F U B =
  return v
  == return (thunk (force v));

equation sum_beta (v : A, m1 : U Pi x : A. B, m2 : U Pi y : C. B) : B =
  pm (1, v) as { (1, x). x ' force m1 | (2, y). y ' force m2 }
  == v ' force m1;

equation sum_eta (v : Sum(A, C), m : U Pi z : Sum(A, C). B) : B =
  v ' force m
  == pm v as { (1, x). (1, x) ' force m | (2, y). (2, y) ' force m };

equation unit_beta (m : U B) : B =
  pm () as (). force m
  == force m;

equation unit_eta (v : Unit, m : U Pi z : Unit. B) : B =
  v ' force m
  == pm v as (). () ' force m;

equation pair_beta (v : A, w : C, m : U Pi x : A. Pi y : C. B) : B =
  pm (v, w) as (x, y). y ' x ' force m
  == w ' v ' force m;

equation pair_eta (v : Sigma x : A. C, m : U Pi z : (Sigma x : A. C). B) : B =
  v ' force m
  == pm v as (x, y). (x, y) ' force m;

equation id_beta (v : A, m : U Pi x : A. B) : B =
  pm (refl v) as refl w. w ' force m
  == v ' force m;

equation id_eta (a : A, b : A, p : Id A a b,
                 m : U Pi x : A. Pi y : A. Pi q : Id A x y. B) : B =
  p ' b ' a ' force m
  == pm p as [x, y, q |- B] refl w. (refl w) ' w ' w ' force m;

equation prod_beta (m1 : U B, m2 : U B2) : B =
  1 ' lam { force m1 | force m2 }
  == force m1;

equation prod_eta (m : U Prod(B, B2)) : Prod(B, B2) =
  force m
  == lam { 1 ' force m | 2 ' force m };

equation pi_beta (v : A, m : U Pi x : A. B) : B =
  v ' lam x : A. x ' force m
  == v ' force m;

equation pi_eta (m : U Pi x : A. B) : Pi x : A. B =
  force m
  == lam x : A. x ' force m;

equation let_beta (v : A, m : U Pi x : A. B) : B =
  let x = v in x ' force m
  == v ' force m;

equation to_assoc (m : U F A, n : U Pi x : A. F C, k : U Pi y : C. B) : B =
  ((force m) to x. x ' force n) to y. y ' force k
  == (force m) to x. ((x ' force n) to y. y ' force k);

equation to_tuple (m : U F A, n1 : U Pi x : A. B, n2 : U Pi x : A. B2) : Prod(B, B2) =
  (force m) to x. lam { x ' force n1 | x ' force n2 }
  == lam { (force m) to x. x ' force n1 | (force m) to x. x ' force n2 };

equation to_lambda (m : U F A, n : U Pi x : A. Pi y : C. B) : Pi y : C. B =
  (force m) to x. lam y : C. y ' x ' force n
  == lam y : C. (force m) to x. y ' x ' force n;
)";

std::string units(std::size_t n) {
  if (n == 1) return "Unit";
  std::string out = "Sum(";
  for (std::size_t i = 0; i < n; ++i) out += i ? ", Unit" : "Unit";
  return out + ")";
}

}  // namespace

std::string Figure4Instance::describe() const {
  return fmt::format("|A|={} |C|={} B={} |E|={}", a, c, b, errors);
}

std::string figure4_program(const Figure4Instance& inst) {
  return fmt::format("vtype A = {};\nvtype C = {};\nctype B = {};\nctype B2 = F C;\n{}",
                     units(inst.a), units(inst.c), inst.b, kEquations);
}

std::vector<Figure4Instance> figure4_grid() {
  std::vector<Figure4Instance> out;
  for (std::size_t e = 0; e <= 2; ++e) {
    for (std::size_t a = 1; a <= 4; ++a) {
      for (std::size_t c = 1; c <= 2; ++c) {
        out.push_back({a, c, "F Unit", e});
        out.push_back({a, c, "F Sum(Unit, Unit)", e});
      }
    }
    out.push_back({2, 1, "Prod(F Unit, F Unit)", e});
    out.push_back({2, 1, "Pi x : Sum(Unit, Unit). F Unit", e});
    out.push_back({1, 2, "F Id Sum(Unit, Unit) (1, ()) (1, ())", e});
  }
  return out;
}

std::vector<SuiteRow> check_figure4(const std::vector<Figure4Instance>& grid,
                                    const ModelOptions& opts) {
  std::vector<SuiteRow> rows;
  CheckOptions co;
  co.variant = Variant::Plus;
  co.allow_shrink = false;
  for (const auto& inst : grid) {
    ProgramFile p = parse_program(figure4_program(inst));
    ExceptionSpec spec;
    for (std::size_t i = 0; i < inst.errors; ++i) spec.errors.push_back(fmt::format("e{}", i + 1));
    for (const auto& eq : p.equations) {
      Context ctx;
      for (const auto& entry : eq.context) ctx = ctx.extend(entry.type, entry.name);
      check_comp(ctx, eq.lhs, eq.type, p.signature, co);
      check_comp(ctx, eq.rhs, eq.type, p.signature, co);
      rows.push_back({eq.name, inst.describe(),
                      check_equation(ctx, eq.lhs, eq.rhs, eq.type, spec, opts)});
    }
  }
  return rows;
}

}  // namespace dcbpv
