// Acceptance harness: one verdict line per criterion, exact arithmetic
// throughout.  Each criterion is self-contained and uses only bundled
// presentations.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dgtk/json_io.hpp"
#include "dgtk/presets.hpp"
#include "dgtk/tannaka.hpp"

using namespace dgtk;

namespace {

void verdict(int n, const std::string& name, bool ok) {
  std::printf("ACCEPTANCE %d [%s]: %s\n", n, name.c_str(), ok ? "PASS" : "FAIL");
  std::fflush(stdout);
  CHECK(ok);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// signed (p,q)-shuffle enumeration over bitmasks (independent oracle)
Rat enumerate_signed_shuffles(int p, int q) {
  Rat s(0);
  for (unsigned mask = 0; mask < (1u << (p + q)); ++mask) {
    if (__builtin_popcount(mask) != p) continue;
    long inv = 0;
    for (int a = 0; a < p + q; ++a)
      if (mask >> a & 1u)
        for (int b = 0; b < a; ++b)
          if (!(mask >> b & 1u)) ++inv;
    s += Rat(inv % 2 != 0 ? -1 : 1);
  }
  return s;
}

std::string run_cli(const std::string& args, int& status) {
  const char* bin = std::getenv("DGTK_BIN");
  if (!bin) {
    status = -1;
    return "";
  }
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

PositiveDgAlgebraOverS one_arrow_algebra() {
  PositiveDgAlgebraOverS A;
  A.objects = {"*"};
  Complex c;
  c.basis[1] = {"t"};
  A.hom[{0, 0}] = c;
  return A;
}

PositiveDgAlgebraOverS a2_positive_algebra() {
  PositiveDgAlgebraOverS A;
  A.objects = {"X", "Y"};
  Complex c;
  c.basis[1] = {"f"};
  A.hom[{0, 1}] = c;
  return A;
}

ConilpotentDgCoalgebra one_cogenerator() {
  ConilpotentDgCoalgebra C;
  C.objects = {"*"};
  Complex c;
  c.basis[1] = {"x"};
  C.val[{0, 0}] = c;
  return C;
}

}  // namespace

TEST_CASE("criterion 1: dual-numbers end-to-end") {
  auto t0 = std::chrono::steady_clock::now();
  Preset p = preset_dual_numbers();
  TannakianDualResult td = tannakian_dual(p.A, p.omega, 8, true);
  bool ok = true;
  for (int n = 0; n <= 8; ++n) ok = ok && td.C.underlying.dim(-n) == 1;
  ok = ok && td.C.underlying.d.empty();
  CohomologyResult h = cohomology(td.C.underlying, -8, 0);
  for (int n = 0; n <= 8; ++n) ok = ok && h.dims.at(-n) == 1;

  KellerTilting kt = keller_tilting(p.A, 8);
  ok = ok && kt.cert.all_true();
  // d(xi^n) = epsilon * xi^{n-1}: the single unit entry in every negative degree
  for (int n = 1; n <= 8; ++n) {
    SparseMatrix d = kt.P.underlying.diff(-n);
    ok = ok && d.get(1, 0) == 1;
  }
  ok = ok && !kt.P.mu.empty() && check_comodule(kt.P).empty();
  ok = ok && seconds_since(t0) < 5.0;
  verdict(1, "dual-numbers end-to-end", ok);
}

TEST_CASE("criterion 2: coalgebra axiom suite on every bundled example") {
  bool ok = true;
  for (std::string name : {"k", "dual_numbers", "a2", "kx3"}) {
    Preset p = preset_by_name(name);
    for (bool normalised : {false, true}) {
      TannakianDualResult td = tannakian_dual(p.A, p.omega, 3, normalised);
      ok = ok && check_coalgebra(td.C).empty();
    }
  }
  verdict(2, "coalgebra axiom suite", ok);
}

TEST_CASE("criterion 3: contracting homotopy of every bundled D at L = 4") {
  bool ok = true;
  for (std::string name : {"k", "dual_numbers", "a2", "kx3"}) {
    Preset p = preset_by_name(name);
    UniversalCoalgebra D = universal_coalgebra(p.A, 4, false);
    ok = ok && D.contraction_report().empty();
  }
  verdict(3, "contracting homotopy dh + hd = id - s*eps", ok);
}

TEST_CASE("criterion 4: retraction counit over the dual-numbers coalgebra") {
  auto t0 = std::chrono::steady_clock::now();
  Preset p = preset_dual_numbers();
  TiltingModule T = tilting_module(p.A, p.omega, 3, true);
  Comodule k = trivial_comodule(*T.C, {0, 0}, true);
  Comodule cc = coalgebra_as_comodule(*T.C, true);
  QuasiIsoCertificate c1 = counit_check(p.A, T, k, -2, 2, 2);
  QuasiIsoCertificate c2 = counit_check(p.A, T, cc, -2, 2, 2);
  bool ok = c1.all_true() && c2.all_true() && seconds_since(t0) < 30.0;
  verdict(4, "counit verdicts for N = k and N = C", ok);
}

TEST_CASE("criterion 5: Koszul unit/counit on the three bundled instances") {
  bool ok = unit_check(one_cogenerator(), 3, 0, 3).all_true();
  ok = ok && counit_check(one_arrow_algebra(), 4, 0, 4).all_true();
  ok = ok && counit_check(a2_positive_algebra(), 4, 0, 4).all_true();
  // and the unit over the A2 coalgebra side
  ConilpotentDgCoalgebra cf;
  cf.objects = {"X", "Y"};
  Complex c;
  c.basis[0] = {"c_f"};
  cf.val[{0, 1}] = c;
  ok = ok && unit_check(cf, 3, 0, 2).all_true();
  verdict(5, "Koszul duality unit and counit", ok);
}

TEST_CASE("criterion 6: bar bialgebra of the dual numbers at level 5") {
  Preset p = preset_dual_numbers();
  MonoidalAssemblyResult r = monoidal_assembly(p, 5, true);
  bool ok = check_coalgebra(r.C).empty();  // includes product associativity
                                           // and Delta as algebra morphism
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; i + j <= 5; ++j) {
      auto prod = r.C.product({-i, 0}, {-j, 0});
      if (!prod) {
        ok = false;
        continue;
      }
      Rat got(0);
      auto it = prod->find({-(i + j), 0});
      if (it != prod->end()) got = it->second;
      ok = ok && got == enumerate_signed_shuffles(i, j);
    }
  verdict(6, "shuffle coefficients match enumeration", ok);
}

TEST_CASE("criterion 7: antipode on H^0, chain-level report emitted") {
  Preset p = preset_dual_numbers();
  MonoidalAssemblyResult r = monoidal_assembly(p, 3, false);
  DualData dual;
  dual.obj_dual = {0};
  dual.mor_dual[{0, 0, 0, 0}] = {{0, Rat(1)}};
  dual.mor_dual[{0, 0, 0, 1}] = {{1, Rat(1)}};
  auto rep = involution_and_antipode_check(r.levels, dual, r.C, false);
  bool ok = true;
  int chain_lines = 0;
  for (auto& l : rep) {
    if (l.rfind("chain-level:", 0) == 0)
      ++chain_lines;
    else
      ok = false;  // H^0 failures are hard
  }
  std::printf("  chain-level report: %d line(s)\n", chain_lines);
  verdict(7, "antipode identity on H^0", ok);
}

TEST_CASE("criterion 8: window stability under L -> L+2") {
  bool ok = true;
  for (std::string name : {"k", "dual_numbers", "a2", "kx3"}) {
    Preset p = preset_by_name(name);
    TannakianDualResult a = tannakian_dual(p.A, p.omega, 3, true);
    TannakianDualResult b = tannakian_dual(p.A, p.omega, 5, true);
    CohomologyResult ha = cohomology(a.C.underlying, -3, 0);
    CohomologyResult hb = cohomology(b.C.underlying, -3, 0);
    for (int j = -3; j <= 0; ++j)
      if (a.window.trusted(j) && b.window.trusted(j)) ok = ok && ha.dims[j] == hb.dims[j];
  }
  {
    QuasiIsoCertificate a = unit_check(one_cogenerator(), 3, 0, 3);
    QuasiIsoCertificate b = unit_check(one_cogenerator(), 5, 0, 3);
    ok = ok && a.dims_source == b.dims_source && a.dims_target == b.dims_target;
  }
  {
    QuasiIsoCertificate a = counit_check(one_arrow_algebra(), 4, 0, 4);
    QuasiIsoCertificate b = counit_check(one_arrow_algebra(), 6, 0, 4);
    ok = ok && a.dims_source == b.dims_source && a.dims_target == b.dims_target;
  }
  verdict(8, "window stability under deeper truncation", ok);
}

TEST_CASE("criterion 9: byte-identical artifacts on every bundled job") {
  const char* data_env = std::getenv("DGTK_DATA");
  REQUIRE(data_env != nullptr);
  std::string data(data_env);
  bool ok = true;
  for (std::string job :
       {"tannaka-dual " + data + "/dual_numbers.json --max-level 6 --normalised",
        "tannaka-dual " + data + "/a2.json --max-level 3",
        "bialgebra " + data + "/kx3.json --max-level 3",
        "universal-coalgebra " + data + "/a2.json --max-level 3",
        "tilting " + data + "/dual_numbers.json --max-level 3 --normalised",
        "bar " + data + "/t_square_s.json --max-level 4",
        "cobar " + data + "/one_arrow.json --max-level 4",
        "koszul-check " + data + "/one_arrow.json --max-level 3 --window 0 3",
        "counit-check " + data + "/dual_numbers.json --max-level 3 --window -2 2 --depth 2",
        "antipode-check " + data + "/dual_numbers.json --max-level 3",
        "hochschild " + data + "/k.json --max-level 3",
        "cohomology " + data + "/two_term.json --window 0 1"}) {
    int s1 = 0, s2 = 0;
    std::string a = run_cli(job, s1), b = run_cli(job, s2);
    ok = ok && s1 == 0 && s2 == 0 && !a.empty() && a == b;
  }
  verdict(9, "determinism across repeated runs", ok);
}
