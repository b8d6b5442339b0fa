#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dgtk/tannaka.hpp"

using namespace dgtk;

namespace {

int total_dim(const Complex& c) {
  int n = 0;
  for (auto& [deg, labels] : c.basis) n += (int)labels.size();
  return n;
}

// one object, generators t (degree 1, t*t = s) and s (degree 2), nilpotent of
// order 3, with a two-line fibre ω(*) = k ⊕ k[-1] and ω(t): v0 -> v1.  Every
// sign branch of the insertion comultiplication is exercised here.
Preset stress_preset() {
  FieldSpec F = FieldSpec::rationals();
  Preset p;
  p.A.field = F;
  p.A.objects = {"*"};
  Complex h(F);
  h.basis[0] = {"id"};
  h.basis[1] = {"t"};
  h.basis[2] = {"s"};
  p.A.hom[{0, 0}] = h;
  p.A.id_idx[0] = 0;
  p.A.comp[{0, 0, 0, 0, 0, 0, 0}] = {{0, Rat(1)}};
  p.A.comp[{0, 0, 0, 0, 0, 1, 0}] = {{0, Rat(1)}};
  p.A.comp[{0, 0, 0, 1, 0, 0, 0}] = {{0, Rat(1)}};
  p.A.comp[{0, 0, 0, 0, 0, 2, 0}] = {{0, Rat(1)}};
  p.A.comp[{0, 0, 0, 2, 0, 0, 0}] = {{0, Rat(1)}};
  p.A.comp[{0, 0, 0, 1, 0, 1, 0}] = {{0, Rat(1)}};  // t*t = s
  p.A.nilpotence = 3;

  Complex w(F);
  w.basis[0] = {"v0"};
  w.basis[1] = {"v1"};
  p.omega.val = {w};
  p.omega.act[{0, 0, 0, 0}] = identity_chain_map(w);
  ChainMap wt;
  wt.degree = 1;
  SparseMatrix m(F, 1, 1);
  m.set(0, 0, Rat(1));
  wt.blocks[0] = m;
  p.omega.act[{0, 0, 1, 0}] = wt;  // ω(s) = ω(t)∘ω(t) = 0 is implicit
  return p;
}

}  // namespace

TEST_CASE("tannakian dual of the point") {
  Preset p = preset_k();
  TannakianDualResult td = tannakian_dual(p.A, p.omega, 3, true);
  CHECK(total_dim(td.C.underlying) == 1);
  CHECK(td.C.underlying.dim(0) == 1);
  CHECK(check_coalgebra(td.C).empty());
  CHECK(td.window.all);
}

TEST_CASE("tannakian dual of the dual numbers is the xi coalgebra") {
  Preset p = preset_dual_numbers();
  TannakianDualResult td = tannakian_dual(p.A, p.omega, 6, true);
  for (int n = 0; n <= 6; ++n) CHECK(td.C.underlying.dim(-n) == 1);  // [DERIVED]
  CHECK(total_dim(td.C.underlying) == 7);
  for (auto& [deg, m] : td.C.underlying.d) CHECK(m.is_zero());
  CHECK(check_coalgebra(td.C).empty());
  // deconcatenation: Δ of the degree -n class has n+1 terms, all +1
  std::vector<DeltaTerm> d3 = td.C.delta.at({-3, 0});
  CHECK(d3.size() == 4);
  for (auto& u : d3) {
    CHECK(u.c == 1);
    CHECK(u.left.first + u.right.first == -3);
  }
  CHECK(td.C.counit.at({0, 0}) == 1);
  CHECK(td.C.level_of({-4, 0}) == 4);
}

TEST_CASE("relative tannakian dual of the a2 quiver") {
  Preset p = preset_a2();
  TannakianDualResult td = tannakian_dual(p.A, p.omega, 3, false, true);
  // e_X, e_Y at level 0 and the arrow class c_f at level 1, all in degree 0
  CHECK(total_dim(td.C.underlying) == 3);  // [DERIVED]
  CHECK(td.C.underlying.dim(0) == 3);
  CHECK(check_coalgebra(td.C).empty());
  int cf = -1, nlevel1 = 0;
  for (auto& [b, l] : td.C.level)
    if (l == 1) {
      cf = b.second;
      ++nlevel1;
    }
  CHECK(nlevel1 == 1);
  std::vector<DeltaTerm> dcf = td.C.delta.at({0, cf});
  CHECK(dcf.size() == 2);  // Δ(c_f) = e_X⊗c_f + c_f⊗e_Y
  for (auto& u : dcf) CHECK(u.c == 1);
  CHECK(!td.C.counit.count({0, cf}));
}

TEST_CASE("comultiplication signs survive a graded fibre") {
  Preset p = stress_preset();
  CHECK(validate_category(p.A).empty());
  CHECK(validate_functor(p.A, p.omega).empty());
  CHECK(validate_nilpotence(p.A).empty());
  for (bool normalised : {false, true}) {
    TannakianDualResult td = tannakian_dual(p.A, p.omega, 3, normalised);
    CHECK(check_coalgebra(td.C).empty());
  }
  // L < 0 falls back to the declared nilpotence bound
  TannakianDualResult a = tannakian_dual(p.A, p.omega, -1, true);
  TannakianDualResult b = tannakian_dual(p.A, p.omega, 3, true);
  CHECK(a.C.underlying.basis == b.C.underlying.basis);
  Preset q = preset_dual_numbers();  // no nilpotence declared
  CHECK_THROWS_AS(tannakian_dual(q.A, q.omega, -1, true), std::invalid_argument);
}

TEST_CASE("universal coalgebra dimensions and contraction") {
  Preset p = preset_dual_numbers();
  UniversalCoalgebra D = universal_coalgebra(p.A, 4, false);
  SimplicialLevels lv = D.at(0, 0);
  for (int n = 0; n <= 4; ++n) CHECK(total_dim(lv.levels[n]) == 4 * (1 << n));  // [DERIVED]
  CHECK(D.contraction_report().empty());
  for (int n = 0; n <= 4; ++n)
    CHECK(cech_level_dim(p.A, 0, 0, n, 0) == 4 * (1 << n));
}

TEST_CASE("cech dimension oracle against string enumeration") {
  Preset p = preset_a2();
  UniversalCoalgebra D = universal_coalgebra(p.A, 3, false);
  for (int W = 0; W < 2; ++W)
    for (int V = 0; V < 2; ++V) {
      SimplicialLevels lv = D.at(W, V);
      for (int n = 0; n <= 3; ++n)
        for (int deg = 0; deg <= n + 2; ++deg)
          CHECK(cech_level_dim(p.A, W, V, n, deg) == lv.levels[n].dim(deg));
    }
  CHECK(D.contraction_report().empty());
}

TEST_CASE("compact subcoalgebra: full index recovers the truncation") {
  Preset p = preset_dual_numbers();
  UniversalCoalgebra D = universal_coalgebra(p.A, 2, false);
  CompactSubcoalgebraIndex idx;
  idx.S = {0};
  idx.n = 2;
  idx.V[{0, 0}][0] = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  CompactSubcoalgebraResult r = compact_subcoalgebra(D, idx, 0, 0);
  CHECK(r.report.empty());
  Complex tot = hochschild_total(D.at(0, 0)).first;
  for (auto& [deg, labels] : tot.basis) CHECK(r.sub.dim(deg) == (int)labels.size());
}

TEST_CASE("compact subcoalgebra of the nilpotent line") {
  Preset p = preset_dual_numbers();
  UniversalCoalgebra D = universal_coalgebra(p.A, 4, false);
  CompactSubcoalgebraIndex idx;
  idx.S = {0};
  idx.n = 2;
  idx.V[{0, 0}][0] = {{Rat(0), Rat(1)}};  // V = k·e
  CompactSubcoalgebraResult r = compact_subcoalgebra(D, idx, 0, 0);
  CHECK(r.report.empty());
  CHECK(r.sub.dim(0) == 4);  // [DERIVED]
  CHECK(r.sub.dim(-1) == 4);
  CHECK(r.sub.dim(-2) == 4);
  CHECK(total_dim(r.sub) == 12);
  CHECK(check_chain_map(r.inclusion, r.sub, hochschild_total(D.at(0, 0)).first));

  // monotone: a larger level bound realizes a larger span
  idx.n = 3;
  CompactSubcoalgebraResult r2 = compact_subcoalgebra(D, idx, 0, 0);
  CHECK(r2.report.empty());
  for (auto& [deg, labels] : r.sub.basis) CHECK(r2.sub.dim(deg) >= (int)labels.size());
  CHECK(total_dim(r2.sub) > total_dim(r.sub));

  // a non-d-closed V is rejected outright
  Preset s = stress_preset();
  Complex& h = s.A.hom[{0, 0}];
  SparseMatrix d01(s.A.field, 1, 1);
  d01.set(0, 0, Rat(1));
  h.set_diff(1, d01);  // dt = s
  s.A.nilpotence = 3;
  UniversalCoalgebra Ds = universal_coalgebra(s.A, 1, false);
  CompactSubcoalgebraIndex bad;
  bad.S = {0};
  bad.n = 1;
  bad.V[{0, 0}][1] = {{Rat(1)}};  // k·t, not closed under dt = s
  CHECK_THROWS_AS(compact_subcoalgebra(Ds, bad, 0, 0), std::invalid_argument);
}

TEST_CASE("tilting module of the dual numbers") {
  Preset p = preset_dual_numbers();
  int L = 4;
  TiltingModule T = tilting_module(p.A, p.omega, L, true);
  TannakianDualResult td = tannakian_dual(p.A, p.omega, L, true);
  CHECK(T.C->underlying.basis == td.C.underlying.basis);  // label for label
  CHECK(T.C->delta.size() == td.C.delta.size());
  CHECK(check_coalgebra(*T.C).empty());
  CHECK(check_comodule(T.P.at(0)).empty());
  CHECK(check_comodule(T.Q.at(0)).empty());
  CHECK(T.certs.at(0).all_true());
  CHECK(check_chain_map(T.to_omega.at(0), T.P.at(0).underlying, p.omega.val[0]));
  // P(*) is two lines per level, concentrated in degrees 0..-L
  for (int n = 0; n <= L; ++n) CHECK(T.P.at(0).underlying.dim(-n) == 2);  // [DERIVED]
  CohomologyResult H = cohomology(T.P.at(0).underlying, -L + 1, 0);
  CHECK(H.dims.at(0) == 1);
  for (int n = 1; n < L; ++n) CHECK(H.dims.at(-n) == 0);
}

TEST_CASE("tilting comodules on graded presentations") {
  Preset p = stress_preset();
  TiltingModule T = tilting_module(p.A, p.omega, 2, true);
  CHECK(check_coalgebra(*T.C).empty());
  CHECK(check_comodule(T.P.at(0)).empty());
  CHECK(check_comodule(T.Q.at(0)).empty());
  CHECK(T.certs.at(0).all_true());

  Preset q = preset_a2();
  TiltingModule Tq = tilting_module(q.A, q.omega, 2, false, true);
  for (int X = 0; X < 2; ++X) {
    CHECK(check_comodule(Tq.P.at(X)).empty());
    CHECK(check_comodule(Tq.Q.at(X)).empty());
    CHECK(Tq.certs.at(X).all_true());
  }
}

TEST_CASE("keller tilting module") {
  Preset p = preset_dual_numbers();
  int L = 4;
  KellerTilting K = keller_tilting(p.A, L);
  CHECK(check_coalgebra(*K.C).empty());
  CHECK(check_comodule(K.P).empty());
  CHECK(check_chain_map(K.to_omega, K.P.underlying, K.omega));
  CHECK(K.cert.all_true());
  // d(1⊗ξ^n) = e⊗ξ^{n-1}, coaction by deconcatenation on the ξ-powers
  CHECK(K.P.underlying.diff(-1).get(1, 0) == 1);
  CHECK(K.P.mu.at({0, 0}).size() == 1);
  CHECK(K.P.mu.at({-3, 1}).size() == 4);

  // cross-check against the Hochschild-side tilting module
  TiltingModule T = tilting_module(p.A, p.omega, L, true);
  CohomologyResult HK = cohomology(K.P.underlying, -L + 1, 0);
  CohomologyResult HT = cohomology(T.P.at(0).underlying, -L + 1, 0);
  CHECK(HK.dims == HT.dims);
  for (auto& [deg, m] : K.P.underlying.basis)
    CHECK((int)m.size() == T.P.at(0).underlying.dim(deg));
}

TEST_CASE("finite modules: evaluation, omega, d^2") {
  Preset p = preset_dual_numbers();
  FiniteModule cone;  // cone(h --e--> h)
  cone.gens = {{0, 0}, {0, 1}};
  cone.gen_labels = {"a", "b"};
  cone.dmat[{0, 1}] = {{1, Rat(1)}};
  CHECK(check_finite_module(p.A, cone).empty());
  Complex ev = evaluate_module(p.A, cone, 0);
  CHECK(ev.dim(0) == 2);
  CHECK(ev.dim(-1) == 2);
  CohomologyResult H = cohomology(ev, -1, 0);
  CHECK(H.dims.at(0) == 1);  // A/eA
  CHECK(H.dims.at(-1) == 1);  // ker e
  Complex evw = evaluate_module_omega(p.A, p.omega, cone);
  CHECK(evw.dim(0) == 1);
  CHECK(evw.dim(-1) == 1);
  CHECK(evw.diff(-1).is_zero());  // ω(e) = 0

  FiniteModule bad = cone;
  bad.dmat[{0, 1}] = {{5, Rat(1)}};
  CHECK(!check_finite_module(p.A, bad).empty());
}

TEST_CASE("tensoring a finite module with P") {
  Preset p = preset_dual_numbers();
  int L = 4;
  TiltingModule T = tilting_module(p.A, p.omega, L, true);

  FiniteModule yoneda;  // h ⊗_A P = P
  yoneda.gens = {{0, 0}};
  yoneda.gen_labels = {"h"};
  Comodule Y = tensor_with_P(p.A, yoneda, T);
  CHECK(check_comodule(Y).empty());
  for (auto& [deg, labels] : T.P.at(0).underlying.basis)
    CHECK(Y.underlying.dim(deg) == (int)labels.size());
  CHECK(Y.mu.size() == T.P.at(0).mu.size());

  FiniteModule cone;
  cone.gens = {{0, 0}, {0, 1}};
  cone.gen_labels = {"a", "b"};
  cone.dmat[{0, 1}] = {{1, Rat(1)}};
  Comodule C = tensor_with_P(p.A, cone, T);
  CHECK(check_comodule(C).empty());
  CHECK(check_complex(C.underlying).empty());
  Complex evw = evaluate_module_omega(p.A, p.omega, cone);
  CohomologyResult H = cohomology(C.underlying, -L + 2, 0);
  for (int j = -L + 2; j <= 0; ++j) CHECK(H.dims.at(j) == evw.dim(j));  // [DERIVED]

  FiniteModule zero;
  Comodule Z = tensor_with_P(p.A, zero, T);
  CHECK(Z.underlying.empty());
  CHECK(check_comodule(Z).empty());
}

TEST_CASE("opposite category and preduals") {
  Preset p = preset_a2();
  DgCat B = op_category(p.A);
  CHECK(validate_category(B).empty());
  CHECK(B.H(1, 0).dim(1) == 1);
  CHECK(B.H(0, 1).empty());

  Preset q = preset_dual_numbers();
  DgCat Bq = op_category(q.A);
  FiniteModule cone;
  cone.gens = {{0, 0}, {0, 1}};
  cone.gen_labels = {"a", "b"};
  cone.dmat[{0, 1}] = {{1, Rat(1)}};
  FiniteModule K = predual(q.A, cone);
  CHECK(K.gens[0].second == 0);
  CHECK(K.gens[1].second == -1);
  CHECK(check_finite_module(Bq, K).empty());
  // pairing: H^t of the predual evaluation matches H^{-t} of the evaluation
  CohomologyResult HL = cohomology(evaluate_module(q.A, cone, 0), -1, 0);
  CohomologyResult HR = cohomology(evaluate_module(Bq, K, 0), 0, 1);
  CHECK(HL.dims.at(0) == HR.dims.at(0));
  CHECK(HL.dims.at(-1) == HR.dims.at(1));
}

TEST_CASE("counit of the coend: trivial and cofree coefficients") {
  Preset p = preset_dual_numbers();
  TiltingModule T = tilting_module(p.A, p.omega, 3, true);

  Comodule k = trivial_comodule(*T.C, {0, 0}, true);
  QuasiIsoCertificate c1 = counit_check(p.A, T, k, -2, 2, 2);
  CHECK(c1.all_true());
  CHECK(c1.depth == 2);
  CHECK(c1.dims_target.at(0) == 1);

  Comodule cc = coalgebra_as_comodule(*T.C, true);
  QuasiIsoCertificate c2 = counit_check(p.A, T, cc, -2, 2, 2);
  CHECK(c2.all_true());

  Comodule z;
  z.right = true;
  z.C = T.C.get();
  QuasiIsoCertificate c3 = counit_check(p.A, T, z, -1, 1, 1);
  CHECK(c3.all_true());

  CHECK_THROWS_AS(counit_check(p.A, T, k, 2, -2, 2), std::invalid_argument);
  Preset s = stress_preset();
  TiltingModule Ts = tilting_module(s.A, s.omega, 2, true);
  Comodule ks = trivial_comodule(*Ts.C, {0, 0}, true);
  CHECK_THROWS_AS(counit_check(s.A, Ts, ks, -1, 1, 1), std::invalid_argument);
}

TEST_CASE("monoidal assembly over the point") {
  Preset p = preset_k();
  MonoidalAssemblyResult r = monoidal_assembly(p, 2, true);
  CHECK(check_coalgebra(r.C).empty());
  CHECK(r.C.has_product);
  CHECK(r.C.symmetric);
  CHECK(r.structure_cert.all_true());
}

TEST_CASE("bar bialgebra of the dual numbers") {
  Preset p = preset_dual_numbers();
  MonoidalAssemblyResult r = monoidal_assembly(p, 3, true);
  CHECK(check_coalgebra(r.C).empty());
  CHECK(r.C.has_product);
  CHECK(r.structure_cert.all_true());
  // shuffle product on the bar construction: ξ^1 ⋆ ξ^1 = 0 (odd square),
  // ξ^1 ⋆ ξ^2 = ξ^3
  auto sq = r.C.product({-1, 0}, {-1, 0});
  REQUIRE(sq.has_value());
  CHECK(!sq->count(BasisRef{-2, 0}));
  auto prod = r.C.product({-1, 0}, {-2, 0});
  REQUIRE(prod.has_value());
  REQUIRE(prod->count(BasisRef{-3, 0}) == 1);
  CHECK(prod->at(BasisRef{-3, 0}) == 1);  // [DERIVED] signed_shuffle_count(1,2)
  // outside the truncation the product is undefined
  CHECK(!r.C.product({-2, 0}, {-2, 0}).has_value());
}

TEST_CASE("monoidal assembly of kx3 is symmetric") {
  Preset p = preset_kx3();
  MonoidalAssemblyResult r = monoidal_assembly(p, 3, true);
  CHECK(check_coalgebra(r.C).empty());
  CHECK(r.C.symmetric);
  CHECK(r.structure_cert.all_true());
  auto ab = r.C.product({-1, 0}, {-2, 0});
  auto ba = r.C.product({-2, 0}, {-1, 0});
  REQUIRE(ab.has_value());
  REQUIRE(ba.has_value());
  CHECK(*ab == *ba);  // all classes sit in even-shifted... odd degrees, signs cancel pairwise
}
