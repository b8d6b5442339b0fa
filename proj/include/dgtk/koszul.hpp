#pragma once

#include "dgtk/certificate.hpp"
#include "dgtk/coalg.hpp"
#include "dgtk/dgcat.hpp"

namespace dgtk {

// A strictly positive dg algebra over a split semisimple base S = k^objects:
// hom complexes in degrees >= 1 without identities, an associative product,
// and optional weights (defaulting to 1) that the bar/cobar truncations are
// measured in.  The product may only preserve or lower total weight.
struct PositiveDgAlgebraOverS {
  FieldSpec field;
  std::vector<std::string> objects;
  std::map<std::pair<int, int>, Complex> hom;  // degrees >= 1; absent = zero
  std::map<std::array<int, 7>, LinComb> comp;  // as DgCat::comp, no identities
  std::map<std::array<int, 4>, long> weight;   // (X,Y,deg,idx) -> weight, default 1

  const Complex& H(int X, int Y) const;
  LinComb mul(int X, int Y, int Z, int da, int ia, int db, int ib) const;
  long weight_of(int X, int Y, int deg, int idx) const;
};

std::vector<std::string> validate_positive_algebra(const PositiveDgAlgebraOverS& A);

// One comultiplication term of a conilpotent coalgebra over S:
// b in B(X,Z) has Δb ∋ c · (left in B(X,Y)) ⊗ (right in B(Y,Z)).
struct CoTerm {
  int mid;
  BasisRef left, right;
  Rat c;
};

// Non-counital conilpotent dg coalgebra over S in degrees >= 0 with weights;
// Δ must split weights additively, which certifies conilpotence (iterated Δ
// of length beyond the maximal weight vanishes).
struct ConilpotentDgCoalgebra {
  FieldSpec field;
  std::vector<std::string> objects;
  std::map<std::pair<int, int>, Complex> val;  // degrees >= 0; absent = zero
  std::map<std::array<int, 4>, std::vector<CoTerm>> delta;
  std::map<std::array<int, 4>, long> weight;  // default 1

  const Complex& at(int X, int Y) const;
  long weight_of(int X, int Y, int deg, int idx) const;
};

std::vector<std::string> check_conilpotent_coalgebra(const ConilpotentDgCoalgebra& C);

// A tensor word over S: objects X0..Xn and letters in consecutive pairs
// (letter k in the (X_{k-1}, X_k) component of the generating bimodule).
struct KWord {
  std::vector<int> objs;
  std::vector<std::pair<int, int>> letters;

  std::vector<int> key() const;
};

// β(A): the cofree conilpotent coalgebra on A^{>0}[1], truncated at total
// weight L, with deconcatenation Δ and the (d_A, ∘) differential.  The word
// bookkeeping (basis-aligned words, index, generator positions) is kept for
// the adjunction maps.
struct BarResult {
  ConilpotentDgCoalgebra B;
  std::map<std::pair<int, int>, std::map<int, std::vector<KWord>>> words;  // per pair, degree
  std::map<std::pair<int, int>, std::map<std::vector<int>, BasisRef>> index;
  std::map<std::array<int, 4>, BasisRef> gen_of;  // (X,Y,degA,idxA) -> 1-letter word
};
BarResult bar_beta(const PositiveDgAlgebraOverS& A, int L);

// β*(C): the tensor algebra on C[-1], truncated at total weight L, with
// concatenation product (zero past the cutoff) and the d_C + Δ_C
// differential.  d² = 0 holds exactly on the truncation since d never raises
// total weight; the Leibniz rule is strict across the cutoff exactly when
// d_C preserves weight (weight-graded C), and below the cutoff always.
struct CobarAlgebraResult {
  PositiveDgAlgebraOverS A;
  std::map<std::pair<int, int>, std::map<int, std::vector<KWord>>> words;
  std::map<std::pair<int, int>, std::map<std::vector<int>, BasisRef>> index;
  std::map<std::array<int, 4>, BasisRef> gen_of;  // (X,Y,degC,idxC) -> 1-letter word
};
CobarAlgebraResult cobar_beta_star(const ConilpotentDgCoalgebra& C, int L);

// tan β(A) = A^{>0}[1]: the Δ-primitives of B are exactly the one-letter
// words, verified as a kernel computation per pair and degree.
std::vector<std::string> tangent_check(const BarResult& bar, const PositiveDgAlgebraOverS& A);

// Unit C → ββ*(C) (the cofree lift of the one-letter corestriction: the
// level-m component letterizes the iterated comultiplication) certified on
// the requested window over the direct sum of all hom pairs.  Verdicts are
// window-local: weights beyond L are not represented.
QuasiIsoCertificate unit_check(const ConilpotentDgCoalgebra& C, int L, int lo, int hi);

// Counit β*β(A) → A (multiplicative extension of the projection of β(A)[-1]
// to its one-letter words), certified the same way.
QuasiIsoCertificate counit_check(const PositiveDgAlgebraOverS& A, int L, int lo, int hi);

}  // namespace dgtk
