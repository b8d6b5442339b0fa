#pragma once

#include "dgtk/bicomplex.hpp"
#include "dgtk/dgcat.hpp"

namespace dgtk {

// A-bimodule: complexes F(X,Y) with
//   left action   A(W,X) ⊗ F(X,Y) -> F(W,Y): lact[(W,X,Y,da,ia,dm,im)]
//   right action  F(X,Y) ⊗ A(Y,Z) -> F(X,Z): ract[(X,Y,Z,dm,im,da,ia)]
// When the bimodule is a product R(X)⊗L(Y) of a left module R and a right
// module L, the slots are remembered so coalgebra structure can split
// coefficients along the tensor decomposition.
struct Bimodule {
  std::map<std::pair<int, int>, Complex> val;
  std::map<std::array<int, 7>, LinComb> lact, ract;
  std::optional<OneSidedModule> slotR;  // left module, first tensor factor
  std::optional<OneSidedModule> slotL;  // right module, second tensor factor

  const Complex& at(int X, int Y) const;
  LinComb left(int W, int X, int Y, int da, int ia, int dm, int im) const;
  LinComb right(int X, int Y, int Z, int dm, int im, int da, int ia) const;
};

Bimodule identity_bimodule(const DgCat& A);
// F(X,Y) = tensor(R(X), L(Y)); R a left A-module, L a right A-module.
Bimodule product_bimodule(const DgCat& A, const OneSidedModule& R, const OneSidedModule& L);

// One Hochschild string: object tuple X0..Xn, inner hom factors a_i in
// A(X_{i-1},X_i) as (degree,index), and a coefficient in F(Xn, X0).
struct StringElt {
  std::vector<int> tuple;
  std::vector<std::pair<int, int>> inner;
  std::pair<int, int> coef;

  std::vector<int> key() const;
};

// The simplicial levels of the Hochschild complex C_n(A,F) up to level L,
// with faces, degeneracies (plain variant only), and the string bookkeeping
// needed downstream.
struct SimplicialLevels {
  const DgCat* A = nullptr;
  Bimodule F;
  FieldSpec field;
  int L = 0;
  bool relative = false;    // inner factors restricted to A^{>0}; no degeneracies
  bool normalized = false;  // strings with an identity inner factor removed
  std::vector<Complex> levels;
  std::vector<std::vector<ChainMap>> faces;   // faces[n][i], i = 0..n, n >= 1
  std::vector<std::vector<ChainMap>> degens;  // degens[n][i]: level n -> n+1, i = 0..n
  std::vector<std::map<int, std::vector<StringElt>>> strings;  // per level, per degree
  std::vector<std::map<std::vector<int>, std::pair<int, int>>> index;  // key -> (deg, idx)

  // (degree, index) of a string at the given level; (0,-1) when absent.
  std::pair<int, int> find(int level, const StringElt& s) const;
  std::string label(int level, const StringElt& s) const;
};

SimplicialLevels hochschild_levels(const DgCat& A, const Bimodule& F, int L);
// Relative variant over the degree-zero part, which must be split (the only
// degree-0 hom elements are the identities): inner factors come from A^{>0}.
SimplicialLevels relative_hochschild_levels(const DgCat& A, const OneSidedModule& slotR,
                                            const OneSidedModule& slotL, int L);

SimplicialLevels normalize(const SimplicialLevels& lv);

// Exhaustive check of the simplicial identities, the chain-map property of
// all faces/degeneracies, and d^2 = 0 of every level.
std::vector<std::string> check_simplicial(const SimplicialLevels& lv);

Bicomplex to_bicomplex(const SimplicialLevels& lv);

// Total complex with the fixed sign convention and its trusted window; the
// window is all of Z when the levels above L are provably empty.
std::pair<Complex, TrustedWindow> hochschild_total(const SimplicialLevels& lv);

// For levels with hom-valued outer slots D(W,V) (slotR = A(−,V),
// slotL = A(W,−)): verifies d_tot H + H d_tot = id − section∘counit exactly on
// all components coming from levels <= L−1, where H is the sign-twisted
// extra degeneracy inserting id_W at the front.  Empty result = verified.
std::vector<std::string> counit_contraction_check(const SimplicialLevels& lv, int W, int V);

}  // namespace dgtk
