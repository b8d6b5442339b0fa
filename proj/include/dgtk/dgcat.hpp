#pragma once

#include <array>
#include <optional>

#include "dgtk/certificate.hpp"
#include "dgtk/complex.hpp"

namespace dgtk {

// A linear combination of basis elements within one fixed (pair, degree)
// component: basis index -> coefficient.
using LinComb = std::map<int, Rat>;

// Finite presentation of a k-linear dg category.
//
// Convention: A(X,Y) plays the role of Hom(Y,X); composition
//   mul: A(X,Y) ⊗ A(Y,Z) -> A(X,Z)
// so a fibre functor sends a ∈ A(X,Y) to a map ω(Y) -> ω(X) and
// ω(mul(a,b)) = ω(a)∘ω(b).
struct DgCat {
  FieldSpec field;
  std::vector<std::string> objects;
  std::map<std::pair<int, int>, Complex> hom;  // (X,Y) -> A(X,Y); absent = zero
  // comp[(X,Y,Z,da,ia,db,ib)] = coefficients of A(X,Y)^da[ia] * A(Y,Z)^db[ib]
  // in the degree-(da+db) basis of A(X,Z).  Absent keys mean zero product.
  std::map<std::array<int, 7>, LinComb> comp;
  std::map<int, int> id_idx;  // object -> basis index of id in A(X,X)^0
  std::optional<long> nilpotence;  // composites of this many >0-degree generators vanish

  const Complex& H(int X, int Y) const;
  int hom_dim(int X, int Y, int deg) const { return H(X, Y).dim(deg); }
  LinComb mul(int X, int Y, int Z, int da, int ia, int db, int ib) const;
  // Bilinear extension of mul on coefficient vectors in fixed degrees.
  LinComb mul_lin(int X, int Y, int Z, int da, const LinComb& a, int db, const LinComb& b) const;
  // d of a basis element, as a LinComb in degree deg+1 of the same pair.
  LinComb dmul(int X, int Y, int deg, int idx) const;
  std::string label(int X, int Y, int deg, int idx) const;
};

// Fibre functor ω: per-object finite complexes plus the action of every hom
// basis element; act[(X,Y,deg,idx)] is a degree-deg graded map ω(Y) -> ω(X).
struct FibreFunctor {
  std::vector<Complex> val;
  std::map<std::array<int, 4>, ChainMap> act;

  ChainMap action(const DgCat& A, int X, int Y, int deg, int idx) const;
};

// Monoidal data on a presentation.
struct MonoidalData {
  std::vector<std::vector<int>> obj_tensor;  // X ⊠ Y
  int unit = 0;
  bool symmetric = false;
  // mor[(X,Y,da,ia,X2,Y2,db,ib)] = coefficients of a ⊠ b in
  // A(X⊠X2, Y⊠Y2)^{da+db}.
  std::map<std::array<int, 8>, LinComb> mor;
};

// Strong-monoidality data for ω on a monoidal presentation: a degree-0
// invertible chain map tensor(ω(X), ω(Y)) -> ω(X⊠Y) per object pair.
struct MonoidalFibreData {
  std::map<std::pair<int, int>, ChainMap> iso;
};

std::vector<std::string> validate_category(const DgCat& A);
std::vector<std::string> validate_functor(const DgCat& A, const FibreFunctor& w);
std::vector<std::string> validate_monoidal(const DgCat& A, const MonoidalData& m);
std::vector<std::string> validate_monoidal_fibre(const DgCat& A, const FibreFunctor& w,
                                                 const MonoidalData& m,
                                                 const MonoidalFibreData& mw);
// Verify the declared nilpotence bound N by composing strictly-positive-degree
// generators exhaustively up to length N+1.
std::vector<std::string> validate_nilpotence(const DgCat& A);

// One-sided module over (a full subcategory of) A, given by per-object
// complexes and an action table.
//  right module: act[(X,Y,dm,im,da,ia)] = m * a      in M(Y)^{dm+da}
//  left module:  act[(X,Y,da,ia,dm,im)] = a * m      in M(X)^{da+dm}
// where a runs over the basis of A(X,Y) and m over M(X) (right) / M(Y) (left).
struct OneSidedModule {
  bool right = true;
  std::map<int, Complex> val;  // object -> complex
  std::map<std::array<int, 6>, LinComb> act;

  const Complex& at(int X) const;
  LinComb apply(const DgCat& A, int X, int Y, int da, int ia, int dm, int im) const;
};

// Standard instances.
OneSidedModule module_hom_from(const DgCat& A, int W);   // right module A(W,−)
OneSidedModule module_hom_to(const DgCat& A, int V);     // left module A(−,V)
OneSidedModule module_omega(const DgCat& A, const FibreFunctor& w);       // left
OneSidedModule module_omega_dual(const DgCat& A, const FibreFunctor& w);  // right

// Coequalizer ⊕_X M(X)⊗N(X) / (m·a ⊗ n − m ⊗ a·n), a over A0's homs on the
// given object subset.  Labels are "m⊗n@X".  A0 must have vanishing
// differential on the selected homs.
Complex tensor_over_subcategory(const DgCat& A0, const std::vector<int>& objects,
                                const OneSidedModule& M, const OneSidedModule& N);

struct StrictifyResult {
  DgCat B;
  std::map<std::pair<int, int>, QuasiIsoCertificate> inclusion_certs;
};

// Replace A by a quasi-equivalent sub-presentation B with dB^0 = 0 and
// B^0 = H^0 A.  Requires H^{<0}A = 0; fails (throws) when no equivariant
// bimodule complement of dA^0 inside A^1 exists.
StrictifyResult strictify_degree_zero(const DgCat& A);

}  // namespace dgtk
