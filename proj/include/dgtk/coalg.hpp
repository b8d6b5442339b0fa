#pragma once

#include "dgtk/certificate.hpp"
#include "dgtk/hochschild.hpp"

namespace dgtk {

// (degree, index) of a basis element of some Complex.
using BasisRef = std::pair<int, int>;

struct DeltaTerm {
  BasisRef left, right;
  Rat c;
};

// A dg coalgebra on a labelled complex.  delta and counit are sparse; an
// optional level grading (from a simplicial origin) bounds where products of
// a truncated bialgebra are defined: star entries exist exactly for pairs
// whose level sum is <= max_level.
struct DgCoalgebra {
  Complex underlying;
  std::map<BasisRef, std::vector<DeltaTerm>> delta;
  std::map<BasisRef, Rat> counit;

  std::map<BasisRef, int> level;  // empty = no level grading
  int max_level = -1;

  bool has_product = false;
  bool symmetric = false;
  std::map<std::pair<BasisRef, BasisRef>, std::map<BasisRef, Rat>> star;
  BasisRef unit{0, 0};

  bool has_involution = false;
  std::map<BasisRef, std::map<BasisRef, Rat>> rho;

  int level_of(const BasisRef& b) const;  // -1 when ungraded
  // star of two basis elements; nullopt when outside the truncation
  std::optional<std::map<BasisRef, Rat>> product(const BasisRef& a, const BasisRef& b) const;
};

std::vector<std::string> check_coalgebra(const DgCoalgebra& C);

// Cofree conilpotent coalgebra on one generator of degree -1, truncated at
// tensor length L: basis x^0..x^L with x^n in degree -n, d = 0,
// deconcatenation comultiplication.
DgCoalgebra free_dg_coalgebra(int L);

// A comodule over a fixed coalgebra.  For a right comodule the coaction
// sends m to sums (m' , c); for a left comodule to sums (c , m').
struct Comodule {
  bool right = true;
  Complex underlying;
  std::map<BasisRef, std::vector<DeltaTerm>> mu;
  const DgCoalgebra* C = nullptr;
};

std::vector<std::string> check_comodule(const Comodule& M);

// C as a comodule over itself via its comultiplication.
Comodule coalgebra_as_comodule(const DgCoalgebra& C, bool right);
// One-dimensional comodule on a grouplike basis element g (Δg = g⊗g, εg = 1).
Comodule trivial_comodule(const DgCoalgebra& C, const BasisRef& g, bool right);

// Kernel of mu_N ⊗ id - id ⊗ mu_M inside N⊗M.
Complex cotensor(const Comodule& N, const Comodule& M);

// Degreewise solutions of "f is a comodule map P -> N of degree i" for i in
// [lo,hi], with differential df = d_N f - (-1)^i f d_P.  The solution maps
// themselves are returned for downstream evaluation.
struct HomComplexResult {
  Complex hom;
  std::map<BasisRef, ChainMap> maps;
};
HomComplexResult comodule_hom_complex(const Comodule& P, const Comodule& N, int lo, int hi);

// Truncated reduced cobar coresolution ⊕_{0<=n<=depth} M ⊗ C̄^{⊗n} ⊗ C with
// the conormalized cosimplicial differential (C̄ = coaugmentation complement),
// coaction on the last factor, and the certified inclusion of M.
struct CobarResult {
  Comodule R;
  ChainMap inclusion;  // underlying(M) -> underlying(R)
  QuasiIsoCertificate cert;
};
CobarResult cobar_coresolution(const Comodule& M, int depth);

// Level-wise product on Hochschild levels: table[(n, d1,i1, d2,i2)] is the
// product of two level-n basis strings inside level n.  Always indexed by the
// unnormalized levels (shuffle lifts pass through degenerate strings).
struct LevelProduct {
  bool symmetric = false;
  BasisRef unit{0, 0};  // level-0 unit string (degree, index)
  std::map<std::array<int, 5>, std::map<BasisRef, Rat>> table;
};

// The (level, within-level index) decomposition of the totalization of lv,
// matching the basis order produced by total_complex.
std::map<BasisRef, std::pair<int, int>> total_origin(const SimplicialLevels& lv);

// Extend a level-wise product to the total complex by Eilenberg-Zilber
// shuffles and attach it to the coalgebra C built from the same levels.
// lv must be the unnormalized levels (degeneracies are needed); normalized
// says whether C was totalized from normalize(lv) instead of lv itself.
DgCoalgebra shuffle_bialgebra(const SimplicialLevels& lv, const LevelProduct& prod,
                              DgCoalgebra C, bool normalized);

// Enumeration oracle: the signed number of (p,q)-shuffles, i.e. the
// coefficient of the shuffle product of two generators all of whose factors
// have odd total degree.
Rat signed_shuffle_count(int p, int q);

// Dual-functor data on a presentation with strong duals: an object
// involution and a compatible transposition of hom bases.
struct DualData {
  std::vector<int> obj_dual;
  std::map<std::array<int, 4>, LinComb> mor_dual;  // basis of A(X,Y) -> A(Y*,X*)
};

// (a) verifies the string-reversal involution rho descends to C exactly;
// (b) the antipode identity on every H^0 class; (c) reports the chain-level
// basis elements where the antipode identity fails (informational lines are
// prefixed "chain-level:"; only non-prefixed lines are hard failures).
std::vector<std::string> involution_and_antipode_check(const SimplicialLevels& lv,
                                                       const DualData& dual, DgCoalgebra& C,
                                                       bool normalized);

}  // namespace dgtk
