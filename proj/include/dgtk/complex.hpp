#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dgtk/sparse_matrix.hpp"

namespace dgtk {

// A finitely-supported cochain complex with labelled bases.  Degrees of
// dimension zero are stored implicitly (absent from the maps).  The
// differential d[n] raises degree by one: its matrix has shape
// dim(n+1) x dim(n), columns indexed by the degree-n basis.
struct Complex {
  FieldSpec field;
  std::map<int, std::vector<std::string>> basis;  // degree -> ordered labels
  std::map<int, SparseMatrix> d;                  // degree -> matrix into degree+1

  explicit Complex(FieldSpec f = FieldSpec::rationals()) : field(f) {}

  int dim(int n) const {
    auto it = basis.find(n);
    return it == basis.end() ? 0 : (int)it->second.size();
  }
  bool empty() const { return basis.empty(); }
  int min_degree() const { return basis.empty() ? 0 : basis.begin()->first; }
  int max_degree() const { return basis.empty() ? 0 : basis.rbegin()->first; }

  // d in degree n as a dim(n+1) x dim(n) matrix (zero if absent).
  SparseMatrix diff(int n) const;
  void set_diff(int n, SparseMatrix m);
  void prune();  // drop zero-dimension degrees and zero differentials
};

// A graded linear map f of fixed degree between complexes.  blocks[n] maps
// the source degree-n component into the target degree-(n+degree) component.
// Chain-map property: d_T ∘ f = (−1)^degree f ∘ d_S.
struct ChainMap {
  int degree = 0;
  std::map<int, SparseMatrix> blocks;

  SparseMatrix block(int n, const Complex& source, const Complex& target) const;
};

ChainMap identity_chain_map(const Complex& c);

// Lines of human-readable failures; empty means the invariant holds.
std::vector<std::string> check_complex(const Complex& c);
bool check_chain_map(const ChainMap& f, const Complex& source, const Complex& target);

// Compose g∘f (degrees add).
ChainMap compose_chain_maps(const ChainMap& g, const ChainMap& f, const Complex& source,
                            const Complex& middle, const Complex& target);

struct CohomologyResult {
  std::map<int, int> dims;
  // Representative cocycles per degree, as coordinate vectors in the
  // degree's basis; their classes form a basis of H.
  std::map<int, std::vector<std::vector<Rat>>> reps;
};

CohomologyResult cohomology(const Complex& c, int lo, int hi);

// Shift: shift(c,k)^n = c^{n+k}, differential scaled by (−1)^k.
Complex shift(const Complex& c, int k);

// Dual: dual(c)^{-n} = (c^n)^∨ with dφ = −(−1)^{|φ|} φ∘d.  Labels get a
// trailing '*'.
Complex dual(const Complex& c);

// Tensor product with Koszul-signed differential d(x⊗y)=dx⊗y+(−1)^{|x|}x⊗dy.
// Degree-n basis is ordered by left degree p increasing, then left index,
// then right index; labels are "l⊗r".
Complex tensor(const Complex& a, const Complex& b);

// Position of a^p_i ⊗ b^q_j inside tensor(a,b)^{p+q}.
int tensor_index(const Complex& a, const Complex& b, int p, int i, int q, int j);

Complex direct_sum(const Complex& a, const Complex& b);

// Subcomplex spanned by the given per-degree vectors (ambient coordinates).
// The span must be d-stable; a canonical echelon basis is chosen per degree.
// Returns the subcomplex and the inclusion chain map.
std::pair<Complex, ChainMap> subcomplex(const Complex& c,
                                        const std::map<int, std::vector<std::vector<Rat>>>& span);

// Quotient of c by the d-stable span of the given vectors.  Returns the
// quotient and the projection chain map; quotient basis labels are the
// ambient labels of the surviving (non-pivot) basis vectors.
std::pair<Complex, ChainMap> quotient_complex(
    const Complex& c, const std::map<int, std::vector<std::vector<Rat>>>& span);

}  // namespace dgtk
