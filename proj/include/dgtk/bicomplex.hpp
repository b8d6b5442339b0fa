#pragma once

#include <optional>

#include "dgtk/complex.hpp"

namespace dgtk {

// Declared cochain-degree support of level i (for ALL levels, including the
// ones beyond any truncation): [slope_lo*i + off_lo, slope_hi*i + off_hi].
struct SupportBound {
  long slope_lo = 0, off_lo = 0;
  long slope_hi = 0, off_hi = 0;
};

// A chain complex of cochain complexes.  levels[i] is the level-i cochain
// complex; chain_d[i] (for i >= 1) is a degree-0 chain map level i -> level
// i-1 squaring to zero and commuting with the cochain differentials.  (For a
// simplicial origin, chain_d is already the alternating face sum.)
struct Bicomplex {
  FieldSpec field;
  std::vector<Complex> levels;
  std::vector<ChainMap> chain_d;  // chain_d[0] is unused
  std::optional<SupportBound> bound;
  bool exact = false;  // levels beyond those materialized are all zero

  int top_level() const { return (int)levels.size() - 1; }
};

std::vector<std::string> check_bicomplex(const Bicomplex& b);

// Degrees in which a level-<=L total complex provably computes the cohomology
// of the untruncated total complex.
struct TrustedWindow {
  bool all = false;
  bool none = false;
  long min_trusted = 0;  // when !all && !none: trusted iff degree >= min_trusted

  bool trusted(long j) const { return all || (!none && j >= min_trusted); }
  std::string describe() const;
};

// Totalization with the fixed sign convention: on the level-i cochain-degree-j
// component, d_tot = d_cochain + (−1)^j * chain_d.  Total degree n collects
// level i cochain degree n+i for 0 <= i <= L, ordered by increasing i.
std::pair<Complex, TrustedWindow> total_complex(const Bicomplex& b, int L);

// Position of level-i basis element idx inside total degree n = (n+i) - i.
int total_index(const Bicomplex& b, int L, int n, int i, int idx);

TrustedWindow trusted_window(const Bicomplex& b, int L);

}  // namespace dgtk
