#pragma once

#include <map>

#include "dgtk/complex.hpp"

namespace dgtk {

// Per-degree witness that a chain map induces isomorphisms on cohomology
// within a window: verdict(j) holds iff dim H^j(source) = dim H^j(target) =
// rank of the induced map.
struct QuasiIsoCertificate {
  int window_lo = 0, window_hi = 0;
  int depth = -1;  // cobar depth when applicable, else -1
  std::map<int, int> dims_source, dims_target, induced_ranks;
  std::map<int, bool> verdict;

  bool all_true() const {
    for (auto& [j, v] : verdict)
      if (!v) return false;
    return true;
  }
};

QuasiIsoCertificate induced_map_on_cohomology(const ChainMap& f, const Complex& source,
                                              const Complex& target, int lo, int hi);

}  // namespace dgtk
