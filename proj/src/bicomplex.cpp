#include "dgtk/bicomplex.hpp"

#include <stdexcept>

namespace dgtk {

std::vector<std::string> check_bicomplex(const Bicomplex& b) {
  std::vector<std::string> report;
  int L = b.top_level();
  for (int i = 1; i <= L; ++i) {
    if (!check_chain_map(b.chain_d[i], b.levels[i], b.levels[i - 1]))
      report.push_back("chain_d does not commute with the cochain differential at level " +
                       std::to_string(i));
    if (i >= 2) {
      ChainMap sq = compose_chain_maps(b.chain_d[i - 1], b.chain_d[i], b.levels[i],
                                       b.levels[i - 1], b.levels[i - 2]);
      for (auto& [n, m] : sq.blocks)
        if (!m.is_zero()) {
          report.push_back("chain_d^2 != 0 from level " + std::to_string(i) + " in degree " +
                           std::to_string(n));
          break;
        }
    }
  }
  return report;
}

std::string TrustedWindow::describe() const {
  if (all) return "all degrees";
  if (none) return "no degrees";
  return "degrees >= " + std::to_string(min_trusted);
}

TrustedWindow trusted_window(const Bicomplex& b, int L) {
  TrustedWindow w;
  if (b.exact && L >= b.top_level()) {
    w.all = true;
    return w;
  }
  if (!b.bound) {
    w.none = true;
    return w;
  }
  // Level i > L occupies total degrees [(slope_lo-1)i+off_lo, (slope_hi-1)i+off_hi].
  long su = b.bound->slope_hi - 1;
  if (su > 0) {
    w.none = true;
    return w;
  }
  long hi_star = su * (L + 1) + b.bound->off_hi;
  w.min_trusted = hi_star + 2;
  return w;
}

int total_index(const Bicomplex& b, int L, int n, int i, int idx) {
  int off = 0;
  for (int k = 0; k <= L; ++k) {
    int dk = b.levels[k].dim(n + k);
    if (k == i) return off + idx;
    off += dk;
  }
  throw std::logic_error("total_index: level out of range");
}

std::pair<Complex, TrustedWindow> total_complex(const Bicomplex& b, int L) {
  if (L > b.top_level()) throw std::invalid_argument("total_complex: levels above cutoff missing");
  Complex tot(b.field);
  for (int i = 0; i <= L; ++i)
    for (auto& [j, labels] : b.levels[i].basis) {
      auto& dst = tot.basis[j - i];
      dst.insert(dst.end(), labels.begin(), labels.end());
    }
  // Rebuild in level order per degree (map insertion above already appends in
  // level order since we loop levels outermost — but per-degree append order
  // across levels follows the i loop, which is what we want).
  for (auto& [n, labels] : tot.basis) {
    SparseMatrix m(b.field, tot.dim(n + 1), (int)labels.size());
    for (int i = 0; i <= L; ++i) {
      int j = n + i;
      int di = b.levels[i].dim(j);
      if (di == 0) continue;
      SparseMatrix dc = b.levels[i].diff(j);  // -> (i, j+1) within degree n+1
      for (int r = 0; r < dc.rows; ++r)
        for (auto& [c, v] : dc.entries[r])
          m.add_to(total_index(b, L, n + 1, i, r), total_index(b, L, n, i, c), v);
      if (i >= 1) {
        SparseMatrix ch = b.chain_d[i].block(j, b.levels[i], b.levels[i - 1]);
        Rat sgn(j % 2 == 0 ? 1 : -1);
        for (int r = 0; r < ch.rows; ++r)
          for (auto& [c, v] : ch.entries[r])
            m.add_to(total_index(b, L, n + 1, i - 1, r), total_index(b, L, n, i, c), sgn * v);
      }
    }
    if (!m.is_zero()) tot.d[n] = std::move(m);
  }
  tot.prune();
  return {tot, trusted_window(b, L)};
}

}  // namespace dgtk
