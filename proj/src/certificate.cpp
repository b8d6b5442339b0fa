#include "dgtk/certificate.hpp"

#include <stdexcept>

namespace dgtk {

QuasiIsoCertificate induced_map_on_cohomology(const ChainMap& f, const Complex& source,
                                              const Complex& target, int lo, int hi) {
  if (f.degree != 0) throw std::invalid_argument("induced_map_on_cohomology: degree must be 0");
  QuasiIsoCertificate cert;
  cert.window_lo = lo;
  cert.window_hi = hi;
  CohomologyResult hs = cohomology(source, lo, hi);
  CohomologyResult ht = cohomology(target, lo, hi);
  for (int j = lo; j <= hi; ++j) {
    cert.dims_source[j] = hs.dims[j];
    cert.dims_target[j] = ht.dims[j];
    // Rank of H^j(f): rank([im d_T^{j-1} | f(reps)]) - rank(im d_T^{j-1}).
    SparseMatrix img = target.diff(j - 1);
    std::vector<std::vector<Rat>> mapped;
    SparseMatrix blk = f.block(j, source, target);
    for (auto& rep : hs.reps[j]) mapped.push_back(blk.apply(rep));
    SparseMatrix probe = img.hcat(columns_to_matrix(target.field, target.dim(j), mapped));
    int r = rank(probe) - rank(img);
    cert.induced_ranks[j] = r;
    cert.verdict[j] = (hs.dims[j] == ht.dims[j]) && (ht.dims[j] == r);
  }
  return cert;
}

}  // namespace dgtk
