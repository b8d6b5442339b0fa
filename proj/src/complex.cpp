#include "dgtk/complex.hpp"

#include <algorithm>
#include <stdexcept>

namespace dgtk {

SparseMatrix Complex::diff(int n) const {
  auto it = d.find(n);
  if (it != d.end()) return it->second;
  return SparseMatrix(field, dim(n + 1), dim(n));
}

void Complex::set_diff(int n, SparseMatrix m) {
  if (m.rows != dim(n + 1) || m.cols != dim(n))
    throw std::invalid_argument("Complex::set_diff: shape mismatch in degree " + std::to_string(n));
  if (m.is_zero())
    d.erase(n);
  else
    d[n] = std::move(m);
}

void Complex::prune() {
  for (auto it = basis.begin(); it != basis.end();)
    it = it->second.empty() ? basis.erase(it) : std::next(it);
  for (auto it = d.begin(); it != d.end();) {
    bool dead = it->second.is_zero() || dim(it->first) == 0 || dim(it->first + 1) == 0;
    it = dead ? d.erase(it) : std::next(it);
  }
}

SparseMatrix ChainMap::block(int n, const Complex& source, const Complex& target) const {
  auto it = blocks.find(n);
  if (it != blocks.end()) return it->second;
  return SparseMatrix(source.field, target.dim(n + degree), source.dim(n));
}

ChainMap identity_chain_map(const Complex& c) {
  ChainMap f;
  for (auto& [n, labels] : c.basis) f.blocks[n] = SparseMatrix::identity(c.field, (int)labels.size());
  return f;
}

std::vector<std::string> check_complex(const Complex& c) {
  std::vector<std::string> report;
  for (auto& [n, labels] : c.basis) {
    if (c.dim(n + 2) == 0 && c.dim(n + 1) == 0) continue;
    SparseMatrix dd = c.diff(n + 1).mul(c.diff(n));
    for (int j = 0; j < (int)labels.size(); ++j)
      for (int i = 0; i < dd.rows; ++i)
        if (dd.get(i, j) != 0) {
          report.push_back("d^2 != 0 on basis element '" + labels[j] + "' in degree " +
                           std::to_string(n));
          break;
        }
  }
  return report;
}

bool check_chain_map(const ChainMap& f, const Complex& source, const Complex& target) {
  Rat sign(f.degree % 2 == 0 ? 1 : -1);
  int lo = source.empty() ? 0 : source.min_degree() - 1;
  int hi = source.empty() ? 0 : source.max_degree();
  for (int n = lo; n <= hi; ++n) {
    SparseMatrix lhs = target.diff(n + f.degree).mul(f.block(n, source, target));
    SparseMatrix rhs = f.block(n + 1, source, target).mul(source.diff(n)).scale(sign);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

ChainMap compose_chain_maps(const ChainMap& g, const ChainMap& f, const Complex& source,
                            const Complex& middle, const Complex& target) {
  ChainMap h;
  h.degree = f.degree + g.degree;
  for (auto& [n, labels] : source.basis) {
    SparseMatrix m = g.block(n + f.degree, middle, target).mul(f.block(n, source, middle));
    if (!m.is_zero()) h.blocks[n] = std::move(m);
    else h.blocks[n] = m;
  }
  return h;
}

CohomologyResult cohomology(const Complex& c, int lo, int hi) {
  CohomologyResult res;
  for (int j = lo; j <= hi; ++j) {
    int dj = c.dim(j);
    if (dj == 0) {
      res.dims[j] = 0;
      res.reps[j] = {};
      continue;
    }
    auto ker = kernel_basis(c.diff(j));
    SparseMatrix img = c.diff(j - 1);  // columns span the image in degree j
    SparseMatrix probe = img.hcat(columns_to_matrix(c.field, dj, ker));
    RrefResult r = rref(probe);
    std::vector<std::vector<Rat>> reps;
    for (int pc : r.pivot_cols)
      if (pc >= img.cols) reps.push_back(ker[pc - img.cols]);
    res.dims[j] = (int)reps.size();
    res.reps[j] = std::move(reps);
  }
  return res;
}

Complex shift(const Complex& c, int k) {
  Complex out(c.field);
  for (auto& [n, labels] : c.basis) out.basis[n - k] = labels;
  Rat sign(k % 2 == 0 ? 1 : -1);
  for (auto& [n, m] : c.d) out.d[n - k] = m.scale(sign);
  return out;
}

Complex dual(const Complex& c) {
  Complex out(c.field);
  for (auto& [n, labels] : c.basis) {
    std::vector<std::string> duals;
    for (auto& l : labels) duals.push_back(l + "*");
    out.basis[-n] = std::move(duals);
  }
  // d_dual in dual degree m = −n−1 sends (c^{n+1})^∨ -> (c^n)^∨ by
  // φ ↦ −(−1)^m φ∘d^n, i.e. the matrix −(−1)^m (d^n)^T.
  for (auto& [n, m] : c.d) {
    int dd = -n - 1;
    Rat sign(dd % 2 == 0 ? -1 : 1);
    SparseMatrix t = m.transpose().scale(sign);
    if (!t.is_zero()) out.d[dd] = std::move(t);
  }
  return out;
}

Complex tensor(const Complex& a, const Complex& b) {
  Complex out(a.field);
  if (a.field != b.field) throw std::invalid_argument("tensor: field mismatch");
  for (auto& [p, la] : a.basis)
    for (auto& [q, lb] : b.basis) {
      auto& dst = out.basis[p + q];
      for (auto& x : la)
        for (auto& y : lb) dst.push_back(x + "⊗" + y);
    }
  for (auto& [n, labels] : out.basis) {
    SparseMatrix m(out.field, out.dim(n + 1), (int)labels.size());
    for (auto& [p, la] : a.basis) {
      int q = n - p;
      int dq = b.dim(q);
      if (dq == 0) continue;
      SparseMatrix daT = a.diff(p).transpose();  // row i = d(a^p_i)
      SparseMatrix dbT = b.diff(q).transpose();
      Rat sgn(p % 2 == 0 ? 1 : -1);
      for (int i = 0; i < (int)la.size(); ++i)
        for (int j = 0; j < dq; ++j) {
          int col = tensor_index(a, b, p, i, q, j);
          // dx ⊗ y
          for (auto& [r, v] : daT.entries[i])
            m.add_to(tensor_index(a, b, p + 1, r, q, j), col, v);
          // ± x ⊗ dy
          for (auto& [r, v] : dbT.entries[j])
            m.add_to(tensor_index(a, b, p, i, q + 1, r), col, sgn * v);
        }
    }
    if (!m.is_zero()) out.d[n] = std::move(m);
  }
  out.prune();
  return out;
}

int tensor_index(const Complex& a, const Complex& b, int p, int i, int q, int j) {
  int n = p + q;
  int off = 0;
  for (auto& [pp, la] : a.basis) {
    int qq = n - pp;
    int dq = b.dim(qq);
    if (dq == 0) continue;
    if (pp == p) return off + i * dq + j;
    off += (int)la.size() * dq;
  }
  throw std::logic_error("tensor_index: component absent");
}

Complex direct_sum(const Complex& a, const Complex& b) {
  Complex out(a.field);
  for (auto& [n, la] : a.basis) out.basis[n] = la;
  for (auto& [n, lb] : b.basis) {
    auto& dst = out.basis[n];
    dst.insert(dst.end(), lb.begin(), lb.end());
  }
  for (auto& [n, labels] : out.basis) {
    SparseMatrix m(out.field, out.dim(n + 1), (int)labels.size());
    SparseMatrix da = a.diff(n), db = b.diff(n);
    for (int i = 0; i < da.rows; ++i)
      for (auto& [j, v] : da.entries[i]) m.set(i, j, v);
    for (int i = 0; i < db.rows; ++i)
      for (auto& [j, v] : db.entries[i]) m.set(a.dim(n + 1) + i, a.dim(n) + j, v);
    if (!m.is_zero()) out.d[n] = std::move(m);
  }
  out.prune();
  return out;
}

namespace {
// Canonical echelon basis of the span of the given vectors, as rows.
std::vector<std::vector<Rat>> echelon_span(FieldSpec f, int dim,
                                           const std::vector<std::vector<Rat>>& vecs) {
  SparseMatrix m(f, (int)vecs.size(), dim);
  for (int i = 0; i < (int)vecs.size(); ++i)
    for (int j = 0; j < dim; ++j) m.set(i, j, vecs[i][j]);
  RrefResult r = rref(m);
  std::vector<std::vector<Rat>> rows;
  for (int i = 0; i < r.rank; ++i) {
    std::vector<Rat> v(dim, Rat(0));
    for (auto& [j, val] : r.echelon.entries[i]) v[j] = val;
    rows.push_back(std::move(v));
  }
  return rows;
}
}  // namespace

std::pair<Complex, ChainMap> subcomplex(const Complex& c,
                                        const std::map<int, std::vector<std::vector<Rat>>>& span) {
  Complex sub(c.field);
  std::map<int, std::vector<std::vector<Rat>>> bas;  // degree -> echelon basis vectors
  for (auto& [n, vecs] : span) {
    auto rows = echelon_span(c.field, c.dim(n), vecs);
    if (rows.empty()) continue;
    bas[n] = rows;
    std::vector<std::string> labels;
    for (int i = 0; i < (int)rows.size(); ++i)
      labels.push_back("s" + std::to_string(n) + "_" + std::to_string(i));
    sub.basis[n] = std::move(labels);
  }
  ChainMap inc;
  for (auto& [n, rows] : bas) inc.blocks[n] = columns_to_matrix(c.field, c.dim(n), rows);
  for (auto& [n, rows] : bas) {
    SparseMatrix m(c.field, sub.dim(n + 1), (int)rows.size());
    SparseMatrix next = bas.count(n + 1) ? columns_to_matrix(c.field, c.dim(n + 1), bas[n + 1])
                                         : SparseMatrix(c.field, c.dim(n + 1), 0);
    for (int j = 0; j < (int)rows.size(); ++j) {
      std::vector<Rat> img = c.diff(n).apply(rows[j]);
      bool nz = false;
      for (auto& v : img) nz = nz || v != 0;
      if (!nz) continue;
      auto x = solve(next, img);
      if (!x) throw std::invalid_argument("subcomplex: span is not d-stable in degree " +
                                          std::to_string(n));
      for (int i = 0; i < (int)x->size(); ++i) m.set(i, j, (*x)[i]);
    }
    if (!m.is_zero()) sub.d[n] = std::move(m);
  }
  return {sub, inc};
}

std::pair<Complex, ChainMap> quotient_complex(
    const Complex& c, const std::map<int, std::vector<std::vector<Rat>>>& span) {
  Complex quo(c.field);
  std::map<int, SparseMatrix> proj;  // degree -> quotient_dim x ambient_dim
  std::map<int, std::vector<int>> free_cols;
  for (auto& [n, labels] : c.basis) {
    int dim = (int)labels.size();
    std::vector<std::vector<Rat>> vecs;
    auto it = span.find(n);
    if (it != span.end()) vecs = it->second;
    SparseMatrix m(c.field, (int)vecs.size(), dim);
    for (int i = 0; i < (int)vecs.size(); ++i)
      for (int j = 0; j < dim; ++j) m.set(i, j, vecs[i][j]);
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(dim, false);
    for (int pc : r.pivot_cols) is_pivot[pc] = true;
    std::vector<int>& free = free_cols[n];
    for (int j = 0; j < dim; ++j)
      if (!is_pivot[j]) free.push_back(j);
    std::vector<std::string> qlabels;
    for (int j : free) qlabels.push_back(labels[j]);
    if (!qlabels.empty()) quo.basis[n] = std::move(qlabels);
    SparseMatrix P(c.field, (int)free.size(), dim);
    for (int q = 0; q < (int)free.size(); ++q) P.set(q, free[q], Rat(1));
    for (int k = 0; k < r.rank; ++k) {
      int pc = r.pivot_cols[k];
      for (int q = 0; q < (int)free.size(); ++q) {
        Rat v = r.echelon.get(k, free[q]);
        if (v != 0) P.set(q, pc, -v);
      }
    }
    proj[n] = std::move(P);
  }
  for (auto& [n, labels] : c.basis) {
    if (quo.dim(n) == 0) continue;
    // d̄ = proj_{n+1} ∘ d ∘ section_n, section = inclusion of free columns.
    SparseMatrix sec(c.field, c.dim(n), quo.dim(n));
    for (int q = 0; q < (int)free_cols[n].size(); ++q) sec.set(free_cols[n][q], q, Rat(1));
    SparseMatrix pn1 = proj.count(n + 1) ? proj[n + 1] : SparseMatrix(c.field, 0, c.dim(n + 1));
    SparseMatrix m = pn1.mul(c.diff(n)).mul(sec);
    if (!m.is_zero()) quo.d[n] = std::move(m);
  }
  ChainMap pr;
  for (auto& [n, P] : proj)
    if (P.rows > 0 || P.cols > 0) pr.blocks[n] = P;
  quo.prune();
  return {quo, pr};
}

}  // namespace dgtk
