#include "dgtk/sparse_matrix.hpp"

#include <algorithm>

namespace dgtk {

SparseMatrix SparseMatrix::identity(FieldSpec f, int n) {
  SparseMatrix m(f, n, n);
  for (int i = 0; i < n; ++i) m.entries[i][i] = Rat(1);
  return m;
}

Rat SparseMatrix::get(int r, int c) const {
  auto it = entries[r].find(c);
  return it == entries[r].end() ? Rat(0) : it->second;
}

void SparseMatrix::set(int r, int c, const Rat& v) {
  Rat w = field.normalize(v);
  if (w == 0)
    entries[r].erase(c);
  else
    entries[r][c] = w;
}

void SparseMatrix::add_to(int r, int c, const Rat& v) { set(r, c, get(r, c) + v); }

bool SparseMatrix::is_zero() const {
  for (auto& row : entries)
    if (!row.empty()) return false;
  return true;
}

SparseMatrix SparseMatrix::mul(const SparseMatrix& other) const {
  if (cols != other.rows || field != other.field)
    throw std::invalid_argument("SparseMatrix::mul: shape/field mismatch");
  SparseMatrix out(field, rows, other.cols);
  for (int i = 0; i < rows; ++i) {
    std::map<int, Rat> acc;
    for (auto& [k, a] : entries[i])
      for (auto& [j, b] : other.entries[k]) acc[j] += a * b;
    for (auto& [j, v] : acc) out.set(i, j, v);
  }
  return out;
}

SparseMatrix SparseMatrix::add(const SparseMatrix& other) const {
  if (rows != other.rows || cols != other.cols || field != other.field)
    throw std::invalid_argument("SparseMatrix::add: shape/field mismatch");
  SparseMatrix out = *this;
  for (int i = 0; i < rows; ++i)
    for (auto& [j, v] : other.entries[i]) out.add_to(i, j, v);
  return out;
}

SparseMatrix SparseMatrix::scale(const Rat& s) const {
  SparseMatrix out(field, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (auto& [j, v] : entries[i]) out.set(i, j, v * s);
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix out(field, cols, rows);
  for (int i = 0; i < rows; ++i)
    for (auto& [j, v] : entries[i]) out.entries[j][i] = v;
  return out;
}

SparseMatrix SparseMatrix::hcat(const SparseMatrix& other) const {
  if (rows != other.rows || field != other.field)
    throw std::invalid_argument("SparseMatrix::hcat: shape/field mismatch");
  SparseMatrix out(field, rows, cols + other.cols);
  for (int i = 0; i < rows; ++i) {
    out.entries[i] = entries[i];
    for (auto& [j, v] : other.entries[i]) out.entries[i][cols + j] = v;
  }
  return out;
}

SparseMatrix SparseMatrix::vcat(const SparseMatrix& other) const {
  if (cols != other.cols || field != other.field)
    throw std::invalid_argument("SparseMatrix::vcat: shape/field mismatch");
  SparseMatrix out(field, rows + other.rows, cols);
  for (int i = 0; i < rows; ++i) out.entries[i] = entries[i];
  for (int i = 0; i < other.rows; ++i) out.entries[rows + i] = other.entries[i];
  return out;
}

SparseMatrix SparseMatrix::submatrix_cols(const std::vector<int>& keep) const {
  SparseMatrix out(field, rows, (int)keep.size());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < (int)keep.size(); ++j) {
      Rat v = get(i, keep[j]);
      if (v != 0) out.entries[i][j] = v;
    }
  return out;
}

std::vector<Rat> SparseMatrix::apply(const std::vector<Rat>& v) const {
  if ((int)v.size() != cols) throw std::invalid_argument("SparseMatrix::apply: size mismatch");
  std::vector<Rat> out(rows, Rat(0));
  for (int i = 0; i < rows; ++i) {
    Rat acc(0);
    for (auto& [j, a] : entries[i]) acc += a * v[j];
    out[i] = field.normalize(acc);
  }
  return out;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  return field == o.field && rows == o.rows && cols == o.cols && entries == o.entries;
}

RrefResult rref(const SparseMatrix& m) {
  RrefResult res;
  const FieldSpec& F = m.field;
  // Dense working copy of rows (still map-based per row for sparsity).
  std::vector<std::map<int, Rat>> rows = m.entries;
  int nr = m.rows, nc = m.cols;
  std::vector<int> pivot_row_of_col(nc, -1);
  int next_row = 0;
  for (int col = 0; col < nc && next_row < nr; ++col) {
    // Topmost remaining row with a nonzero entry in this column.
    int prow = -1;
    for (int r = next_row; r < nr; ++r) {
      auto it = rows[r].find(col);
      if (it != rows[r].end() && !F.is_zero(it->second)) {
        prow = r;
        break;
      }
    }
    if (prow < 0) continue;
    std::swap(rows[next_row], rows[prow]);
    Rat p = F.normalize(rows[next_row][col]);
    // Eliminate this column from every other row (fraction-free: row' = p*row - c*pivot_row,
    // over Q; over F_p exact field ops are as cheap, same formula).
    for (int r = 0; r < nr; ++r) {
      if (r == next_row) continue;
      auto it = rows[r].find(col);
      if (it == rows[r].end()) continue;
      Rat c = it->second;
      std::map<int, Rat> nrow;
      for (auto& [j, v] : rows[r]) {
        Rat w = F.normalize(p * v);
        if (w != 0) nrow[j] = w;
      }
      for (auto& [j, v] : rows[next_row]) {
        Rat base = nrow.count(j) ? nrow[j] : Rat(0);
        Rat w = F.normalize(base - c * v);
        if (w == 0)
          nrow.erase(j);
        else
          nrow[j] = w;
      }
      rows[r] = std::move(nrow);
    }
    pivot_row_of_col[col] = next_row;
    res.pivot_cols.push_back(col);
    ++next_row;
  }
  res.rank = next_row;
  // Normalize pivot rows to leading 1.
  for (size_t k = 0; k < res.pivot_cols.size(); ++k) {
    int col = res.pivot_cols[k];
    int r = (int)k;
    Rat p = rows[r][col];
    Rat pinv = F.inv(p);
    std::map<int, Rat> nrow;
    for (auto& [j, v] : rows[r]) {
      Rat w = F.normalize(v * pinv);
      if (w != 0) nrow[j] = w;
    }
    rows[r] = std::move(nrow);
  }
  res.echelon = SparseMatrix(F, nr, nc);
  res.echelon.entries = rows;
  // Kernel basis: one vector per free column, in increasing column order.
  std::vector<bool> is_pivot(nc, false);
  for (int c : res.pivot_cols) is_pivot[c] = true;
  for (int fc = 0; fc < nc; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Rat> v(nc, Rat(0));
    v[fc] = Rat(1);
    for (size_t k = 0; k < res.pivot_cols.size(); ++k) {
      int pc = res.pivot_cols[k];
      auto it = rows[k].find(fc);
      if (it != rows[k].end()) v[pc] = F.neg(it->second);
    }
    res.kernel_basis.push_back(std::move(v));
  }
  return res;
}

int rank(const SparseMatrix& m) { return rref(m).rank; }

std::vector<std::vector<Rat>> kernel_basis(const SparseMatrix& m) { return rref(m).kernel_basis; }

std::vector<int> image_column_basis(const SparseMatrix& m) { return rref(m).pivot_cols; }

std::optional<std::vector<Rat>> solve(const SparseMatrix& m, const std::vector<Rat>& b) {
  if ((int)b.size() != m.rows) throw std::invalid_argument("solve: rhs size mismatch");
  SparseMatrix bm(m.field, m.rows, 1);
  for (int i = 0; i < m.rows; ++i) bm.set(i, 0, b[i]);
  SparseMatrix aug = m.hcat(bm);
  RrefResult r = rref(aug);
  // Inconsistent iff the last column is a pivot column.
  if (!r.pivot_cols.empty() && r.pivot_cols.back() == m.cols) return std::nullopt;
  std::vector<Rat> x(m.cols, Rat(0));
  for (size_t k = 0; k < r.pivot_cols.size(); ++k) {
    int pc = r.pivot_cols[k];
    x[pc] = r.echelon.get((int)k, m.cols);
  }
  return x;
}

bool in_column_span(const SparseMatrix& m, const std::vector<Rat>& v) {
  return solve(m, v).has_value();
}

SparseMatrix columns_to_matrix(FieldSpec f, int dim, const std::vector<std::vector<Rat>>& cols) {
  SparseMatrix m(f, dim, (int)cols.size());
  for (int j = 0; j < (int)cols.size(); ++j) {
    if ((int)cols[j].size() != dim) throw std::invalid_argument("columns_to_matrix: bad column length");
    for (int i = 0; i < dim; ++i) m.set(i, j, cols[j][i]);
  }
  return m;
}

}  // namespace dgtk
