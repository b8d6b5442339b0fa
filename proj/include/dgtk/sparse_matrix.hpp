#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dgtk/field.hpp"

namespace dgtk {

// Sparse exact matrix over a FieldSpec.  Rows are maps column -> nonzero
// entry; zero entries are never stored.  All arithmetic is exact.
struct SparseMatrix {
  FieldSpec field;
  int rows = 0;
  int cols = 0;
  std::vector<std::map<int, Rat>> entries;  // entries.size() == rows

  SparseMatrix() = default;
  SparseMatrix(FieldSpec f, int r, int c) : field(f), rows(r), cols(c), entries(r) {}

  static SparseMatrix identity(FieldSpec f, int n);
  static SparseMatrix zero(FieldSpec f, int r, int c) { return SparseMatrix(f, r, c); }

  Rat get(int r, int c) const;
  void set(int r, int c, const Rat& v);       // normalizes, drops zeros
  void add_to(int r, int c, const Rat& v);    // entry += v

  bool is_zero() const;
  SparseMatrix mul(const SparseMatrix& other) const;   // this * other
  SparseMatrix add(const SparseMatrix& other) const;
  SparseMatrix scale(const Rat& s) const;
  SparseMatrix neg() const { return scale(Rat(-1)); }
  SparseMatrix transpose() const;
  SparseMatrix hcat(const SparseMatrix& other) const;  // [this | other]
  SparseMatrix vcat(const SparseMatrix& other) const;  // [this ; other]
  SparseMatrix submatrix_cols(const std::vector<int>& keep) const;

  std::vector<Rat> apply(const std::vector<Rat>& v) const;  // matrix * vector

  bool operator==(const SparseMatrix& o) const;
};

// Result of reduced row echelon form.
struct RrefResult {
  SparseMatrix echelon;
  int rank = 0;
  std::vector<int> pivot_cols;        // increasing
  std::vector<std::vector<Rat>> kernel_basis;  // each of length cols, ordered by free column
};

// Exact reduced row echelon form.  Pivot choice: leftmost nonzero column,
// topmost remaining row.  Elimination is fraction-free; rows are rescaled to
// pivot 1 at the end.  Deterministic: identical input gives identical output.
RrefResult rref(const SparseMatrix& m);

int rank(const SparseMatrix& m);

// Basis of ker(m) as column vectors (deterministic order, see rref).
std::vector<std::vector<Rat>> kernel_basis(const SparseMatrix& m);

// Indices of a column subset spanning the image (the rref pivot columns).
std::vector<int> image_column_basis(const SparseMatrix& m);

// Solve m * x = b exactly; nullopt when inconsistent.  Returns the solution
// with all free variables zero.
std::optional<std::vector<Rat>> solve(const SparseMatrix& m, const std::vector<Rat>& b);

// Is v in the column span of m?
bool in_column_span(const SparseMatrix& m, const std::vector<Rat>& v);

// Pack column vectors into a matrix.
SparseMatrix columns_to_matrix(FieldSpec f, int dim, const std::vector<std::vector<Rat>>& cols);

}  // namespace dgtk
