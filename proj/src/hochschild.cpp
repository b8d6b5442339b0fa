#include "dgtk/hochschild.hpp"

#include <sstream>
#include <stdexcept>

namespace dgtk {

namespace {

const Complex kZeroComplex{};

bool lc_zero(const LinComb& l) {
  for (auto& [i, c] : l)
    if (c != 0) return false;
  return true;
}

// Locate the (p,i),(q,j) tensor factors of basis element idx of
// tensor(a,b)^n, inverting the ordering used by tensor().
std::pair<std::pair<int, int>, std::pair<int, int>> tensor_split(const Complex& a,
                                                                 const Complex& b, int n,
                                                                 int idx) {
  for (auto& [p, la] : a.basis) {
    int db = b.dim(n - p);
    int block = (int)la.size() * db;
    if (idx < block) return {{p, idx / db}, {n - p, idx % db}};
    idx -= block;
  }
  throw std::out_of_range("tensor_split: index out of range");
}

}  // namespace

const Complex& Bimodule::at(int X, int Y) const {
  auto it = val.find({X, Y});
  return it == val.end() ? kZeroComplex : it->second;
}

LinComb Bimodule::left(int W, int X, int Y, int da, int ia, int dm, int im) const {
  auto it = lact.find({W, X, Y, da, ia, dm, im});
  return it == lact.end() ? LinComb{} : it->second;
}

LinComb Bimodule::right(int X, int Y, int Z, int dm, int im, int da, int ia) const {
  auto it = ract.find({X, Y, Z, dm, im, da, ia});
  return it == ract.end() ? LinComb{} : it->second;
}

Bimodule identity_bimodule(const DgCat& A) {
  Bimodule F;
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      if (!A.H(X, Y).empty()) F.val[{X, Y}] = A.H(X, Y);
  for (auto& [key, lc] : A.comp) {
    // comp[(X,Y,Z,da,ia,db,ib)]: a*b is simultaneously the left action of a
    // on b in F(X,Z) = A(X,Z) and the right action of b on a.
    if (lc_zero(lc)) continue;
    F.lact[key] = lc;
    F.ract[key] = lc;
  }
  return F;
}

Bimodule product_bimodule(const DgCat& A, const OneSidedModule& R, const OneSidedModule& L) {
  if (R.right || !L.right)
    throw std::invalid_argument("product_bimodule: need a left module R and a right module L");
  Bimodule F;
  F.slotR = R;
  F.slotL = L;
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y) {
      Complex t = tensor(R.at(X), L.at(Y));
      if (!t.empty()) F.val[{X, Y}] = t;
    }
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y) {
      const Complex& fxy = F.at(X, Y);
      for (auto& [dm, lm] : fxy.basis)
        for (int im = 0; im < (int)lm.size(); ++im) {
          auto [r, l] = tensor_split(R.at(X), L.at(Y), dm, im);
          // left action through the first tensor factor, no sign
          for (int W = 0; W < nobj; ++W)
            for (auto& [da, la] : A.H(W, X).basis)
              for (int ia = 0; ia < (int)la.size(); ++ia) {
                LinComb ar = R.apply(A, W, X, da, ia, r.first, r.second);
                LinComb out;
                for (auto& [i2, c] : ar) {
                  if (c == 0) continue;
                  int t2 = tensor_index(R.at(W), L.at(Y), r.first + da, i2, l.first, l.second);
                  out[t2] = c;
                }
                if (!lc_zero(out)) F.lact[{W, X, Y, da, ia, dm, im}] = out;
              }
          // right action through the second tensor factor, no sign
          for (int Z = 0; Z < nobj; ++Z)
            for (auto& [da, la] : A.H(Y, Z).basis)
              for (int ia = 0; ia < (int)la.size(); ++ia) {
                LinComb lb = L.apply(A, Y, Z, da, ia, l.first, l.second);
                LinComb out;
                for (auto& [j2, c] : lb) {
                  if (c == 0) continue;
                  int t2 = tensor_index(R.at(X), L.at(Z), r.first, r.second, l.first + da, j2);
                  out[t2] = c;
                }
                if (!lc_zero(out)) F.ract[{X, Y, Z, dm, im, da, ia}] = out;
              }
        }
    }
  return F;
}

std::vector<int> StringElt::key() const {
  std::vector<int> k = tuple;
  for (auto& [d, i] : inner) {
    k.push_back(d);
    k.push_back(i);
  }
  k.push_back(coef.first);
  k.push_back(coef.second);
  return k;
}

std::pair<int, int> SimplicialLevels::find(int level, const StringElt& s) const {
  auto& idx = index[level];
  auto it = idx.find(s.key());
  return it == idx.end() ? std::pair<int, int>{0, -1} : it->second;
}

std::string SimplicialLevels::label(int level, const StringElt& s) const {
  (void)level;
  std::ostringstream os;
  for (size_t k = 0; k < s.tuple.size(); ++k) {
    if (k) os << '>';
    os << A->objects[s.tuple[k]];
  }
  os << '|';
  for (size_t k = 0; k < s.inner.size(); ++k) {
    if (k) os << ',';
    os << A->label(s.tuple[k], s.tuple[k + 1], s.inner[k].first, s.inner[k].second);
  }
  os << '|';
  int Xn = s.tuple.back(), X0 = s.tuple.front();
  os << F.at(Xn, X0).basis.at(s.coef.first)[s.coef.second];
  return os.str();
}

namespace {

std::vector<std::pair<int, int>> allowed_inner(const DgCat& A, bool relative, bool normalized,
                                               int X, int Y) {
  std::vector<std::pair<int, int>> out;
  for (auto& [d, labels] : A.H(X, Y).basis)
    for (int i = 0; i < (int)labels.size(); ++i) {
      if (relative && d <= 0) continue;
      if (normalized && X == Y && d == 0 && i == A.id_idx.at(X)) continue;
      out.push_back({d, i});
    }
  return out;
}

// The image of one basis string under a face map, with the fixed signs:
// the coefficient sits at the cyclic end, so the 0-th face carries the
// Koszul sign of moving a_1 past the remaining factors.
std::vector<std::pair<StringElt, Rat>> apply_face(const DgCat& A, const Bimodule& F, int i,
                                                  const StringElt& s) {
  int n = (int)s.inner.size();
  std::vector<std::pair<StringElt, Rat>> out;
  int Xn = s.tuple.back(), X0 = s.tuple.front();
  if (i == 0) {
    int X1 = s.tuple[1];
    auto [d1, i1] = s.inner[0];
    long rest = s.coef.first;
    for (int k = 1; k < n; ++k) rest += s.inner[k].first;
    Rat sign((d1 % 2 != 0 && rest % 2 != 0) ? -1 : 1);
    LinComb fa = F.right(Xn, X0, X1, s.coef.first, s.coef.second, d1, i1);
    for (auto& [fi, c] : fa) {
      if (c == 0) continue;
      StringElt t;
      t.tuple.assign(s.tuple.begin() + 1, s.tuple.end());
      t.inner.assign(s.inner.begin() + 1, s.inner.end());
      t.coef = {s.coef.first + d1, fi};
      out.push_back({t, sign * c});
    }
  } else if (i == n) {
    int Xn1 = s.tuple[n - 1];
    auto [dn, in] = s.inner[n - 1];
    LinComb af = F.left(Xn1, Xn, X0, dn, in, s.coef.first, s.coef.second);
    for (auto& [fi, c] : af) {
      if (c == 0) continue;
      StringElt t;
      t.tuple.assign(s.tuple.begin(), s.tuple.end() - 1);
      t.inner.assign(s.inner.begin(), s.inner.end() - 1);
      t.coef = {s.coef.first + dn, fi};
      out.push_back({t, c});
    }
  } else {
    auto [da, ia] = s.inner[i - 1];
    auto [db, ib] = s.inner[i];
    LinComb ab = A.mul(s.tuple[i - 1], s.tuple[i], s.tuple[i + 1], da, ia, db, ib);
    for (auto& [ci, c] : ab) {
      if (c == 0) continue;
      StringElt t;
      t.tuple = s.tuple;
      t.tuple.erase(t.tuple.begin() + i);
      t.inner = s.inner;
      t.inner.erase(t.inner.begin() + i - 1);
      t.inner[i - 1] = {da + db, ci};
      t.coef = s.coef;
      out.push_back({t, c});
    }
  }
  return out;
}

SimplicialLevels build_levels(const DgCat& A, const Bimodule& F, int L, bool relative,
                              bool normalized) {
  if (relative) {
    // the degree-zero part must be split: identities are the only degree-0
    // hom elements
    int nobj = (int)A.objects.size();
    for (int X = 0; X < nobj; ++X)
      for (int Y = 0; Y < nobj; ++Y) {
        int d0 = A.H(X, Y).dim(0);
        int want = (X == Y) ? 1 : 0;
        if (d0 != want)
          throw std::invalid_argument("relative Hochschild: degree-zero part is not split at (" +
                                      A.objects[X] + "," + A.objects[Y] + ")");
      }
  }
  SimplicialLevels lv;
  lv.A = &A;
  lv.F = F;
  lv.field = A.field;
  lv.L = L;
  lv.relative = relative;
  lv.normalized = normalized;
  lv.levels.assign(L + 1, Complex(A.field));
  lv.strings.resize(L + 1);
  lv.index.resize(L + 1);
  lv.faces.resize(L + 1);
  if (!relative && !normalized) lv.degens.resize(L);
  int nobj = (int)A.objects.size();

  // enumerate strings level by level, lexicographically in
  // (tuple, factor choices left to right, coefficient)
  for (int n = 0; n <= L; ++n) {
    std::vector<int> tuple(n + 1, 0);
    while (true) {
      // factor choice lists for this tuple
      bool ok = true;
      std::vector<std::vector<std::pair<int, int>>> choice(n);
      for (int k = 0; k < n && ok; ++k) {
        choice[k] = allowed_inner(A, relative, normalized, tuple[k], tuple[k + 1]);
        if (choice[k].empty()) ok = false;
      }
      const Complex& fc = F.at(tuple[n], tuple[0]);
      if (ok && !fc.empty()) {
        std::vector<int> pos(n, 0);
        while (true) {
          StringElt s;
          s.tuple = tuple;
          for (int k = 0; k < n; ++k) s.inner.push_back(choice[k][pos[k]]);
          for (auto& [df, labels] : fc.basis)
            for (int fi = 0; fi < (int)labels.size(); ++fi) {
              s.coef = {df, fi};
              int deg = df;
              for (auto& [d, i] : s.inner) deg += d;
              int at = (int)lv.strings[n][deg].size();
              lv.strings[n][deg].push_back(s);
              lv.index[n][s.key()] = {deg, at};
            }
          // odometer over the inner factors, last position fastest
          int k = n - 1;
          while (k >= 0 && ++pos[k] == (int)choice[k].size()) pos[k--] = 0;
          if (k < 0) break;
        }
      }
      int k = n;
      while (k >= 0 && ++tuple[k] == nobj) tuple[k--] = 0;
      if (k < 0) break;
    }
    for (auto& [deg, ss] : lv.strings[n]) {
      std::vector<std::string> labels;
      for (auto& s : ss) labels.push_back(lv.label(n, s));
      lv.levels[n].basis[deg] = labels;
    }
  }

  bool drop_missing = relative || normalized;
  auto target = [&](int level, const StringElt& s) -> int {
    auto [d, i] = lv.find(level, s);
    (void)d;
    if (i < 0 && !drop_missing) throw std::logic_error("hochschild: face image not in basis");
    return i;
  };

  // Koszul differential of each level
  for (int n = 0; n <= L; ++n) {
    for (auto& [deg, ss] : lv.strings[n]) {
      int rows = lv.levels[n].dim(deg + 1);
      SparseMatrix m(A.field, rows, (int)ss.size());
      for (int col = 0; col < (int)ss.size(); ++col) {
        const StringElt& s = ss[col];
        long before = 0;
        for (int k = 0; k < n; ++k) {
          Rat sign(before % 2 != 0 ? -1 : 1);
          LinComb da = A.dmul(s.tuple[k], s.tuple[k + 1], s.inner[k].first, s.inner[k].second);
          for (auto& [i2, c] : da) {
            if (c == 0) continue;
            StringElt t = s;
            t.inner[k] = {s.inner[k].first + 1, i2};
            int row = target(n, t);
            if (row >= 0) m.add_to(row, col, sign * c);
          }
          before += s.inner[k].first;
        }
        Rat sign(before % 2 != 0 ? -1 : 1);
        const Complex& fc = F.at(s.tuple[n], s.tuple[0]);
        SparseMatrix dd = fc.diff(s.coef.first);
        for (int r = 0; r < dd.rows; ++r) {
          Rat c = dd.get(r, s.coef.second);
          if (c == 0) continue;
          StringElt t = s;
          t.coef = {s.coef.first + 1, r};
          int row = target(n, t);
          if (row >= 0) m.add_to(row, col, sign * c);
        }
      }
      if (!m.is_zero()) lv.levels[n].set_diff(deg, m);
    }
  }

  // faces
  for (int n = 1; n <= L; ++n) {
    lv.faces[n].resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      ChainMap f;
      for (auto& [deg, ss] : lv.strings[n]) {
        SparseMatrix m(A.field, lv.levels[n - 1].dim(deg), (int)ss.size());
        for (int col = 0; col < (int)ss.size(); ++col)
          for (auto& [t, c] : apply_face(A, F, i, ss[col])) {
            int row = target(n - 1, t);
            if (row >= 0) m.add_to(row, col, c);
          }
        f.blocks[deg] = m;
      }
      lv.faces[n][i] = f;
    }
  }

  // degeneracies (plain variant only)
  for (int n = 0; n + 1 <= L && !lv.degens.empty(); ++n) {
    lv.degens[n].resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      ChainMap f;
      for (auto& [deg, ss] : lv.strings[n]) {
        SparseMatrix m(A.field, lv.levels[n + 1].dim(deg), (int)ss.size());
        for (int col = 0; col < (int)ss.size(); ++col) {
          StringElt t = ss[col];
          t.tuple.insert(t.tuple.begin() + i + 1, t.tuple[i]);
          t.inner.insert(t.inner.begin() + i, {0, A.id_idx.at(t.tuple[i])});
          m.add_to(target(n + 1, t), col, Rat(1));
        }
        f.blocks[deg] = m;
      }
      lv.degens[n][i] = f;
    }
  }
  return lv;
}

}  // namespace

SimplicialLevels hochschild_levels(const DgCat& A, const Bimodule& F, int L) {
  return build_levels(A, F, L, false, false);
}

SimplicialLevels relative_hochschild_levels(const DgCat& A, const OneSidedModule& slotR,
                                            const OneSidedModule& slotL, int L) {
  return build_levels(A, product_bimodule(A, slotR, slotL), L, true, false);
}

SimplicialLevels normalize(const SimplicialLevels& lv) {
  if (lv.normalized) return lv;
  return build_levels(*lv.A, lv.F, lv.L, lv.relative, true);
}

namespace {

bool chain_maps_equal(const ChainMap& f, const ChainMap& g, const Complex& src,
                      const Complex& tgt) {
  if (f.degree != g.degree) return false;
  for (auto& [n, labels] : src.basis) {
    (void)labels;
    if (!(f.block(n, src, tgt) == g.block(n, src, tgt))) return false;
  }
  return true;
}

ChainMap scale_chain_map(const ChainMap& f, const Rat& c, const Complex& src, const Complex& tgt) {
  ChainMap out;
  out.degree = f.degree;
  for (auto& [n, labels] : src.basis) {
    (void)labels;
    out.blocks[n] = f.block(n, src, tgt).scale(c);
  }
  return out;
}

ChainMap add_chain_maps(const ChainMap& f, const ChainMap& g, const Complex& src,
                        const Complex& tgt) {
  ChainMap out;
  out.degree = f.degree;
  for (auto& [n, labels] : src.basis) {
    (void)labels;
    out.blocks[n] = f.block(n, src, tgt).add(g.block(n, src, tgt));
  }
  return out;
}

}  // namespace

std::vector<std::string> check_simplicial(const SimplicialLevels& lv) {
  std::vector<std::string> rep;
  auto note = [&](int n, const std::string& what) {
    rep.push_back("level " + std::to_string(n) + ": " + what);
  };
  for (int n = 0; n <= lv.L; ++n)
    for (auto& line : check_complex(lv.levels[n])) note(n, line);
  for (int n = 1; n <= lv.L; ++n)
    for (int i = 0; i <= n; ++i)
      if (!check_chain_map(lv.faces[n][i], lv.levels[n], lv.levels[n - 1]))
        note(n, "face " + std::to_string(i) + " is not a chain map");
  for (int n = 0; n < (int)lv.degens.size(); ++n)
    for (int i = 0; i < (int)lv.degens[n].size(); ++i)
      if (!check_chain_map(lv.degens[n][i], lv.levels[n], lv.levels[n + 1]))
        note(n, "degeneracy " + std::to_string(i) + " is not a chain map");

  // d_i d_j = d_{j-1} d_i for i < j
  for (int n = 2; n <= lv.L; ++n)
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i < j; ++i) {
        ChainMap lhs = compose_chain_maps(lv.faces[n - 1][i], lv.faces[n][j], lv.levels[n],
                                          lv.levels[n - 1], lv.levels[n - 2]);
        ChainMap rhs = compose_chain_maps(lv.faces[n - 1][j - 1], lv.faces[n][i], lv.levels[n],
                                          lv.levels[n - 1], lv.levels[n - 2]);
        if (!chain_maps_equal(lhs, rhs, lv.levels[n], lv.levels[n - 2]))
          note(n, "simplicial identity d" + std::to_string(i) + " d" + std::to_string(j) +
                      " fails");
      }
  // face/degeneracy and degeneracy/degeneracy identities
  for (int n = 0; n < (int)lv.degens.size(); ++n) {
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n + 1; ++i) {
        ChainMap lhs = compose_chain_maps(lv.faces[n + 1][i], lv.degens[n][j], lv.levels[n],
                                          lv.levels[n + 1], lv.levels[n]);
        ChainMap rhs;
        if (i == j || i == j + 1) {
          rhs = identity_chain_map(lv.levels[n]);
        } else if (i < j) {
          rhs = compose_chain_maps(lv.degens[n - 1][j - 1], lv.faces[n][i], lv.levels[n],
                                   lv.levels[n - 1], lv.levels[n]);
        } else {
          rhs = compose_chain_maps(lv.degens[n - 1][j], lv.faces[n][i - 1], lv.levels[n],
                                   lv.levels[n - 1], lv.levels[n]);
        }
        if (!chain_maps_equal(lhs, rhs, lv.levels[n], lv.levels[n]))
          note(n, "identity d" + std::to_string(i) + " s" + std::to_string(j) + " fails");
      }
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n && n + 1 < (int)lv.degens.size(); ++j) {
        ChainMap lhs = compose_chain_maps(lv.degens[n + 1][i], lv.degens[n][j], lv.levels[n],
                                          lv.levels[n + 1], lv.levels[n + 2]);
        ChainMap rhs = compose_chain_maps(lv.degens[n + 1][j + 1], lv.degens[n][i], lv.levels[n],
                                          lv.levels[n + 1], lv.levels[n + 2]);
        if (!chain_maps_equal(lhs, rhs, lv.levels[n], lv.levels[n + 2]))
          note(n, "identity s" + std::to_string(i) + " s" + std::to_string(j) + " fails");
      }
  }
  return rep;
}

namespace {

ChainMap face_sum(const SimplicialLevels& lv, int n) {
  ChainMap out;
  for (auto& [deg, labels] : lv.levels[n].basis) {
    (void)labels;
    SparseMatrix m(lv.field, lv.levels[n - 1].dim(deg), lv.levels[n].dim(deg));
    for (int i = 0; i <= n; ++i) {
      SparseMatrix b = lv.faces[n][i].block(deg, lv.levels[n], lv.levels[n - 1]);
      m = m.add(i % 2 ? b.neg() : b);
    }
    out.blocks[deg] = m;
  }
  return out;
}

}  // namespace

Bicomplex to_bicomplex(const SimplicialLevels& lv) {
  Bicomplex b;
  b.field = lv.field;
  b.levels = lv.levels;
  b.chain_d.resize(lv.L + 1);
  for (int n = 1; n <= lv.L; ++n) b.chain_d[n] = face_sum(lv, n);

  const DgCat& A = *lv.A;
  int nobj = (int)A.objects.size();
  // inner-degree range over the factors admitted at every level, and the
  // coefficient range; together they bound the support of all levels,
  // truncated or not
  bool any_inner = false;
  long gLo = 0, gHi = 0;
  std::vector<std::vector<bool>> edge(nobj, std::vector<bool>(nobj, false));
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (auto& [d, i] : allowed_inner(A, lv.relative, lv.normalized, X, Y)) {
        (void)i;
        edge[X][Y] = true;
        if (!any_inner) {
          gLo = gHi = d;
          any_inner = true;
        }
        gLo = std::min(gLo, (long)d);
        gHi = std::max(gHi, (long)d);
      }
  bool any_coef = false;
  long fLo = 0, fHi = 0;
  for (auto& [pair, c] : lv.F.val) {
    (void)pair;
    if (c.empty()) continue;
    if (!any_coef) {
      fLo = c.min_degree();
      fHi = c.max_degree();
      any_coef = true;
    }
    fLo = std::min(fLo, (long)c.min_degree());
    fHi = std::max(fHi, (long)c.max_degree());
  }
  b.bound = SupportBound{gLo, fLo, gHi, fHi};

  // levels beyond L are zero when no length-(L+1) path exists through the
  // admitted inner factors (or when there is no coefficient at all)
  std::vector<bool> frontier(nobj, true);
  for (int t = 1; t <= lv.L + 1; ++t) {
    std::vector<bool> next(nobj, false);
    for (int X = 0; X < nobj; ++X)
      if (frontier[X])
        for (int Y = 0; Y < nobj; ++Y)
          if (edge[X][Y]) next[Y] = true;
    frontier = next;
  }
  bool path = false;
  for (int Y = 0; Y < nobj; ++Y) path = path || frontier[Y];
  b.exact = !path || !any_coef;
  return b;
}

std::pair<Complex, TrustedWindow> hochschild_total(const SimplicialLevels& lv) {
  return total_complex(to_bicomplex(lv), lv.L);
}

std::vector<std::string> counit_contraction_check(const SimplicialLevels& lv, int W, int V) {
  std::vector<std::string> rep;
  const DgCat& A = *lv.A;
  if (!lv.F.slotR || !lv.F.slotL) {
    rep.push_back("coefficient bimodule has no outer-slot decomposition");
    return rep;
  }
  const OneSidedModule& R = *lv.F.slotR;  // A(−,V)
  const OneSidedModule& Lm = *lv.F.slotL;  // A(W,−)
  const Complex& T = A.H(W, V);
  int idW = A.id_idx.at(W);

  // counit: level 0 -> A(W,V), (r ⊗ l) -> ± l·r
  ChainMap eps;
  for (auto& [deg, ss] : lv.strings[0]) {
    SparseMatrix m(lv.field, T.dim(deg), (int)ss.size());
    for (int col = 0; col < (int)ss.size(); ++col) {
      int X0 = ss[col].tuple[0];
      auto [r, l] = tensor_split(R.at(X0), Lm.at(X0), ss[col].coef.first, ss[col].coef.second);
      Rat sign((r.first % 2 != 0 && l.first % 2 != 0) ? -1 : 1);
      for (auto& [i2, c] : A.mul(W, X0, V, l.first, l.second, r.first, r.second))
        if (c != 0) m.add_to(i2, col, sign * c);
    }
    eps.blocks[deg] = m;
  }
  if (!check_chain_map(eps, lv.levels[0], T)) rep.push_back("counit is not a chain map");

  // section: a -> string at the tuple (W) with coefficient a ⊗ id_W
  ChainMap sec;
  for (auto& [deg, labels] : T.basis) {
    SparseMatrix m(lv.field, lv.levels[0].dim(deg), (int)labels.size());
    for (int ia = 0; ia < (int)labels.size(); ++ia) {
      StringElt t;
      t.tuple = {W};
      t.coef = {deg, tensor_index(R.at(W), Lm.at(W), deg, ia, 0, idW)};
      auto [d2, row] = lv.find(0, t);
      (void)d2;
      if (row < 0) {
        rep.push_back("section target missing at degree " + std::to_string(deg));
        continue;
      }
      m.add_to(row, ia, Rat(1));
    }
    sec.blocks[deg] = m;
  }
  if (!check_chain_map(sec, T, lv.levels[0])) rep.push_back("section is not a chain map");
  {
    ChainMap es = compose_chain_maps(eps, sec, T, lv.levels[0], T);
    if (!chain_maps_equal(es, identity_chain_map(T), T, T))
      rep.push_back("counit ∘ section is not the identity");
  }

  // extra degeneracy h: pull the wrapped-around outer factor l back to the
  // front as a new inner factor and refill the slot with id_W
  std::vector<ChainMap> h(lv.L);
  for (int n = 0; n + 1 <= lv.L; ++n) {
    for (auto& [deg, ss] : lv.strings[n]) {
      SparseMatrix m(lv.field, lv.levels[n + 1].dim(deg), (int)ss.size());
      for (int col = 0; col < (int)ss.size(); ++col) {
        const StringElt& s = ss[col];
        int Xn = s.tuple.back(), X0 = s.tuple.front();
        auto [r, l] = tensor_split(R.at(Xn), Lm.at(X0), s.coef.first, s.coef.second);
        if (lv.relative && l.first == 0) continue;  // id component, degenerate
        StringElt t;
        t.tuple = s.tuple;
        t.tuple.insert(t.tuple.begin(), W);
        t.inner = s.inner;
        t.inner.insert(t.inner.begin(), l);
        t.coef = {r.first, tensor_index(R.at(Xn), Lm.at(W), r.first, r.second, 0, idW)};
        auto [d2, row] = lv.find(n + 1, t);
        (void)d2;
        if (row < 0) {
          rep.push_back("homotopy target missing at level " + std::to_string(n));
          continue;
        }
        long rest = r.first;
        for (auto& [di, ii] : s.inner) {
          (void)ii;
          rest += di;
        }
        m.add_to(row, col, Rat((l.first % 2 != 0 && rest % 2 != 0) ? -1 : 1));
      }
      h[n].blocks[deg] = m;
    }
    if (!check_chain_map(h[n], lv.levels[n], lv.levels[n + 1]))
      rep.push_back("homotopy is not a chain map at level " + std::to_string(n));
  }

  // face alternating sums; ch[n]: level n -> n-1
  std::vector<ChainMap> ch(lv.L + 1);
  for (int n = 1; n <= lv.L; ++n) ch[n] = face_sum(lv, n);

  // counit kills the image of the chain differential
  if (lv.L >= 1) {
    ChainMap z = compose_chain_maps(eps, ch[1], lv.levels[1], lv.levels[0], T);
    bool ok = true;
    for (auto& [deg, labels] : lv.levels[1].basis) {
      (void)labels;
      if (!z.block(deg, lv.levels[1], T).is_zero()) ok = false;
    }
    if (!ok) rep.push_back("counit does not annihilate the level-1 boundaries");
  }

  // homotopy identity ch∘h + h∘ch = id (levels >= 1), ch∘h = id − s∘ε (level 0)
  for (int n = 0; n + 1 <= lv.L; ++n) {
    ChainMap lhs = compose_chain_maps(ch[n + 1], h[n], lv.levels[n], lv.levels[n + 1],
                                      lv.levels[n]);
    if (n >= 1) {
      ChainMap back = compose_chain_maps(h[n - 1], ch[n], lv.levels[n], lv.levels[n - 1],
                                         lv.levels[n]);
      lhs = add_chain_maps(lhs, back, lv.levels[n], lv.levels[n]);
      if (!chain_maps_equal(lhs, identity_chain_map(lv.levels[n]), lv.levels[n], lv.levels[n]))
        rep.push_back("contraction identity fails at level " + std::to_string(n));
    } else {
      ChainMap se = compose_chain_maps(sec, eps, lv.levels[0], T, lv.levels[0]);
      ChainMap rhs = add_chain_maps(identity_chain_map(lv.levels[0]),
                                    scale_chain_map(se, Rat(-1), lv.levels[0], lv.levels[0]),
                                    lv.levels[0], lv.levels[0]);
      if (!chain_maps_equal(lhs, rhs, lv.levels[0], lv.levels[0]))
        rep.push_back("contraction identity fails at level 0");
    }
  }
  return rep;
}

}  // namespace dgtk
