#include "dgtk/dgcat.hpp"

#include <algorithm>
#include <stdexcept>

namespace dgtk {

namespace {

const Complex kZero{};

LinComb lc_add(const FieldSpec& F, const LinComb& a, const LinComb& b, const Rat& scale = Rat(1)) {
  LinComb out = a;
  for (auto& [i, v] : b) {
    Rat base = out.count(i) ? out[i] : Rat(0);
    Rat w = F.normalize(base + scale * v);
    if (w == 0)
      out.erase(i);
    else
      out[i] = w;
  }
  return out;
}

bool lc_zero(const LinComb& a) { return a.empty(); }

// d applied to a coefficient vector living in degree deg of c.
LinComb lc_diff(const Complex& c, int deg, const LinComb& v) {
  LinComb out;
  SparseMatrix d = c.diff(deg);
  for (auto& [j, coef] : v)
    for (int i = 0; i < d.rows; ++i) {
      Rat e = d.get(i, j);
      if (e != 0) {
        Rat base = out.count(i) ? out[i] : Rat(0);
        Rat w = c.field.normalize(base + coef * e);
        if (w == 0)
          out.erase(i);
        else
          out[i] = w;
      }
    }
  return out;
}

std::vector<Rat> lc_to_vec(const LinComb& v, int dim) {
  std::vector<Rat> out(dim, Rat(0));
  for (auto& [i, c] : v) out[i] = c;
  return out;
}

}  // namespace

const Complex& DgCat::H(int X, int Y) const {
  auto it = hom.find({X, Y});
  return it == hom.end() ? kZero : it->second;
}

LinComb DgCat::mul(int X, int Y, int Z, int da, int ia, int db, int ib) const {
  auto it = comp.find({X, Y, Z, da, ia, db, ib});
  return it == comp.end() ? LinComb{} : it->second;
}

LinComb DgCat::mul_lin(int X, int Y, int Z, int da, const LinComb& a, int db,
                       const LinComb& b) const {
  LinComb out;
  for (auto& [ia, ca] : a)
    for (auto& [ib, cb] : b) out = lc_add(field, out, mul(X, Y, Z, da, ia, db, ib), ca * cb);
  return out;
}

LinComb DgCat::dmul(int X, int Y, int deg, int idx) const {
  return lc_diff(H(X, Y), deg, LinComb{{idx, Rat(1)}});
}

std::string DgCat::label(int X, int Y, int deg, int idx) const {
  return H(X, Y).basis.at(deg)[idx];
}

ChainMap FibreFunctor::action(const DgCat& A, int X, int Y, int deg, int idx) const {
  auto it = act.find({X, Y, deg, idx});
  if (it != act.end()) return it->second;
  ChainMap zero;
  zero.degree = deg;
  return zero;
}

namespace {

// Graded-map helpers for functor validation: maps are (degree, blocks).
struct GMap {
  int degree = 0;
  std::map<int, SparseMatrix> blocks;
};

GMap gm_from_chain(const ChainMap& f) { return GMap{f.degree, f.blocks}; }

SparseMatrix gm_block(const GMap& f, int n, const Complex& src, const Complex& tgt) {
  auto it = f.blocks.find(n);
  if (it != f.blocks.end()) return it->second;
  return SparseMatrix(src.field, tgt.dim(n + f.degree), src.dim(n));
}

GMap gm_add(const GMap& a, const GMap& b, const Rat& s, const Complex& src, const Complex& tgt) {
  GMap out;
  out.degree = a.degree;
  for (auto& [n, labels] : src.basis)
    out.blocks[n] = gm_block(a, n, src, tgt).add(gm_block(b, n, src, tgt).scale(s));
  return out;
}

GMap gm_compose(const GMap& g, const GMap& f, const Complex& src, const Complex& mid,
                const Complex& tgt) {
  GMap out;
  out.degree = f.degree + g.degree;
  for (auto& [n, labels] : src.basis)
    out.blocks[n] = gm_block(g, n + f.degree, mid, tgt).mul(gm_block(f, n, src, mid));
  return out;
}

bool gm_equal(const GMap& a, const GMap& b, const Complex& src, const Complex& tgt) {
  if (a.degree != b.degree) return false;
  for (auto& [n, labels] : src.basis)
    if (!(gm_block(a, n, src, tgt) == gm_block(b, n, src, tgt))) return false;
  return true;
}

GMap gm_diff(const Complex& c) {  // the differential of c as a degree-1 graded map
  GMap out;
  out.degree = 1;
  for (auto& [n, labels] : c.basis) out.blocks[n] = c.diff(n);
  return out;
}

}  // namespace

std::vector<std::string> validate_category(const DgCat& A) {
  std::vector<std::string> report;
  int nobj = (int)A.objects.size();
  const FieldSpec& F = A.field;

  for (auto& [pair, h] : A.hom)
    for (auto& line : check_complex(h))
      report.push_back("hom(" + A.objects[pair.first] + "," + A.objects[pair.second] + "): " + line);

  // identities
  for (int X = 0; X < nobj; ++X) {
    auto it = A.id_idx.find(X);
    if (it == A.id_idx.end()) {
      report.push_back("missing identity for object " + A.objects[X]);
      continue;
    }
    int id = it->second;
    if (A.hom_dim(X, X, 0) <= id) {
      report.push_back("identity index out of range for object " + A.objects[X]);
      continue;
    }
    if (!lc_zero(A.dmul(X, X, 0, id)))
      report.push_back("d(id) != 0 for object " + A.objects[X]);
    // two-sided unit on every basis element
    for (int Z = 0; Z < nobj; ++Z) {
      for (auto& [deg, labels] : A.H(X, Z).basis)
        for (int i = 0; i < (int)labels.size(); ++i) {
          LinComb got = A.mul(X, X, Z, 0, id, deg, i);
          if (got != LinComb{{i, Rat(1)}})
            report.push_back("id_" + A.objects[X] + " * " + labels[i] + " != " + labels[i]);
        }
      for (auto& [deg, labels] : A.H(Z, X).basis)
        for (int i = 0; i < (int)labels.size(); ++i) {
          LinComb got = A.mul(Z, X, X, deg, i, 0, id);
          if (got != LinComb{{i, Rat(1)}})
            report.push_back(labels[i] + " * id_" + A.objects[X] + " != " + labels[i]);
        }
    }
  }

  // associativity and Leibniz on all basis pairs/triples
  for (int X = 0; X < nobj && report.size() < 50; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (int Z = 0; Z < nobj; ++Z) {
        for (auto& [da, la] : A.H(X, Y).basis)
          for (int ia = 0; ia < (int)la.size(); ++ia)
            for (auto& [db, lb] : A.H(Y, Z).basis)
              for (int ib = 0; ib < (int)lb.size(); ++ib) {
                // Leibniz: d(ab) = (da)b + (-1)^{|a|} a(db)
                LinComb ab = A.mul(X, Y, Z, da, ia, db, ib);
                LinComb lhs = lc_diff(A.H(X, Z), da + db, ab);
                LinComb rhs = A.mul_lin(X, Y, Z, da + 1, A.dmul(X, Y, da, ia), db,
                                        LinComb{{ib, Rat(1)}});
                Rat s(da % 2 == 0 ? 1 : -1);
                rhs = lc_add(F, rhs,
                             A.mul_lin(X, Y, Z, da, LinComb{{ia, Rat(1)}}, db + 1,
                                       A.dmul(Y, Z, db, ib)),
                             s);
                if (lhs != rhs)
                  report.push_back("derivation failure at " + la[ia] + " * " + lb[ib]);
                // associativity against every third factor
                for (int W = 0; W < nobj; ++W)
                  for (auto& [dc, lcv] : A.H(Z, W).basis)
                    for (int ic = 0; ic < (int)lcv.size(); ++ic) {
                      LinComb l = A.mul_lin(X, Z, W, da + db, ab, dc, LinComb{{ic, Rat(1)}});
                      LinComb r = A.mul_lin(X, Y, W, da, LinComb{{ia, Rat(1)}}, db + dc,
                                            A.mul(Y, Z, W, db, ib, dc, ic));
                      if (l != r)
                        report.push_back("associativity failure at " + la[ia] + " * " + lb[ib] +
                                         " * " + lcv[ic]);
                    }
              }
      }
  return report;
}

std::vector<std::string> validate_functor(const DgCat& A, const FibreFunctor& w) {
  std::vector<std::string> report;
  int nobj = (int)A.objects.size();
  if ((int)w.val.size() != nobj) return {"fibre functor object count mismatch"};
  for (int X = 0; X < nobj; ++X)
    for (auto& line : check_complex(w.val[X]))
      report.push_back("omega(" + A.objects[X] + "): " + line);

  // identity acts as identity
  for (int X = 0; X < nobj; ++X) {
    GMap a = gm_from_chain(w.action(A, X, X, 0, A.id_idx.at(X)));
    GMap idm = gm_from_chain(identity_chain_map(w.val[X]));
    if (!gm_equal(a, idm, w.val[X], w.val[X]))
      report.push_back("omega(id_" + A.objects[X] + ") is not the identity");
  }

  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (auto& [da, la] : A.H(X, Y).basis)
        for (int ia = 0; ia < (int)la.size(); ++ia) {
          GMap wa = gm_from_chain(w.action(A, X, Y, da, ia));
          // omega(da) = d∘omega(a) − (−1)^{|a|} omega(a)∘d
          GMap lhs;
          lhs.degree = da + 1;
          for (auto& [i, c] : A.dmul(X, Y, da, ia))
            lhs = gm_add(lhs, gm_from_chain(w.action(A, X, Y, da + 1, i)), c, w.val[Y], w.val[X]);
          GMap r1 = gm_compose(gm_diff(w.val[X]), wa, w.val[Y], w.val[X], w.val[X]);
          GMap r2 = gm_compose(wa, gm_diff(w.val[Y]), w.val[Y], w.val[Y], w.val[X]);
          GMap rhs = gm_add(r1, r2, Rat(da % 2 == 0 ? -1 : 1), w.val[Y], w.val[X]);
          if (!gm_equal(lhs, rhs, w.val[Y], w.val[X]))
            report.push_back("omega fails the Leibniz rule at " + la[ia]);
          // functoriality against every composable b
          for (int Z = 0; Z < nobj; ++Z)
            for (auto& [db, lb] : A.H(Y, Z).basis)
              for (int ib = 0; ib < (int)lb.size(); ++ib) {
                GMap wb = gm_from_chain(w.action(A, Y, Z, db, ib));
                GMap comp = gm_compose(wa, wb, w.val[Z], w.val[Y], w.val[X]);
                GMap wab;
                wab.degree = da + db;
                for (auto& [i, c] : A.mul(X, Y, Z, da, ia, db, ib))
                  wab = gm_add(wab, gm_from_chain(w.action(A, X, Z, da + db, i)), c, w.val[Z],
                               w.val[X]);
                if (!gm_equal(comp, wab, w.val[Z], w.val[X]))
                  report.push_back("omega(" + la[ia] + " * " + lb[ib] +
                                   ") != omega(a)∘omega(b)");
              }
        }
  return report;
}

std::vector<std::string> validate_monoidal(const DgCat& A, const MonoidalData& m) {
  std::vector<std::string> report;
  int nobj = (int)A.objects.size();
  const FieldSpec& F = A.field;
  if ((int)m.obj_tensor.size() != nobj)
    return {"object tensor table has the wrong size"};
  for (int X = 0; X < nobj; ++X) {
    if (m.obj_tensor[m.unit][X] != X || m.obj_tensor[X][m.unit] != X)
      report.push_back("unit object is not strict for " + A.objects[X]);
  }
  auto box = [&](int X, int Y) { return m.obj_tensor[X][Y]; };
  auto mor = [&](int X, int Y, int da, int ia, int X2, int Y2, int db, int ib) -> LinComb {
    auto it = m.mor.find({X, Y, da, ia, X2, Y2, db, ib});
    return it == m.mor.end() ? LinComb{} : it->second;
  };
  auto mor_lin = [&](int X, int Y, int da, const LinComb& a, int X2, int Y2, int db,
                     const LinComb& b) {
    LinComb out;
    for (auto& [ia, ca] : a)
      for (auto& [ib, cb] : b) out = lc_add(F, out, mor(X, Y, da, ia, X2, Y2, db, ib), ca * cb);
    return out;
  };

  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (int X2 = 0; X2 < nobj; ++X2)
        for (int Y2 = 0; Y2 < nobj; ++Y2) {
          // id ⊠ id = id
          if (X == Y && X2 == Y2) {
            LinComb got = mor(X, X, 0, A.id_idx.at(X), X2, X2, 0, A.id_idx.at(X2));
            if (got != LinComb{{A.id_idx.at(box(X, X2)), Rat(1)}})
              report.push_back("id⊠id != id at (" + A.objects[X] + "," + A.objects[X2] + ")");
          }
          for (auto& [da, la] : A.H(X, Y).basis)
            for (int ia = 0; ia < (int)la.size(); ++ia)
              for (auto& [db, lb] : A.H(X2, Y2).basis)
                for (int ib = 0; ib < (int)lb.size(); ++ib) {
                  // derivation: d(a⊠b) = da⊠b + (−1)^{|a|} a⊠db
                  LinComb lhs = lc_diff(A.H(box(X, X2), box(Y, Y2)), da + db,
                                        mor(X, Y, da, ia, X2, Y2, db, ib));
                  LinComb rhs = mor_lin(X, Y, da + 1, A.dmul(X, Y, da, ia), X2, Y2, db,
                                        LinComb{{ib, Rat(1)}});
                  rhs = lc_add(F, rhs,
                               mor_lin(X, Y, da, LinComb{{ia, Rat(1)}}, X2, Y2, db + 1,
                                       A.dmul(X2, Y2, db, ib)),
                               Rat(da % 2 == 0 ? 1 : -1));
                  if (lhs != rhs)
                    report.push_back("⊠ derivation failure at " + la[ia] + "⊠" + lb[ib]);
                  // symmetry
                  if (m.symmetric) {
                    if (box(X, X2) != box(X2, X) || box(Y, Y2) != box(Y2, Y))
                      report.push_back("object symmetry is not strict");
                    LinComb sw = mor(X2, Y2, db, ib, X, Y, da, ia);
                    Rat s((da * db) % 2 == 0 ? 1 : -1);
                    LinComb want = mor(X, Y, da, ia, X2, Y2, db, ib);
                    LinComb scaled;
                    for (auto& [i, c] : sw) scaled[i] = F.normalize(c * s);
                    if (want != scaled)
                      report.push_back("symmetry failure at " + la[ia] + "⊠" + lb[ib]);
                  }
                  // interchange: mul(a⊠b, c⊠d) = (−1)^{|b||c|} mul(a,c)⊠mul(b,d)
                  for (int Z = 0; Z < nobj; ++Z)
                    for (int Z2 = 0; Z2 < nobj; ++Z2)
                      for (auto& [dc, lcv] : A.H(Y, Z).basis)
                        for (int ic = 0; ic < (int)lcv.size(); ++ic)
                          for (auto& [dd, ld] : A.H(Y2, Z2).basis)
                            for (int idd = 0; idd < (int)ld.size(); ++idd) {
                              LinComb l = A.mul_lin(
                                  box(X, X2), box(Y, Y2), box(Z, Z2), da + db,
                                  mor(X, Y, da, ia, X2, Y2, db, ib), dc + dd,
                                  mor(Y, Z, dc, ic, Y2, Z2, dd, idd));
                              LinComb r = mor_lin(X, Z, da + dc,
                                                  A.mul(X, Y, Z, da, ia, dc, ic), X2, Z2,
                                                  db + dd, A.mul(X2, Y2, Z2, db, ib, dd, idd));
                              Rat s((db * dc) % 2 == 0 ? 1 : -1);
                              LinComb rs;
                              for (auto& [i, c] : r) rs[i] = F.normalize(c * s);
                              if (l != rs)
                                report.push_back("interchange failure at " + la[ia] + "⊠" +
                                                 lb[ib] + " then " + lcv[ic] + "⊠" + ld[idd]);
                            }
                }
        }
  return report;
}

namespace {
// f⊗g on tensor complexes with the Koszul sign (−1)^{|g||x|} on x⊗y.
GMap gm_tensor(const GMap& f, const GMap& g, const Complex& sa, const Complex& sb,
               const Complex& ta, const Complex& tb) {
  Complex src = tensor(sa, sb), tgt = tensor(ta, tb);
  GMap out;
  out.degree = f.degree + g.degree;
  for (auto& [n, labels] : src.basis) {
    SparseMatrix m(sa.field, tgt.dim(n + out.degree), (int)labels.size());
    for (auto& [p, la] : sa.basis) {
      int q = n - p;
      if (sb.dim(q) == 0) continue;
      SparseMatrix fb = gm_block(f, p, sa, ta);
      SparseMatrix gb = gm_block(g, q, sb, tb);
      Rat sgn((g.degree * p) % 2 == 0 ? 1 : -1);
      for (int i = 0; i < sa.dim(p); ++i)
        for (int j = 0; j < sb.dim(q); ++j) {
          int col = tensor_index(sa, sb, p, i, q, j);
          for (int r = 0; r < fb.rows; ++r) {
            Rat fv = fb.get(r, i);
            if (fv == 0) continue;
            for (int s = 0; s < gb.rows; ++s) {
              Rat gv = gb.get(s, j);
              if (gv == 0) continue;
              m.add_to(tensor_index(ta, tb, p + f.degree, r, q + g.degree, s), col,
                       sgn * fv * gv);
            }
          }
        }
    }
    out.blocks[n] = std::move(m);
  }
  return out;
}
}  // namespace

std::vector<std::string> validate_monoidal_fibre(const DgCat& A, const FibreFunctor& w,
                                                 const MonoidalData& m,
                                                 const MonoidalFibreData& mw) {
  std::vector<std::string> report;
  int nobj = (int)A.objects.size();
  auto box = [&](int X, int Y) { return m.obj_tensor[X][Y]; };
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y) {
      auto it = mw.iso.find({X, Y});
      if (it == mw.iso.end()) {
        report.push_back("missing strong-monoidality iso at (" + A.objects[X] + "," +
                         A.objects[Y] + ")");
        continue;
      }
      Complex src = tensor(w.val[X], w.val[Y]);
      const Complex& tgt = w.val[box(X, Y)];
      if (!check_chain_map(it->second, src, tgt)) {
        report.push_back("strong-monoidality iso is not a chain map at (" + A.objects[X] + "," +
                         A.objects[Y] + ")");
        continue;
      }
      for (auto& [n, labels] : src.basis) {
        SparseMatrix blk = it->second.block(n, src, tgt);
        if (rank(blk) != (int)labels.size() || tgt.dim(n) != (int)labels.size()) {
          report.push_back("strong-monoidality map is not invertible at (" + A.objects[X] + "," +
                           A.objects[Y] + ")");
          break;
        }
      }
    }
  if (!report.empty()) return report;

  // naturality squares: iso∘(ω(a)⊗ω(b)) = ω(a⊠b)∘iso
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (int X2 = 0; X2 < nobj; ++X2)
        for (int Y2 = 0; Y2 < nobj; ++Y2)
          for (auto& [da, la] : A.H(X, Y).basis)
            for (int ia = 0; ia < (int)la.size(); ++ia)
              for (auto& [db, lb] : A.H(X2, Y2).basis)
                for (int ib = 0; ib < (int)lb.size(); ++ib) {
                  Complex srcT = tensor(w.val[Y], w.val[Y2]);
                  Complex midT = tensor(w.val[X], w.val[X2]);
                  GMap wa = gm_from_chain(w.action(A, X, Y, da, ia));
                  GMap wb = gm_from_chain(w.action(A, X2, Y2, db, ib));
                  GMap tens = gm_tensor(wa, wb, w.val[Y], w.val[Y2], w.val[X], w.val[X2]);
                  GMap left = gm_compose(gm_from_chain(mw.iso.at({X, X2})), tens, srcT, midT,
                                         w.val[m.obj_tensor[X][X2]]);
                  GMap wab;
                  wab.degree = da + db;
                  auto itm = m.mor.find({X, Y, da, ia, X2, Y2, db, ib});
                  if (itm != m.mor.end())
                    for (auto& [i, c] : itm->second)
                      wab = gm_add(wab,
                                   gm_from_chain(w.action(A, m.obj_tensor[X][X2],
                                                          m.obj_tensor[Y][Y2], da + db, i)),
                                   c, w.val[m.obj_tensor[Y][Y2]], w.val[m.obj_tensor[X][X2]]);
                  GMap right = gm_compose(wab, gm_from_chain(mw.iso.at({Y, Y2})), srcT,
                                          w.val[m.obj_tensor[Y][Y2]],
                                          w.val[m.obj_tensor[X][X2]]);
                  if (!gm_equal(left, right, srcT, w.val[m.obj_tensor[X][X2]]))
                    report.push_back("strong-monoidality square fails at " + la[ia] + "⊠" +
                                     lb[ib]);
                }
  return report;
}

std::vector<std::string> validate_nilpotence(const DgCat& A) {
  if (!A.nilpotence) return {};
  long N = *A.nilpotence;
  // (object pair, degree) -> nonzero composites of positive-degree generators
  struct Word {
    int X, Y, deg;
    LinComb v;
  };
  std::vector<Word> cur;
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (auto& [deg, labels] : A.H(X, Y).basis)
        if (deg > 0)
          for (int i = 0; i < (int)labels.size(); ++i)
            cur.push_back({X, Y, deg, LinComb{{i, Rat(1)}}});
  std::vector<Word> gens = cur;
  for (long len = 2; len <= N + 1; ++len) {
    std::vector<Word> next;
    for (auto& wrd : cur)
      for (auto& g : gens) {
        if (wrd.Y != g.X) continue;
        LinComb p = A.mul_lin(wrd.X, wrd.Y, g.Y, wrd.deg, wrd.v, g.deg, g.v);
        if (!lc_zero(p)) next.push_back({wrd.X, g.Y, wrd.deg + g.deg, p});
      }
    cur = std::move(next);
    if (len == N + 1 && !cur.empty())
      return {"nilpotence certificate violated: a length-" + std::to_string(N + 1) +
              " composite of positive-degree generators is nonzero"};
    if (cur.empty()) break;
  }
  return {};
}

const Complex& OneSidedModule::at(int X) const {
  auto it = val.find(X);
  return it == val.end() ? kZero : it->second;
}

LinComb OneSidedModule::apply(const DgCat& A, int X, int Y, int da, int ia, int dm,
                              int im) const {
  std::array<int, 6> key = right ? std::array<int, 6>{X, Y, dm, im, da, ia}
                                 : std::array<int, 6>{X, Y, da, ia, dm, im};
  auto it = act.find(key);
  (void)A;
  return it == act.end() ? LinComb{} : it->second;
}

OneSidedModule module_hom_from(const DgCat& A, int W) {
  OneSidedModule M;
  M.right = true;
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X) M.val[X] = A.H(W, X);
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (auto& [dm, lm] : A.H(W, X).basis)
        for (int im = 0; im < (int)lm.size(); ++im)
          for (auto& [da, la] : A.H(X, Y).basis)
            for (int ia = 0; ia < (int)la.size(); ++ia) {
              LinComb p = A.mul(W, X, Y, dm, im, da, ia);
              if (!lc_zero(p)) M.act[{X, Y, dm, im, da, ia}] = p;
            }
  return M;
}

OneSidedModule module_hom_to(const DgCat& A, int V) {
  OneSidedModule M;
  M.right = false;
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X) M.val[X] = A.H(X, V);
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (auto& [da, la] : A.H(X, Y).basis)
        for (int ia = 0; ia < (int)la.size(); ++ia)
          for (auto& [dm, lm] : A.H(Y, V).basis)
            for (int im = 0; im < (int)lm.size(); ++im) {
              LinComb p = A.mul(X, Y, V, da, ia, dm, im);
              if (!lc_zero(p)) M.act[{X, Y, da, ia, dm, im}] = p;
            }
  return M;
}

OneSidedModule module_omega(const DgCat& A, const FibreFunctor& w) {
  OneSidedModule M;
  M.right = false;
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X) M.val[X] = w.val[X];
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (auto& [da, la] : A.H(X, Y).basis)
        for (int ia = 0; ia < (int)la.size(); ++ia) {
          ChainMap f = w.action(A, X, Y, da, ia);
          for (auto& [dm, blk] : f.blocks)
            for (int im = 0; im < blk.cols; ++im) {
              LinComb out;
              for (int r = 0; r < blk.rows; ++r) {
                Rat v = blk.get(r, im);
                if (v != 0) out[r] = v;
              }
              if (!lc_zero(out)) M.act[{X, Y, da, ia, dm, im}] = out;
            }
        }
  return M;
}

OneSidedModule module_omega_dual(const DgCat& A, const FibreFunctor& w) {
  OneSidedModule M;
  M.right = true;
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X) M.val[X] = dual(w.val[X]);
  // φ·a = φ∘ω(a): in dual-basis coordinates the matrix is the transpose of
  // ω(a)'s block.
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (auto& [da, la] : A.H(X, Y).basis)
        for (int ia = 0; ia < (int)la.size(); ++ia) {
          ChainMap f = w.action(A, X, Y, da, ia);  // ω(Y)^n -> ω(X)^{n+da}
          for (auto& [n, blk] : f.blocks) {
            // φ ∈ (ω(X)^{n+da})^∨ has dual degree dm = −n−da; φ∘ω(a) ∈ (ω(Y)^n)^∨.
            int dm = -n - da;
            SparseMatrix t = blk.transpose();
            for (int im = 0; im < t.cols; ++im) {
              LinComb out;
              for (int r = 0; r < t.rows; ++r) {
                Rat v = t.get(r, im);
                if (v != 0) out[r] = v;
              }
              if (!lc_zero(out)) M.act[{X, Y, dm, im, da, ia}] = out;
            }
          }
        }
  return M;
}

Complex tensor_over_subcategory(const DgCat& A0, const std::vector<int>& objects,
                                const OneSidedModule& M, const OneSidedModule& N) {
  const FieldSpec& F = A0.field;
  if (M.right == false || N.right == true)
    throw std::invalid_argument("tensor_over_subcategory: need (right module, left module)");
  // Ambient: ⊕_X M(X)⊗N(X), labels "m⊗n@X".
  std::vector<Complex> tens;
  for (int X : objects) {
    Complex t = tensor(M.at(X), N.at(X));
    for (auto& [n, labels] : t.basis)
      for (auto& l : labels) l += "@" + A0.objects[X];
    tens.push_back(std::move(t));
  }
  Complex ambient(F);
  if (!tens.empty()) {
    ambient = tens[0];
    for (size_t i = 1; i < tens.size(); ++i) ambient = direct_sum(ambient, tens[i]);
  }
  auto offset = [&](int xi, int n) {
    int off = 0;
    for (int k = 0; k < xi; ++k) off += tens[k].dim(n);
    return off;
  };
  // Relations m·a ⊗ n − m ⊗ a·n for every hom basis element a of A0 between
  // the selected objects.
  std::map<int, std::vector<std::vector<Rat>>> span;
  for (int xi = 0; xi < (int)objects.size(); ++xi)
    for (int yi = 0; yi < (int)objects.size(); ++yi) {
      int X = objects[xi], Y = objects[yi];
      const Complex& h = A0.H(X, Y);
      for (auto& [da, la] : h.basis) {
        if (!h.diff(da).is_zero())
          throw std::invalid_argument("tensor_over_subcategory: base has nonzero differential");
        for (int ia = 0; ia < (int)la.size(); ++ia) {
          bool is_id = (X == Y && da == 0 && A0.id_idx.count(X) && A0.id_idx.at(X) == ia);
          if (is_id) continue;  // identity relations are trivially satisfied
          for (auto& [dm, lm] : M.at(X).basis)
            for (int im = 0; im < (int)lm.size(); ++im)
              for (auto& [dn, ln] : N.at(Y).basis)
                for (int in = 0; in < (int)ln.size(); ++in) {
                  int n = dm + da + dn;
                  std::vector<Rat> rel(ambient.dim(n), Rat(0));
                  LinComb ma = M.apply(A0, X, Y, da, ia, dm, im);  // in M(Y)^{dm+da}
                  for (auto& [j, c] : ma)
                    rel[offset(yi, n) + tensor_index(M.at(Y), N.at(Y), dm + da, j, dn, in)] += c;
                  LinComb an = N.apply(A0, X, Y, da, ia, dn, in);  // in N(X)^{da+dn}
                  for (auto& [j, c] : an)
                    rel[offset(xi, n) + tensor_index(M.at(X), N.at(X), dm, im, da + dn, j)] -= c;
                  bool nz = false;
                  for (auto& v : rel) nz = nz || v != 0;
                  if (nz) span[n].push_back(std::move(rel));
                }
        }
      }
    }
  auto [quo, pr] = quotient_complex(ambient, span);
  return quo;
}

StrictifyResult strictify_degree_zero(const DgCat& A) {
  const FieldSpec& F = A.field;
  int nobj = (int)A.objects.size();

  // Gather per-pair data.
  struct PairData {
    int X, Y;
    std::vector<std::vector<Rat>> img;   // basis of dA^0 inside A^1
    std::vector<std::vector<Rat>> reps;  // degree-0 cocycle representatives of H^0
    int dim1 = 0;
  };
  std::vector<PairData> pairs;
  std::map<std::pair<int, int>, int> pidx;
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y) {
      const Complex& h = A.H(X, Y);
      if (h.empty()) continue;
      auto hneg = cohomology(h, h.min_degree(), -1);
      for (auto& [j, dimj] : hneg.dims)
        if (dimj != 0)
          throw std::invalid_argument("strictify_degree_zero: H^{<0} != 0 at hom(" +
                                      A.objects[X] + "," + A.objects[Y] + ")");
      PairData pd;
      pd.X = X;
      pd.Y = Y;
      pd.dim1 = h.dim(1);
      SparseMatrix d0 = h.diff(0);
      for (int pc : image_column_basis(d0)) {
        std::vector<Rat> e(h.dim(0), Rat(0));
        e[pc] = Rat(1);
        pd.img.push_back(d0.apply(e));
      }
      // H^0 representatives; for X == Y force id to be the first class.
      auto h0 = cohomology(h, 0, 0);
      pd.reps = h0.reps[0];
      if (X == Y && A.id_idx.count(X)) {
        std::vector<Rat> idv(h.dim(0), Rat(0));
        idv[A.id_idx.at(X)] = Rat(1);
        // greedy re-selection: classes modulo im d^{-1}, id first
        SparseMatrix imneg = h.diff(-1);
        std::vector<std::vector<Rat>> cand;
        cand.push_back(idv);
        for (auto& r : pd.reps) cand.push_back(r);
        SparseMatrix probe = imneg.hcat(columns_to_matrix(F, h.dim(0), cand));
        RrefResult rr = rref(probe);
        std::vector<std::vector<Rat>> sel;
        for (int pc : rr.pivot_cols)
          if (pc >= imneg.cols) sel.push_back(cand[pc - imneg.cols]);
        pd.reps = sel;
      }
      pidx[{X, Y}] = (int)pairs.size();
      pairs.push_back(std::move(pd));
    }

  // Unknowns: theta_p (r_p x dim1_p) per pair, pi = IMG * theta.
  std::vector<int> var_off(pairs.size() + 1, 0);
  for (size_t p = 0; p < pairs.size(); ++p)
    var_off[p + 1] = var_off[p] + (int)pairs[p].img.size() * pairs[p].dim1;
  int nvars = var_off.back();
  std::vector<std::vector<Rat>> eq_rows;
  std::vector<Rat> eq_rhs;
  auto theta_var = [&](int p, int r, int c) { return var_off[p] + r * pairs[p].dim1 + c; };
  auto img_mat = [&](int p) {
    return columns_to_matrix(F, pairs[p].dim1, pairs[p].img);
  };
  // (1) theta * IMG = I.
  for (size_t p = 0; p < pairs.size(); ++p) {
    int r = (int)pairs[p].img.size();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        std::vector<Rat> row(nvars, Rat(0));
        for (int c = 0; c < pairs[p].dim1; ++c) row[theta_var((int)p, i, c)] = pairs[p].img[j][c];
        eq_rows.push_back(std::move(row));
        eq_rhs.push_back(Rat(i == j ? 1 : 0));
      }
  }
  // (2) equivariance under the chosen H^0 representatives, both sides:
  //     IMG_q θ_q L = L IMG_p θ_p  for L = left/right multiplication maps.
  auto add_equivariance = [&](int p, int q, const SparseMatrix& L) {
    // L: A^1(pair p) -> A^1(pair q)
    SparseMatrix Ip = img_mat(p), Iq = img_mat(q);
    int rq = Iq.cols, rp = Ip.cols;
    SparseMatrix LIp = L.mul(Ip);  // dim1_q x rp
    for (int row = 0; row < pairs[q].dim1; ++row)
      for (int col = 0; col < pairs[p].dim1; ++col) {
        std::vector<Rat> r(nvars, Rat(0));
        bool nz = false;
        for (int k = 0; k < rq; ++k) {
          Rat c = Iq.get(row, k);
          if (c == 0) continue;
          // (Iq θq L)[row,col] = Σ_k Iq[row,k] Σ_m θq[k,m] L[m,col]
          for (int mcol = 0; mcol < pairs[q].dim1; ++mcol) {
            Rat lv = L.get(mcol, col);
            if (lv == 0) continue;
            r[theta_var(q, k, mcol)] += c * lv;
            nz = true;
          }
        }
        for (int k = 0; k < rp; ++k) {
          Rat c = LIp.get(row, k);
          if (c == 0) continue;
          r[theta_var(p, k, col)] -= c;
          nz = true;
        }
        if (nz) {
          eq_rows.push_back(std::move(r));
          eq_rhs.push_back(Rat(0));
        }
      }
  };
  for (size_t p = 0; p < pairs.size(); ++p) {
    int X = pairs[p].X, Y = pairs[p].Y;
    // left: b ∈ H^0 reps of A(W,X): L_b: A^1(X,Y) -> A^1(W,Y)
    for (int W = 0; W < nobj; ++W) {
      auto itp = pidx.find({W, X});
      auto itq = pidx.find({W, Y});
      if (itp == pidx.end() || itq == pidx.end()) continue;
      int q = itq->second;
      for (auto& b : pairs[itp->second].reps) {
        SparseMatrix L(F, pairs[q].dim1, pairs[p].dim1);
        for (int m = 0; m < pairs[p].dim1; ++m) {
          LinComb bm;
          for (int bi = 0; bi < (int)b.size(); ++bi)
            if (b[bi] != 0)
              bm = lc_add(F, bm, A.mul(W, X, Y, 0, bi, 1, m), b[bi]);
          for (auto& [i, c] : bm) L.set(i, m, c);
        }
        add_equivariance((int)p, q, L);
      }
    }
    // right: b ∈ H^0 reps of A(Y,Z): R_b: A^1(X,Y) -> A^1(X,Z)
    for (int Z = 0; Z < nobj; ++Z) {
      auto itb = pidx.find({Y, Z});
      auto itq = pidx.find({X, Z});
      if (itb == pidx.end() || itq == pidx.end()) continue;
      int q = itq->second;
      for (auto& b : pairs[itb->second].reps) {
        SparseMatrix R(F, pairs[q].dim1, pairs[p].dim1);
        for (int m = 0; m < pairs[p].dim1; ++m) {
          LinComb mb;
          for (int bi = 0; bi < (int)b.size(); ++bi)
            if (b[bi] != 0)
              mb = lc_add(F, mb, A.mul(X, Y, Z, 1, m, 0, bi), b[bi]);
          for (auto& [i, c] : mb) R.set(i, m, c);
        }
        add_equivariance((int)p, q, R);
      }
    }
  }

  SparseMatrix sys(F, (int)eq_rows.size(), nvars);
  for (int i = 0; i < (int)eq_rows.size(); ++i)
    for (int j = 0; j < nvars; ++j) sys.set(i, j, eq_rows[i][j]);
  auto sol = solve(sys, eq_rhs);
  if (!sol)
    throw std::runtime_error(
        "strictify_degree_zero: no equivariant bimodule complement exists (the degree-zero "
        "cohomology is not semisimple in the required sense)");

  // Extract per-pair theta, compute B^1 = ker theta, and assemble B.
  StrictifyResult out;
  DgCat& B = out.B;
  B.field = F;
  B.objects = A.objects;
  B.nilpotence = A.nilpotence;
  // per pair: basis vectors of B in A coordinates, per degree
  std::map<std::pair<int, int>, std::map<int, std::vector<std::vector<Rat>>>> bvecs;
  for (size_t p = 0; p < pairs.size(); ++p) {
    int X = pairs[p].X, Y = pairs[p].Y;
    const Complex& h = A.H(X, Y);
    std::map<int, std::vector<std::vector<Rat>>>& vecs = bvecs[{X, Y}];
    vecs[0] = pairs[p].reps;
    int r = (int)pairs[p].img.size();
    SparseMatrix theta(F, r, pairs[p].dim1);
    for (int i = 0; i < r; ++i)
      for (int c = 0; c < pairs[p].dim1; ++c) theta.set(i, c, (*sol)[theta_var((int)p, i, c)]);
    vecs[1] = kernel_basis(theta);
    for (auto& [deg, labels] : h.basis)
      if (deg >= 2) {
        std::vector<std::vector<Rat>> std_basis;
        for (int i = 0; i < (int)labels.size(); ++i) {
          std::vector<Rat> e(labels.size(), Rat(0));
          e[i] = Rat(1);
          std_basis.push_back(std::move(e));
        }
        vecs[deg] = std_basis;
      }
    // Build the hom complex of B.
    Complex bh(F);
    for (auto& [deg, vs] : vecs) {
      if (vs.empty()) continue;
      std::vector<std::string> labels;
      for (int i = 0; i < (int)vs.size(); ++i) {
        // reuse the ambient label when the vector is a standard basis vector
        int hits = 0, pos = -1;
        for (int j = 0; j < (int)vs[i].size(); ++j)
          if (vs[i][j] != 0) {
            ++hits;
            pos = j;
          }
        if (hits == 1 && vs[i][pos] == 1 && h.basis.count(deg))
          labels.push_back(h.basis.at(deg)[pos]);
        else
          labels.push_back("b" + std::to_string(deg) + "_" + std::to_string(i));
      }
      bh.basis[deg] = std::move(labels);
    }
    for (auto& [deg, vs] : vecs) {
      if (!vecs.count(deg + 1) && bh.dim(deg + 1) == 0) continue;
      SparseMatrix m(F, bh.dim(deg + 1), (int)vs.size());
      SparseMatrix next = vecs.count(deg + 1)
                              ? columns_to_matrix(F, h.dim(deg + 1), vecs[deg + 1])
                              : SparseMatrix(F, h.dim(deg + 1), 0);
      for (int j = 0; j < (int)vs.size(); ++j) {
        std::vector<Rat> img = h.diff(deg).apply(vs[j]);
        bool nz = false;
        for (auto& v : img) nz = nz || v != 0;
        if (!nz) continue;
        auto x = solve(next, img);
        if (!x)
          throw std::runtime_error("strictify_degree_zero: chosen complement is not d-stable");
        for (int i = 0; i < (int)x->size(); ++i) m.set(i, j, (*x)[i]);
      }
      if (!m.is_zero()) bh.set_diff(deg, m);
    }
    B.hom[{X, Y}] = std::move(bh);
  }
  // identities
  for (int X = 0; X < nobj; ++X) {
    if (!A.id_idx.count(X)) continue;
    auto& vecs = bvecs[{X, X}];
    std::vector<Rat> idv(A.H(X, X).dim(0), Rat(0));
    idv[A.id_idx.at(X)] = Rat(1);
    int found = -1;
    for (int i = 0; i < (int)vecs[0].size(); ++i)
      if (vecs[0][i] == idv) found = i;
    if (found < 0)
      throw std::runtime_error("strictify_degree_zero: identity is not among the chosen H^0 representatives");
    B.id_idx[X] = found;
  }
  // composition: express products of B basis vectors in B coordinates
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (int Z = 0; Z < nobj; ++Z) {
        if (!bvecs.count({X, Y}) || !bvecs.count({Y, Z}) || !bvecs.count({X, Z})) continue;
        auto& va = bvecs[{X, Y}];
        auto& vb = bvecs[{Y, Z}];
        auto& vr = bvecs[{X, Z}];
        for (auto& [da, vsa] : va)
          for (int ia = 0; ia < (int)vsa.size(); ++ia)
            for (auto& [db, vsb] : vb)
              for (int ib = 0; ib < (int)vsb.size(); ++ib) {
                LinComb prod;
                for (int i = 0; i < (int)vsa[ia].size(); ++i)
                  for (int j = 0; j < (int)vsb[ib].size(); ++j)
                    if (vsa[ia][i] != 0 && vsb[ib][j] != 0)
                      prod = lc_add(F, prod, A.mul(X, Y, Z, da, i, db, j),
                                    vsa[ia][i] * vsb[ib][j]);
                if (lc_zero(prod)) continue;
                int dr = da + db;
                if (!vr.count(dr))
                  throw std::runtime_error("strictify_degree_zero: B is not closed under composition");
                SparseMatrix basis = columns_to_matrix(F, A.H(X, Z).dim(dr), vr[dr]);
                auto x = solve(basis, lc_to_vec(prod, A.H(X, Z).dim(dr)));
                if (!x)
                  throw std::runtime_error("strictify_degree_zero: B is not closed under composition");
                LinComb coefs;
                for (int i = 0; i < (int)x->size(); ++i)
                  if ((*x)[i] != 0) coefs[i] = (*x)[i];
                if (!lc_zero(coefs)) B.comp[{X, Y, Z, da, ia, db, ib}] = coefs;
              }
      }
  // inclusion certificates
  for (auto& [pair, vecs] : bvecs) {
    const Complex& h = A.H(pair.first, pair.second);
    const Complex& bh = B.H(pair.first, pair.second);
    ChainMap inc;
    for (auto& [deg, vs] : vecs)
      if (!vs.empty()) inc.blocks[deg] = columns_to_matrix(F, h.dim(deg), vs);
    int lo = h.empty() ? 0 : h.min_degree();
    int hi = h.empty() ? 0 : h.max_degree();
    out.inclusion_certs[pair] = induced_map_on_cohomology(inc, bh, h, lo, hi);
  }
  return out;
}

}  // namespace dgtk
