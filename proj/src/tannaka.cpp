#include "dgtk/tannaka.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dgtk {

namespace {

Rat sgn(long e) { return Rat(e % 2 != 0 ? -1 : 1); }

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

// offsets of level blocks inside the totalization: {total degree, level} -> offset
std::map<std::pair<int, int>, int> level_offsets(const SimplicialLevels& lv) {
  std::map<std::pair<int, int>, int> off;
  std::set<int> degs;
  for (int i = 0; i <= lv.L; ++i)
    for (auto& [j, l] : lv.levels[i].basis) degs.insert(j - i);
  for (int t : degs) {
    int at = 0;
    for (int i = 0; i <= lv.L; ++i) {
      off[{t, i}] = at;
      at += lv.levels[i].dim(t + i);
    }
  }
  return off;
}

// Which totalization a split piece lives in: the comultiplication keeps both
// pieces in C; the P-coaction keeps the prefix, the Q-coaction the suffix.
enum class Mode { kSelf, kRight, kLeft };

// The insertion comultiplication/coaction on a Hochschild totalization whose
// coefficient bimodule has a slotR ⊗ slotL decomposition with slotR valued in
// the fibres of ω.  A string at level m is split at every position r, the
// identity of ω(X_r) is inserted expanded in the chosen basis, and each term
// carries the Koszul permutation sign of the rearrangement times
// (-1)^{r·j2}, j2 the internal degree of the right piece (the unique twist
// compatible with the total-complex sign convention).
std::map<BasisRef, std::vector<DeltaTerm>> insertion_coaction(const DgCat& A,
                                                              const FibreFunctor& w, Mode mode,
                                                              const SimplicialLevels& src,
                                                              const SimplicialLevels& cnm) {
  if (!src.F.slotR || !src.F.slotL)
    throw std::invalid_argument("insertion coaction: coefficient has no slot decomposition");
  auto soff = level_offsets(src);
  auto coff = level_offsets(cnm);
  const SimplicialLevels& pref = (mode == Mode::kRight) ? src : cnm;
  const SimplicialLevels& suff = (mode == Mode::kLeft) ? src : cnm;
  auto& poff = (mode == Mode::kRight) ? soff : coff;
  auto& qoff = (mode == Mode::kLeft) ? soff : coff;

  std::map<BasisRef, std::vector<DeltaTerm>> out;
  for (int m = 0; m <= src.L; ++m)
    for (auto& [j, ss] : src.strings[m])
      for (int k = 0; k < (int)ss.size(); ++k) {
        const StringElt& s = ss[k];
        BasisRef me{j - m, soff.at({j - m, m}) + k};
        int Xm = s.tuple.back(), X0 = s.tuple.front();
        auto [rp, lp] = tensor_split(src.F.slotR->at(Xm), src.F.slotL->at(X0), s.coef.first,
                                     s.coef.second);
        int dr = rp.first, ir = rp.second, dl = lp.first, il = lp.second;
        long sumd = 0;
        for (auto& [d, i] : s.inner) sumd += d;
        std::map<std::pair<BasisRef, BasisRef>, Rat> acc;
        long pre = 0;
        for (int r = 0; r <= m; ++r) {
          long post = sumd - pre;
          int Xr = s.tuple[r];
          for (auto& [db, lb] : w.val[Xr].basis)
            for (int ib = 0; ib < (int)lb.size(); ++ib) {
              StringElt a;
              a.tuple.assign(s.tuple.begin(), s.tuple.begin() + r + 1);
              a.inner.assign(s.inner.begin(), s.inner.begin() + r);
              a.coef = {db + dl, tensor_index(pref.F.slotR->at(Xr), pref.F.slotL->at(X0), db, ib,
                                              dl, il)};
              StringElt b;
              b.tuple.assign(s.tuple.begin() + r, s.tuple.end());
              b.inner.assign(s.inner.begin() + r, s.inner.end());
              b.coef = {dr - db, tensor_index(suff.F.slotR->at(Xm), suff.F.slotL->at(Xr), dr, ir,
                                              -db, ib)};
              auto fa = pref.find(r, a);
              auto fb = suff.find(m - r, b);
              if (fa.second < 0 || fb.second < 0)
                throw std::logic_error("insertion coaction: split string missing");
              int jl = (int)pre + db + dl, jr = (int)post + dr - db;
              BasisRef lref{jl - r, poff.at({jl - r, r}) + fa.second};
              BasisRef rref{jr - (m - r), qoff.at({jr - (m - r), m - r}) + fb.second};
              long e = dl * (sumd + dr) + dl * (pre + db) + db * (post + dr) +
                       (long)r * (post + dr - db);
              Rat& v = acc[{lref, rref}];
              v = src.field.normalize(v + sgn(e));
            }
          if (r < m) pre += s.inner[r].first;
        }
        std::vector<DeltaTerm> terms;
        for (auto& [pr2, c] : acc)
          if (c != 0) terms.push_back({pr2.first, pr2.second, c});
        if (!terms.empty()) out[me] = terms;
      }
  return out;
}

// counit of the Tannakian dual: evaluation pairing on level-0 strings
std::map<BasisRef, Rat> pairing_counit(const SimplicialLevels& nm) {
  auto off = level_offsets(nm);
  std::map<BasisRef, Rat> eps;
  for (auto& [j, ss] : nm.strings[0])
    for (int k = 0; k < (int)ss.size(); ++k) {
      const StringElt& s = ss[k];
      int X0 = s.tuple[0];
      auto [rp, lp] = tensor_split(nm.F.slotR->at(X0), nm.F.slotL->at(X0), s.coef.first,
                                   s.coef.second);
      if (lp.first == -rp.first && lp.second == rp.second)
        eps[{j, off.at({j, 0}) + k}] = sgn((long)rp.first * lp.first);
    }
  return eps;
}

SimplicialLevels cyclic_coefficient_levels(const DgCat& A, const FibreFunctor& w, int L,
                                           bool relative) {
  OneSidedModule R = module_omega(A, w);
  OneSidedModule Lm = module_omega_dual(A, w);
  if (relative) return relative_hochschild_levels(A, R, Lm, L);
  return hochschild_levels(A, product_bimodule(A, R, Lm), L);
}

int resolve_cutoff(const DgCat& A, int L, const char* what) {
  if (L >= 0) return L;
  if (A.nilpotence) return (int)*A.nilpotence;
  throw std::invalid_argument(std::string(what) +
                              ": neither a level cutoff nor a nilpotence certificate");
}

// Left composition by a ∈ A(Xi,Xj)^{da} (as a LinComb) on the representable
// coefficient slot: a chain map Tot P(Xj) -> Tot P(Xi) of degree da.
ChainMap representable_action(const DgCat& A, const SimplicialLevels& nmj,
                              const SimplicialLevels& nmi, const Complex& totj,
                              const Complex& toti, int Xi, int Xj, int da, const LinComb& a) {
  auto offj = level_offsets(nmj);
  auto offi = level_offsets(nmi);
  ChainMap f;
  f.degree = da;
  for (auto& [t, labels] : totj.basis)
    f.blocks.emplace(t, SparseMatrix(totj.field, toti.dim(t + da), (int)labels.size()));
  for (int m = 0; m <= nmj.L; ++m)
    for (auto& [j, ss] : nmj.strings[m])
      for (int k = 0; k < (int)ss.size(); ++k) {
        const StringElt& s = ss[k];
        int Xm = s.tuple.back(), X0 = s.tuple.front();
        auto [rp, lp] = tensor_split(nmj.F.slotR->at(Xm), nmj.F.slotL->at(X0), s.coef.first,
                                     s.coef.second);
        long sumd = 0;
        for (auto& [d, i] : s.inner) sumd += d;
        int col = offj.at({j - m, m}) + k;
        for (auto& [ia, ca] : a) {
          if (ca == 0) continue;
          LinComb lc = A.mul(Xi, Xj, X0, da, ia, lp.first, lp.second);
          for (auto& [i2, c2] : lc) {
            if (c2 == 0) continue;
            StringElt t = s;
            t.coef = {rp.first + lp.first + da,
                      tensor_index(nmi.F.slotR->at(Xm), nmi.F.slotL->at(X0), rp.first, rp.second,
                                   lp.first + da, i2)};
            auto ft = nmi.find(m, t);
            if (ft.second < 0) throw std::logic_error("representable action: target missing");
            int row = offi.at({j + da - m, m}) + ft.second;
            f.blocks.at(j - m).add_to(row, col, sgn(da * (sumd + rp.first)) * ca * c2);
          }
        }
      }
  return f;
}

// the counit of P(W): evaluate the representable slot through ω on level 0
ChainMap tilting_counit(const DgCat& A, const FibreFunctor& w, int W,
                        const SimplicialLevels& nmP, const Complex& totP) {
  auto off = level_offsets(nmP);
  ChainMap eps;
  for (auto& [t, labels] : totP.basis)
    eps.blocks.emplace(t, SparseMatrix(totP.field, w.val[W].dim(t), (int)labels.size()));
  for (auto& [j, ss] : nmP.strings[0])
    for (int k = 0; k < (int)ss.size(); ++k) {
      const StringElt& s = ss[k];
      int X0 = s.tuple[0];
      auto [rp, lp] = tensor_split(nmP.F.slotR->at(X0), nmP.F.slotL->at(X0), s.coef.first,
                                   s.coef.second);
      SparseMatrix blk = w.action(A, W, X0, lp.first, lp.second)
                             .block(rp.first, w.val[X0], w.val[W]);
      Rat c = sgn((long)rp.first * lp.first);
      for (int r = 0; r < blk.rows; ++r) {
        Rat v = blk.get(r, rp.second);
        if (v != 0) eps.blocks.at(j).add_to(r, off.at({j, 0}) + k, c * v);
      }
    }
  return eps;
}

QuasiIsoCertificate windowed_cert(const ChainMap& f, const Complex& src, const Complex& tgt,
                                  const TrustedWindow& win) {
  int lo = 0, hi = -1;
  if (!src.empty() || !tgt.empty()) {
    lo = std::min(src.empty() ? tgt.min_degree() : src.min_degree(),
                  tgt.empty() ? src.min_degree() : tgt.min_degree());
    hi = std::max(src.empty() ? tgt.max_degree() : src.max_degree(),
                  tgt.empty() ? src.max_degree() : tgt.max_degree());
  }
  if (win.none) hi = lo - 1;
  if (!win.all && !win.none) lo = std::max(lo, (int)win.min_trusted);
  return induced_map_on_cohomology(f, src, tgt, lo, hi);
}

}  // namespace

TannakianDualResult tannakian_dual(const DgCat& A, const FibreFunctor& w, int L, bool normalised,
                                   bool relative) {
  L = resolve_cutoff(A, L, "tannakian dual");
  SimplicialLevels lv = cyclic_coefficient_levels(A, w, L, relative);
  SimplicialLevels nm = normalised ? normalize(lv) : lv;
  auto [tot, win] = hochschild_total(nm);

  TannakianDualResult out;
  out.levels = lv;
  out.window = win;
  out.C.underlying = tot;
  out.C.max_level = L;
  for (auto& [b, o] : total_origin(nm)) out.C.level[b] = o.first;
  out.C.delta = insertion_coaction(A, w, Mode::kSelf, nm, nm);
  out.C.counit = pairing_counit(nm);
  return out;
}

SimplicialLevels UniversalCoalgebra::at(int W, int V) const {
  OneSidedModule R = module_hom_to(*A, V);
  OneSidedModule Lm = module_hom_from(*A, W);
  if (relative) return relative_hochschild_levels(*A, R, Lm, L);
  return hochschild_levels(*A, product_bimodule(*A, R, Lm), L);
}

std::vector<std::string> UniversalCoalgebra::contraction_report() const {
  std::vector<std::string> rep;
  int nobj = (int)A->objects.size();
  for (int W = 0; W < nobj; ++W)
    for (int V = 0; V < nobj; ++V) {
      SimplicialLevels lv = at(W, V);
      for (auto& line : counit_contraction_check(lv, W, V))
        rep.push_back("D(" + A->objects[W] + "," + A->objects[V] + "): " + line);
    }
  return rep;
}

UniversalCoalgebra universal_coalgebra(const DgCat& A, int L, bool relative) {
  UniversalCoalgebra D;
  D.A = &A;
  D.L = resolve_cutoff(A, L, "universal coalgebra");
  D.relative = relative;
  return D;
}

long cech_level_dim(const DgCat& A, int W, int V, int n, int degree) {
  int nobj = (int)A.objects.size();
  // cur[X][d] = number of (X0..Xk = X, factor basis choices) of total degree d
  std::vector<std::map<int, long>> cur(nobj);
  for (int X0 = 0; X0 < nobj; ++X0)
    for (auto& [d, l] : A.H(W, X0).basis) cur[X0][d] += (long)l.size();
  for (int step = 0; step < n; ++step) {
    std::vector<std::map<int, long>> next(nobj);
    for (int X = 0; X < nobj; ++X)
      for (auto& [d, c] : cur[X])
        for (int Y = 0; Y < nobj; ++Y)
          for (auto& [d2, l2] : A.H(X, Y).basis) next[Y][d + d2] += c * (long)l2.size();
    cur = next;
  }
  long total = 0;
  for (int X = 0; X < nobj; ++X)
    for (auto& [d, c] : cur[X]) total += c * (long)A.H(X, V).dim(degree - d);
  return total;
}

namespace {

using PairSpan = std::map<int, std::vector<std::vector<Rat>>>;

bool pair_span_contains(const FieldSpec& F, const PairSpan& S, int deg,
                        const std::vector<Rat>& v) {
  bool zero = true;
  for (auto& c : v) zero = zero && c == 0;
  if (zero) return true;
  auto it = S.find(deg);
  if (it == S.end()) return false;
  return in_column_span(columns_to_matrix(F, (int)v.size(), it->second), v);
}

void pair_span_add(const FieldSpec& F, PairSpan& S, int deg, const std::vector<Rat>& v,
                   bool& grew) {
  if (pair_span_contains(F, S, deg, v)) return;
  S[deg].push_back(v);
  grew = true;
}

// close a family of per-pair spans under the hom differentials
void d_close(const DgCat& A, std::map<std::pair<int, int>, PairSpan>& V, bool& grew) {
  bool again = true;
  while (again) {
    again = false;
    for (auto& [pair, S] : V) {
      const Complex& h = A.H(pair.first, pair.second);
      PairSpan add;
      for (auto& [deg, vecs] : S) {
        SparseMatrix d = h.diff(deg);
        for (auto& v : vecs) {
          std::vector<Rat> dv = d.apply(v);
          if (!pair_span_contains(A.field, S, deg + 1, dv)) add[deg + 1].push_back(dv);
        }
      }
      for (auto& [deg, vecs] : add)
        for (auto& v : vecs) pair_span_add(A.field, S, deg, v, again);
    }
    grew = grew || again;
  }
}

}  // namespace

CompactSubcoalgebraResult compact_subcoalgebra(const UniversalCoalgebra& D,
                                               const CompactSubcoalgebraIndex& idx, int W,
                                               int V) {
  CompactSubcoalgebraResult out;
  const DgCat& A = *D.A;
  int top = std::min(idx.n, D.L);

  // the string closures V^(0) ⊆ V^(1) ⊆ ... ⊆ V^(n): V^(i+1) is spanned by
  // V^(i) and its pairwise products, d-closed at every stage
  std::vector<std::map<std::pair<int, int>, PairSpan>> closure(top + 1);
  for (auto& [pair, perdeg] : idx.V)
    for (auto& [deg, vecs] : perdeg)
      for (auto& v : vecs) {
        if ((int)v.size() != A.H(pair.first, pair.second).dim(deg))
          throw std::invalid_argument("compact subcoalgebra: spanning vector of wrong size");
        bool dummy = false;
        pair_span_add(A.field, closure[0][pair], deg, v, dummy);
      }
  {
    bool grew = false;
    d_close(A, closure[0], grew);
    if (grew)
      throw std::invalid_argument("compact subcoalgebra: V is not d-closed");
  }
  for (int i = 0; i + 1 <= top; ++i) {
    closure[i + 1] = closure[i];
    bool dummy = false;
    for (auto& [pab, Sab] : closure[i])
      for (auto& [pbc, Sbc] : closure[i]) {
        if (pab.second != pbc.first) continue;
        int X = pab.first, Y = pab.second, Z = pbc.second;
        for (auto& [da, va] : Sab)
          for (auto& [db, vb] : Sbc)
            for (auto& u : va)
              for (auto& v : vb) {
                std::vector<Rat> w(A.H(X, Z).dim(da + db), Rat(0));
                for (int ia = 0; ia < (int)u.size(); ++ia) {
                  if (u[ia] == 0) continue;
                  for (int ib = 0; ib < (int)v.size(); ++ib) {
                    if (v[ib] == 0) continue;
                    for (auto& [ic, c] : A.mul(X, Y, Z, da, ia, db, ib))
                      w[ic] = A.field.normalize(w[ic] + u[ia] * v[ib] * c);
                  }
                }
                pair_span_add(A.field, closure[i + 1][{X, Z}], da + db, w, dummy);
              }
      }
    d_close(A, closure[i + 1], dummy);
  }

  // nesting certificate (this is what makes the span Δ-closed: a split at
  // position r only needs the weaker closure V^(n-r) on each side)
  for (int i = 0; i + 1 <= top; ++i)
    for (auto& [pair, S] : closure[i])
      for (auto& [deg, vecs] : S)
        for (auto& v : vecs)
          if (!pair_span_contains(A.field, closure[i + 1][pair], deg, v))
            out.report.push_back("closure nesting fails at level " + std::to_string(i));

  // realize the span inside the totalization of D(W,V)
  SimplicialLevels lv = D.at(W, V);
  auto [tot, win] = hochschild_total(lv);
  (void)win;
  auto off = level_offsets(lv);
  std::map<int, std::vector<std::vector<Rat>>> span;
  auto in_S = [&](int X) { return std::find(idx.S.begin(), idx.S.end(), X) != idx.S.end(); };
  for (int m = 0; m <= top; ++m) {
    std::vector<int> tuple(m + 1, idx.S.empty() ? 0 : idx.S[0]);
    if (idx.S.empty()) break;
    std::vector<int> pos(m + 1, 0);
    while (true) {
      for (int k = 0; k <= m; ++k) tuple[k] = idx.S[pos[k]];
      const std::map<std::pair<int, int>, PairSpan>& Vm = closure[top - m];
      // elementary tensors: one spanning vector per inner slot, coefficient
      // basis elements free
      std::vector<std::vector<std::pair<int, const std::vector<Rat>*>>> slot(m);
      bool ok = true;
      for (int k = 0; k < m && ok; ++k) {
        auto it = Vm.find({tuple[k], tuple[k + 1]});
        if (it == Vm.end()) {
          ok = false;
          break;
        }
        for (auto& [deg, vecs] : it->second)
          for (auto& v : vecs) slot[k].push_back({deg, &v});
        if (slot[k].empty()) ok = false;
      }
      const Complex& fc = lv.F.at(tuple[m], tuple[0]);
      if (ok && !fc.empty()) {
        std::vector<int> sp(m, 0);
        while (true) {
          for (auto& [dc, lc] : fc.basis)
            for (int ic = 0; ic < (int)lc.size(); ++ic) {
              int deg = dc;
              for (int k = 0; k < m; ++k) deg += slot[k][sp[k]].first;
              // expand the product of the slot vectors into string coordinates
              std::vector<Rat> vec(tot.dim(deg - m), Rat(0));
              std::vector<int> bpos(m, 0);
              bool any = false;
              while (true) {
                Rat c(1);
                StringElt s;
                s.tuple = tuple;
                for (int k = 0; k < m; ++k) {
                  c *= (*slot[k][sp[k]].second)[bpos[k]];
                  s.inner.push_back({slot[k][sp[k]].first, bpos[k]});
                }
                s.coef = {dc, ic};
                if (c != 0) {
                  auto f = lv.find(m, s);
                  if (f.second < 0) throw std::logic_error("compact subcoalgebra: string missing");
                  int at = off.at({deg - m, m}) + f.second;
                  vec[at] = A.field.normalize(vec[at] + c);
                  any = true;
                }
                int k = m - 1;
                while (k >= 0 && ++bpos[k] == (int)slot[k][sp[k]].second->size()) bpos[k--] = 0;
                if (k < 0) break;
              }
              if (m == 0) any = true;
              if (any) span[deg - m].push_back(vec);
              (void)in_S;
            }
          int k = m - 1;
          while (k >= 0 && ++sp[k] == (int)slot[k].size()) sp[k--] = 0;
          if (k < 0) break;
        }
      }
      int k = m;
      while (k >= 0 && ++pos[k] == (int)idx.S.size()) pos[k--] = 0;
      if (k < 0) break;
    }
  }

  // d-stability of the realized span before cutting the subcomplex
  bool stable = true;
  std::map<int, SparseMatrix> mats;
  for (auto& [deg, vecs] : span) mats.emplace(deg, columns_to_matrix(A.field, tot.dim(deg), vecs));
  for (auto& [deg, vecs] : span) {
    SparseMatrix d = tot.diff(deg);
    for (auto& v : vecs) {
      std::vector<Rat> dv = d.apply(v);
      bool zero = true;
      for (auto& c : dv) zero = zero && c == 0;
      if (zero) continue;
      auto it = mats.find(deg + 1);
      if (it == mats.end() || !in_column_span(it->second, dv)) {
        out.report.push_back("realized span is not d-stable at degree " + std::to_string(deg));
        stable = false;
      }
    }
  }
  if (stable) {
    auto [sub, inc] = subcomplex(tot, span);
    out.sub = sub;
    out.inclusion = inc;
  }
  return out;
}

TiltingModule tilting_module(const DgCat& A, const FibreFunctor& w, int L, bool normalised,
                             bool relative) {
  L = resolve_cutoff(A, L, "tilting module");
  TiltingModule T;
  T.normalised = normalised;
  TannakianDualResult td = tannakian_dual(A, w, L, normalised, relative);
  T.C = std::make_shared<DgCoalgebra>(std::move(td.C));
  SimplicialLevels cnm = normalised ? normalize(td.levels) : td.levels;

  int nobj = (int)A.objects.size();
  for (int W = 0; W < nobj; ++W) {
    OneSidedModule R = module_omega(A, w);
    OneSidedModule Lm = module_hom_from(A, W);
    SimplicialLevels lvP = relative ? relative_hochschild_levels(A, R, Lm, L)
                                    : hochschild_levels(A, product_bimodule(A, R, Lm), L);
    SimplicialLevels nmP = normalised ? normalize(lvP) : lvP;
    auto [totP, winP] = hochschild_total(nmP);
    Comodule P;
    P.right = true;
    P.C = T.C.get();
    P.underlying = totP;
    P.mu = insertion_coaction(A, w, Mode::kRight, nmP, cnm);
    ChainMap eps = tilting_counit(A, w, W, nmP, totP);
    T.certs[W] = windowed_cert(eps, totP, w.val[W], winP);
    T.P[W] = std::move(P);
    T.P_levels[W] = std::move(lvP);
    T.to_omega[W] = std::move(eps);
  }
  for (int V = 0; V < nobj; ++V) {
    OneSidedModule R = module_hom_to(A, V);
    OneSidedModule Lm = module_omega_dual(A, w);
    SimplicialLevels lvQ = relative ? relative_hochschild_levels(A, R, Lm, L)
                                    : hochschild_levels(A, product_bimodule(A, R, Lm), L);
    SimplicialLevels nmQ = normalised ? normalize(lvQ) : lvQ;
    Comodule Q;
    Q.right = false;
    Q.C = T.C.get();
    Q.underlying = hochschild_total(nmQ).first;
    Q.mu = insertion_coaction(A, w, Mode::kLeft, nmQ, cnm);
    T.Q[V] = std::move(Q);
  }
  return T;
}

KellerTilting keller_tilting(const DgCat& A, int L) {
  if (A.objects.size() != 1 || A.H(0, 0).dim(0) != 2 || L < 1 || !A.field.is_rational())
    throw std::invalid_argument("keller tilting: expects the one-object dual-numbers presentation");
  KellerTilting K;
  K.C = std::make_shared<DgCoalgebra>(free_dg_coalgebra(L));
  const FieldSpec F = A.field;

  Complex P(F);
  for (int n = 0; n <= L; ++n) {
    std::string xi = "\xce\xbe^" + std::to_string(n);
    P.basis[-n] = {"1\xe2\x8a\x97" + xi, "e\xe2\x8a\x97" + xi};
  }
  for (int n = 1; n <= L; ++n) {
    SparseMatrix d(F, 2, 2);
    d.set(1, 0, Rat(1));  // d(1⊗ξ^n) = e⊗ξ^{n-1}
    P.set_diff(-n, d);
  }
  K.P.right = true;
  K.P.C = K.C.get();
  K.P.underlying = P;
  for (int n = 0; n <= L; ++n)
    for (int a = 0; a < 2; ++a) {
      std::vector<DeltaTerm> terms;
      for (int j = 0; j <= n; ++j) terms.push_back({{-(n - j), a}, {-j, 0}, Rat(1)});
      K.P.mu[{-n, a}] = terms;
    }

  K.omega = Complex(F);
  K.omega.basis[0] = {"k"};
  K.to_omega.degree = 0;
  {
    SparseMatrix m(F, 1, 2);
    m.set(0, 0, Rat(1));
    K.to_omega.blocks[0] = m;
  }
  // the truncation is exact above -L+1: the last level contributes a stray
  // class in degree -L
  K.cert = induced_map_on_cohomology(K.to_omega, P, K.omega, -L + 1, 0);
  return K;
}

Complex evaluate_module(const DgCat& A, const FiniteModule& M, int Y) {
  Complex out(A.field);
  int g = (int)M.gens.size();
  std::set<int> degs;
  for (int j = 0; j < g; ++j)
    for (auto& [d, l] : A.H(M.gens[j].first, Y).basis) degs.insert(d - M.gens[j].second);
  std::map<std::pair<int, int>, int> off;
  for (int t : degs) {
    std::vector<std::string> labels;
    for (int j = 0; j < g; ++j) {
      off[{t, j}] = (int)labels.size();
      const Complex& h = A.H(M.gens[j].first, Y);
      auto it = h.basis.find(t + M.gens[j].second);
      if (it == h.basis.end()) continue;
      for (auto& l : it->second) labels.push_back(M.gen_labels[j] + "\xc2\xb7" + l);
    }
    out.basis[t] = labels;
  }
  for (int t : degs) {
    SparseMatrix d(A.field, out.dim(t + 1), out.dim(t));
    for (int j = 0; j < g; ++j) {
      int nj = M.gens[j].second;
      const Complex& h = A.H(M.gens[j].first, Y);
      SparseMatrix hd = h.diff(t + nj);
      Rat s = sgn(nj);
      for (int r = 0; r < hd.rows; ++r)
        for (auto& [c, v] : hd.entries[r])
          if (off.count({t + 1, j})) d.add_to(off.at({t + 1, j}) + r, off.at({t, j}) + c, s * v);
      for (auto& [key, a] : M.dmat) {
        auto [i, j2] = key;
        if (j2 != j) continue;
        int Xi = M.gens[i].first, Xj = M.gens[j].first;
        int da = 1 + M.gens[i].second - nj;
        for (int im = 0; im < h.dim(t + nj); ++im)
          for (auto& [ia, ca] : a)
            for (auto& [ic, c] : A.mul(Xi, Xj, Y, da, ia, t + nj, im))
              if (c != 0 && ca != 0)
                d.add_to(off.at({t + 1, i}) + ic, off.at({t, j}) + im, ca * c);
      }
    }
    if (!d.is_zero()) out.set_diff(t, d);
  }
  out.prune();
  return out;
}

Complex evaluate_module_omega(const DgCat& A, const FibreFunctor& w, const FiniteModule& M) {
  Complex out(w.val.empty() ? A.field : w.val[0].field);
  int g = (int)M.gens.size();
  std::set<int> degs;
  for (int j = 0; j < g; ++j)
    for (auto& [d, l] : w.val[M.gens[j].first].basis) degs.insert(d - M.gens[j].second);
  std::map<std::pair<int, int>, int> off;
  for (int t : degs) {
    std::vector<std::string> labels;
    for (int j = 0; j < g; ++j) {
      off[{t, j}] = (int)labels.size();
      const Complex& h = w.val[M.gens[j].first];
      auto it = h.basis.find(t + M.gens[j].second);
      if (it == h.basis.end()) continue;
      for (auto& l : it->second) labels.push_back(M.gen_labels[j] + "\xc2\xb7" + l);
    }
    out.basis[t] = labels;
  }
  for (int t : degs) {
    SparseMatrix d(out.field, out.dim(t + 1), out.dim(t));
    for (int j = 0; j < g; ++j) {
      int nj = M.gens[j].second;
      const Complex& h = w.val[M.gens[j].first];
      SparseMatrix hd = h.diff(t + nj);
      Rat s = sgn(nj);
      for (int r = 0; r < hd.rows; ++r)
        for (auto& [c, v] : hd.entries[r])
          if (off.count({t + 1, j})) d.add_to(off.at({t + 1, j}) + r, off.at({t, j}) + c, s * v);
      for (auto& [key, a] : M.dmat) {
        auto [i, j2] = key;
        if (j2 != j) continue;
        int Xi = M.gens[i].first, Xj = M.gens[j].first;
        int da = 1 + M.gens[i].second - nj;
        for (auto& [ia, ca] : a) {
          if (ca == 0) continue;
          SparseMatrix blk =
              w.action(A, Xi, Xj, da, ia).block(t + nj, w.val[Xj], w.val[Xi]);
          for (int r = 0; r < blk.rows; ++r)
            for (auto& [c, v] : blk.entries[r])
              d.add_to(off.at({t + 1, i}) + r, off.at({t, j}) + c, ca * v);
        }
      }
    }
    if (!d.is_zero()) out.set_diff(t, d);
  }
  out.prune();
  return out;
}

std::vector<std::string> check_finite_module(const DgCat& A, const FiniteModule& M) {
  std::vector<std::string> rep;
  for (auto& [key, a] : M.dmat) {
    auto [i, j] = key;
    if (i < 0 || j < 0 || i >= (int)M.gens.size() || j >= (int)M.gens.size()) {
      rep.push_back("differential entry indexes a missing generator");
      continue;
    }
    int da = 1 + M.gens[i].second - M.gens[j].second;
    const Complex& h = A.H(M.gens[i].first, M.gens[j].first);
    for (auto& [ia, ca] : a)
      if (ca != 0 && ia >= h.dim(da))
        rep.push_back("differential entry (" + std::to_string(i) + "," + std::to_string(j) +
                      ") outside the hom complex");
  }
  for (int Y = 0; Y < (int)A.objects.size(); ++Y)
    for (auto& line : check_complex(evaluate_module(A, M, Y)))
      rep.push_back("evaluation at " + A.objects[Y] + ": " + line);
  return rep;
}

Comodule tensor_with_P(const DgCat& A, const FiniteModule& M, const TiltingModule& T) {
  Comodule out;
  out.right = true;
  out.C = T.C.get();
  out.underlying = Complex(A.field);
  int g = (int)M.gens.size();
  std::map<int, SimplicialLevels> nm;
  for (int j = 0; j < g; ++j) {
    int X = M.gens[j].first;
    if (!nm.count(X))
      nm.emplace(X, T.normalised ? normalize(T.P_levels.at(X)) : T.P_levels.at(X));
  }
  std::set<int> degs;
  for (int j = 0; j < g; ++j)
    for (auto& [d, l] : T.P.at(M.gens[j].first).underlying.basis) degs.insert(d - M.gens[j].second);
  std::map<std::pair<int, int>, int> off;
  for (int t : degs) {
    std::vector<std::string> labels;
    for (int j = 0; j < g; ++j) {
      off[{t, j}] = (int)labels.size();
      const Complex& PU = T.P.at(M.gens[j].first).underlying;
      auto it = PU.basis.find(t + M.gens[j].second);
      if (it == PU.basis.end()) continue;
      for (auto& l : it->second) labels.push_back(M.gen_labels[j] + "\xc2\xb7" + l);
    }
    out.underlying.basis[t] = labels;
  }
  // differential: shifted internal parts plus the expanded matrix entries
  std::map<std::pair<int, int>, ChainMap> cross;
  for (auto& [key, a] : M.dmat) {
    auto [i, j] = key;
    int Xi = M.gens[i].first, Xj = M.gens[j].first;
    cross[key] = representable_action(A, nm.at(Xj), nm.at(Xi), T.P.at(Xj).underlying,
                                      T.P.at(Xi).underlying, Xi, Xj,
                                      1 + M.gens[i].second - M.gens[j].second, a);
  }
  for (int t : degs) {
    SparseMatrix d(A.field, out.underlying.dim(t + 1), out.underlying.dim(t));
    for (int j = 0; j < g; ++j) {
      int nj = M.gens[j].second;
      const Complex& PU = T.P.at(M.gens[j].first).underlying;
      SparseMatrix pd = PU.diff(t + nj);
      Rat s = sgn(nj);
      for (int r = 0; r < pd.rows; ++r)
        for (auto& [c, v] : pd.entries[r])
          if (off.count({t + 1, j})) d.add_to(off.at({t + 1, j}) + r, off.at({t, j}) + c, s * v);
      for (auto& [key, f] : cross) {
        auto [i, j2] = key;
        if (j2 != j) continue;
        const Complex& PUi = T.P.at(M.gens[i].first).underlying;
        SparseMatrix blk = f.block(t + nj, PU, PUi);
        for (int r = 0; r < blk.rows; ++r)
          for (auto& [c, v] : blk.entries[r])
            d.add_to(off.at({t + 1, i}) + r, off.at({t, j}) + c, v);
      }
    }
    if (!d.is_zero()) out.underlying.set_diff(t, d);
  }
  // coaction componentwise
  for (int j = 0; j < g; ++j) {
    int nj = M.gens[j].second;
    const Comodule& P = T.P.at(M.gens[j].first);
    for (auto& [b, terms] : P.mu) {
      BasisRef me{b.first - nj, off.at({b.first - nj, j}) + b.second};
      std::vector<DeltaTerm> shifted;
      for (auto& u : terms)
        shifted.push_back(
            {{u.left.first - nj, off.at({u.left.first - nj, j}) + u.left.second}, u.right, u.c});
      out.mu[me] = shifted;
    }
  }
  return out;
}

DgCat op_category(const DgCat& A) {
  DgCat B;
  B.field = A.field;
  B.objects = A.objects;
  B.id_idx = A.id_idx;
  B.nilpotence = A.nilpotence;
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      if (!A.H(Y, X).empty()) B.hom[{X, Y}] = A.H(Y, X);
  // a ∘op b = (-1)^{|a||b|} b ∘ a
  for (auto& [key, lc] : A.comp) {
    auto [Z, Y, X, db, ib, da, ia] = key;
    LinComb out;
    Rat s = sgn((long)da * db);
    for (auto& [i, c] : lc) out[i] = s * c;
    B.comp[{X, Y, Z, da, ia, db, ib}] = out;
  }
  return B;
}

FiniteModule predual(const DgCat& A, const FiniteModule& M) {
  (void)A;
  FiniteModule out;
  for (int j = 0; j < (int)M.gens.size(); ++j) {
    out.gens.push_back({M.gens[j].first, -M.gens[j].second});
    out.gen_labels.push_back(M.gen_labels[j] + "'");
  }
  for (auto& [key, a] : M.dmat) out.dmat[{key.second, key.first}] = a;
  return out;
}

namespace {

// coordinates of a comodule map g of degree i in the solution basis of H
std::vector<Rat> hom_coordinates(const HomComplexResult& H, const Complex& PU, const Complex& NU,
                                 int i, const ChainMap& g) {
  std::vector<std::vector<Rat>> cols(H.hom.dim(i));
  std::vector<Rat> rhs;
  for (auto& [n, lp] : PU.basis) {
    SparseMatrix gb = g.block(n, PU, NU);
    std::vector<SparseMatrix> fb;
    for (int k = 0; k < (int)cols.size(); ++k)
      fb.push_back(H.maps.at({i, k}).block(n, PU, NU));
    for (int pc = 0; pc < (int)lp.size(); ++pc)
      for (int nr = 0; nr < NU.dim(n + i); ++nr) {
        rhs.push_back(gb.get(nr, pc));
        for (int k = 0; k < (int)cols.size(); ++k) cols[k].push_back(fb[k].get(nr, pc));
      }
  }
  if (cols.empty()) {
    for (auto& v : rhs)
      if (v != 0) throw std::logic_error("comodule map outside the solution space");
    return {};
  }
  SparseMatrix B(PU.field, (int)rhs.size(), (int)cols.size());
  for (int k = 0; k < (int)cols.size(); ++k)
    for (int r = 0; r < (int)rhs.size(); ++r)
      if (cols[k][r] != 0) B.set(r, k, cols[k][r]);
  auto x = solve(B, rhs);
  if (!x) throw std::logic_error("comodule map outside the solution space");
  return *x;
}

}  // namespace

QuasiIsoCertificate counit_check(const DgCat& A, const TiltingModule& T, const Comodule& N,
                                 int lo, int hi, int depth) {
  if (lo > hi) throw std::invalid_argument("counit check: empty window");
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y) {
      const Complex& h = A.H(X, Y);
      for (auto& [d, l] : h.basis)
        if (d != 0 && !l.empty())
          throw std::invalid_argument("counit check: hom-degree-0 presentation required");
      if (!h.empty() && !h.diff(0).is_zero())
        throw std::invalid_argument("counit check: hom-degree-0 presentation required");
    }

  CobarResult cb = cobar_coresolution(N, depth);
  const Complex& TR = cb.R.underlying;
  QuasiIsoCertificate out;
  out.window_lo = lo;
  out.window_hi = hi;
  out.depth = depth;
  if (N.underlying.empty()) {
    for (int j = lo; j <= hi; ++j) {
      out.dims_source[j] = out.dims_target[j] = out.induced_ranks[j] = 0;
      out.verdict[j] = true;
    }
    return out;
  }

  std::map<int, SimplicialLevels> nm;
  for (int W = 0; W < nobj; ++W)
    nm.emplace(W, T.normalised ? normalize(T.P_levels.at(W)) : T.P_levels.at(W));

  int loH = TR.min_degree(), hiH = TR.max_degree();
  for (int W = 0; W < nobj; ++W) {
    const Complex& PU = T.P.at(W).underlying;
    loH = std::min(loH, TR.min_degree() - PU.max_degree());
    hiH = std::max(hiH, TR.max_degree() - PU.min_degree());
  }
  std::vector<HomComplexResult> G;
  for (int W = 0; W < nobj; ++W) G.push_back(comodule_hom_complex(T.P.at(W), cb.R, loH, hiH));

  // ambient ⊕_W Hom(P(W), N̂) ⊗ P(W), then the ⊗_A relations
  std::vector<Complex> tens;
  for (int W = 0; W < nobj; ++W) {
    Complex t = tensor(G[W].hom, T.P.at(W).underlying);
    for (auto& [n, labels] : t.basis)
      for (auto& l : labels) l += "@" + A.objects[W];
    tens.push_back(std::move(t));
  }
  Complex ambient(A.field);
  if (!tens.empty()) {
    ambient = tens[0];
    for (int W = 1; W < nobj; ++W) ambient = direct_sum(ambient, tens[W]);
  }
  auto offa = [&](int W, int n) {
    int o = 0;
    for (int k = 0; k < W; ++k) o += tens[k].dim(n);
    return o;
  };

  std::map<int, std::vector<std::vector<Rat>>> span;
  for (int W = 0; W < nobj; ++W)
    for (int Y = 0; Y < nobj; ++Y) {
      const Complex& h = A.H(W, Y);
      const Complex& PUW = T.P.at(W).underlying;
      const Complex& PUY = T.P.at(Y).underlying;
      for (int ia = 0; ia < h.dim(0); ++ia) {
        if (W == Y && A.id_idx.count(W) && A.id_idx.at(W) == ia) continue;
        ChainMap Pa = representable_action(A, nm.at(Y), nm.at(W), PUY, PUW, W, Y, 0,
                                           LinComb{{ia, Rat(1)}});
        for (auto& [i, lf] : G[W].hom.basis)
          for (int k = 0; k < (int)lf.size(); ++k) {
            ChainMap comp = compose_chain_maps(G[W].maps.at({i, k}), Pa, PUY, PUW, TR);
            std::vector<Rat> coords = hom_coordinates(G[Y], PUY, TR, i, comp);
            for (auto& [dp, lpb] : PUY.basis)
              for (int ip = 0; ip < (int)lpb.size(); ++ip) {
                int n = i + dp;
                std::vector<Rat> rel(ambient.dim(n), Rat(0));
                for (int k2 = 0; k2 < (int)coords.size(); ++k2)
                  if (coords[k2] != 0)
                    rel[offa(Y, n) + tensor_index(G[Y].hom, PUY, i, k2, dp, ip)] += coords[k2];
                SparseMatrix pb = Pa.block(dp, PUY, PUW);
                for (int q = 0; q < pb.rows; ++q) {
                  Rat v = pb.get(q, ip);
                  if (v != 0)
                    rel[offa(W, n) + tensor_index(G[W].hom, PUW, i, k, dp, q)] -= v;
                }
                bool nz = false;
                for (auto& v : rel) nz = nz || v != 0;
                if (nz) span[n].push_back(std::move(rel));
              }
          }
      }
    }
  Complex quo = quotient_complex(ambient, span).first;

  // evaluation on the ambient, then restricted to the surviving basis
  ChainMap eva;
  for (auto& [n, labels] : ambient.basis) {
    SparseMatrix m(A.field, TR.dim(n), (int)labels.size());
    for (int W = 0; W < nobj; ++W) {
      const Complex& PU = T.P.at(W).underlying;
      for (auto& [i, lf] : G[W].hom.basis)
        for (int k = 0; k < (int)lf.size(); ++k) {
          int dp = n - i;
          SparseMatrix fb = G[W].maps.at({i, k}).block(dp, PU, TR);
          for (int ip = 0; ip < PU.dim(dp); ++ip) {
            int col = offa(W, n) + tensor_index(G[W].hom, PU, i, k, dp, ip);
            for (int r = 0; r < fb.rows; ++r) {
              Rat v = fb.get(r, ip);
              if (v != 0) m.add_to(r, col, v);
            }
          }
        }
    }
    eva.blocks[n] = m;
  }
  ChainMap evq;
  for (auto& [n, labels] : quo.basis) {
    std::map<std::string, int> at;
    if (ambient.basis.count(n))
      for (int c = 0; c < ambient.dim(n); ++c) at[ambient.basis.at(n)[c]] = c;
    SparseMatrix m(A.field, TR.dim(n), (int)labels.size());
    const SparseMatrix& src = eva.blocks.at(n);
    for (int c = 0; c < (int)labels.size(); ++c) {
      int ac = at.at(labels[c]);
      for (int r = 0; r < src.rows; ++r) {
        Rat v = src.get(r, ac);
        if (v != 0) m.add_to(r, c, v);
      }
    }
    evq.blocks[n] = m;
  }

  // both truncations cut trust from below: the cobar certificate covers N's
  // support, the P certificates their windows
  int winlo = std::max(lo, cb.cert.window_lo);
  for (auto& [W, cert] : T.certs) winlo = std::max(winlo, cert.window_lo);
  if (winlo > hi)
    throw std::invalid_argument(
        "counit check: trusted sub-window is empty (raise the depth/truncation or the window)");
  out.window_lo = winlo;

  QuasiIsoCertificate inc = induced_map_on_cohomology(cb.inclusion, N.underlying, TR, winlo, hi);
  CohomologyResult HN = cohomology(N.underlying, winlo, hi);
  CohomologyResult Hq = cohomology(quo, winlo, hi);
  for (int j = winlo; j <= hi; ++j) {
    out.dims_source[j] = Hq.dims.at(j);
    out.dims_target[j] = HN.dims.at(j);
    out.induced_ranks[j] = inc.induced_ranks.at(j);
    // every class of N, pushed into the coresolution, must lie in the image
    // of the counit on cohomology: ev(Z^j(coend)) + B^j(R)
    std::vector<std::vector<Rat>> cols;
    SparseMatrix evb = evq.block(j, quo, TR);
    for (auto& v : kernel_basis(quo.diff(j))) cols.push_back(evb.apply(v));
    SparseMatrix dR = TR.diff(j - 1);
    for (int c = 0; c < dR.cols; ++c) {
      std::vector<Rat> v(TR.dim(j), Rat(0));
      for (int r = 0; r < dR.rows; ++r) v[r] = dR.get(r, c);
      cols.push_back(std::move(v));
    }
    SparseMatrix S = columns_to_matrix(A.field, TR.dim(j), cols);
    SparseMatrix incb = cb.inclusion.block(j, N.underlying, TR);
    bool hit = true;
    auto reps = HN.reps.find(j);
    if (reps != HN.reps.end())
      for (auto& rep : reps->second)
        if (!in_column_span(S, incb.apply(rep))) hit = false;
    out.verdict[j] = hit && inc.dims_source.at(j) == inc.induced_ranks.at(j);
  }
  return out;
}

namespace {

void require_degree_zero(const DgCat& A, const FibreFunctor& w, const char* what) {
  for (int X = 0; X < (int)A.objects.size(); ++X) {
    for (int Y = 0; Y < (int)A.objects.size(); ++Y)
      for (auto& [d, l] : A.H(X, Y).basis)
        if (d != 0 && !l.empty())
          throw std::invalid_argument(std::string(what) + ": homs must sit in degree 0");
    for (auto& [d, l] : w.val[X].basis)
      if (d != 0 && !l.empty())
        throw std::invalid_argument(std::string(what) + ": fibres must sit in degree 0");
  }
}

// shared core of the two level products: slotwise ⊠ on the inner factors,
// caller-provided handling of the two coefficient slots
LevelProduct monoidal_product_core(
    const DgCat& A, const MonoidalData& m, const SimplicialLevels& lv,
    const std::function<LinComb(int Xn, int Yn, int Zn, int ir, int ir2)>& rprod,
    const std::function<LinComb(int X0, int Y0, int Z0, int il, int il2)>& lprod,
    std::pair<int, int> unit_coef, bool symmetric) {
  LevelProduct prod;
  prod.symmetric = symmetric;
  {
    StringElt u;
    u.tuple = {m.unit};
    u.coef = unit_coef;
    auto f = lv.find(0, u);
    if (f.second < 0) throw std::logic_error("monoidal product: unit string missing");
    prod.unit = {0, f.second};
  }
  auto bx = [&](int X, int Y) { return m.obj_tensor[X][Y]; };
  for (int n = 0; n <= lv.L; ++n) {
    if (!lv.strings[n].count(0)) continue;
    const std::vector<StringElt>& ss = lv.strings[n].at(0);
    for (int ix = 0; ix < (int)ss.size(); ++ix)
      for (int iy = 0; iy < (int)ss.size(); ++iy) {
        const StringElt& sx = ss[ix];
        const StringElt& sy = ss[iy];
        std::vector<int> tuple(n + 1);
        for (int k = 0; k <= n; ++k) tuple[k] = bx(sx.tuple[k], sy.tuple[k]);
        std::vector<LinComb> slot(n);
        bool zero = false;
        for (int k = 0; k < n && !zero; ++k) {
          auto it = m.mor.find({sx.tuple[k], sx.tuple[k + 1], 0, sx.inner[k].second, sy.tuple[k],
                                sy.tuple[k + 1], 0, sy.inner[k].second});
          if (it == m.mor.end())
            zero = true;
          else
            slot[k] = it->second;
        }
        if (zero) continue;
        auto [rx, lx] = tensor_split(lv.F.slotR->at(sx.tuple[n]), lv.F.slotL->at(sx.tuple[0]),
                                     sx.coef.first, sx.coef.second);
        auto [ry, ly] = tensor_split(lv.F.slotR->at(sy.tuple[n]), lv.F.slotL->at(sy.tuple[0]),
                                     sy.coef.first, sy.coef.second);
        LinComb rc = rprod(sx.tuple[n], sy.tuple[n], tuple[n], rx.second, ry.second);
        LinComb lc = lprod(sx.tuple[0], sy.tuple[0], tuple[0], lx.second, ly.second);
        if (rc.empty() || lc.empty()) continue;
        std::map<BasisRef, Rat> out;
        std::vector<int> pos(n, 0);
        while (true) {
          Rat c(1);
          StringElt t;
          t.tuple = tuple;
          bool dead = false;
          for (int k = 0; k < n; ++k) {
            auto it = slot[k].begin();
            std::advance(it, pos[k]);
            if (it->second == 0) dead = true;
            c *= it->second;
            t.inner.push_back({0, it->first});
          }
          if (!dead)
            for (auto& [irz, cr] : rc)
              for (auto& [ilz, cl] : lc) {
                if (cr == 0 || cl == 0) continue;
                t.coef = {0, tensor_index(lv.F.slotR->at(tuple[n]), lv.F.slotL->at(tuple[0]), 0,
                                          irz, 0, ilz)};
                auto f = lv.find(n, t);
                if (f.second < 0)
                  throw std::logic_error("monoidal product: product string missing");
                Rat& v = out[{0, f.second}];
                v = lv.field.normalize(v + c * cr * cl);
              }
          int k = n - 1;
          while (k >= 0 && ++pos[k] == (int)slot[k].size()) pos[k--] = 0;
          if (k < 0) break;
        }
        for (auto it = out.begin(); it != out.end();)
          it = (it->second == 0) ? out.erase(it) : std::next(it);
        if (!out.empty()) prod.table[{n, 0, ix, 0, iy}] = out;
      }
  }
  return prod;
}

}  // namespace

LevelProduct monoidal_level_product(const DgCat& A, const FibreFunctor& w, const MonoidalData& m,
                                    const MonoidalFibreData& mw, const SimplicialLevels& lv) {
  require_degree_zero(A, w, "monoidal level product");
  if (w.val[m.unit].dim(0) != 1)
    throw std::invalid_argument("monoidal level product: ω(unit) must be one-dimensional");
  // cache the strong-monoidality matrices and their inverses per object pair
  std::map<std::pair<int, int>, SparseMatrix> iso, inv;
  auto iso_of = [&](int X, int Y) -> const SparseMatrix& {
    auto it = iso.find({X, Y});
    if (it != iso.end()) return it->second;
    Complex t = tensor(w.val[X], w.val[Y]);
    SparseMatrix M = mw.iso.at({X, Y}).block(0, t, w.val[m.obj_tensor[X][Y]]);
    return iso.emplace(std::pair<int, int>{X, Y}, M).first->second;
  };
  auto inv_of = [&](int X, int Y) -> const SparseMatrix& {
    auto it = inv.find({X, Y});
    if (it != inv.end()) return it->second;
    const SparseMatrix& M = iso_of(X, Y);
    SparseMatrix I(M.field, M.cols, M.rows);
    for (int t = 0; t < M.rows; ++t) {
      std::vector<Rat> e(M.rows, Rat(0));
      e[t] = Rat(1);
      auto x = solve(M, e);
      if (!x) throw std::invalid_argument("monoidal level product: iso is not invertible");
      for (int r = 0; r < (int)x->size(); ++r)
        if ((*x)[r] != 0) I.set(r, t, (*x)[r]);
    }
    return inv.emplace(std::pair<int, int>{X, Y}, I).first->second;
  };
  auto rprod = [&](int Xn, int Yn, int Zn, int ir, int ir2) {
    (void)Zn;
    const SparseMatrix& M = iso_of(Xn, Yn);
    int col = tensor_index(w.val[Xn], w.val[Yn], 0, ir, 0, ir2);
    LinComb out;
    for (int r = 0; r < M.rows; ++r) {
      Rat v = M.get(r, col);
      if (v != 0) out[r] = v;
    }
    return out;
  };
  // dual slot: φ⊗ψ goes to (φ⊗ψ)∘iso^{-1}, i.e. a row of the inverse
  auto lprod = [&](int X0, int Y0, int Z0, int il, int il2) {
    (void)Z0;
    const SparseMatrix& I = inv_of(X0, Y0);
    int row = tensor_index(w.val[X0], w.val[Y0], 0, il, 0, il2);
    LinComb out;
    for (int t = 0; t < I.cols; ++t) {
      Rat v = I.get(row, t);
      if (v != 0) out[t] = v;
    }
    return out;
  };
  std::pair<int, int> ucoef{
      0, tensor_index(w.val[m.unit], dual(w.val[m.unit]), 0, 0, 0, 0)};
  return monoidal_product_core(A, m, lv, rprod, lprod, ucoef, m.symmetric);
}

ChainMap shuffle_chain_map(const SimplicialLevels& lv, const LevelProduct& prod, bool normalized) {
  SimplicialLevels nm = normalized ? normalize(lv) : lv;
  auto [tot, win] = hochschild_total(nm);
  (void)win;
  DgCoalgebra C0;
  C0.underlying = tot;
  C0 = shuffle_bialgebra(lv, prod, std::move(C0), normalized);
  Complex T = tensor(tot, tot);
  ChainMap f;
  f.degree = 0;
  for (auto& [t, labels] : T.basis)
    f.blocks.emplace(t, SparseMatrix(tot.field, tot.dim(t), (int)labels.size()));
  for (auto& [key, out] : C0.star) {
    auto& [a, b] = key;
    int col = tensor_index(tot, tot, a.first, a.second, b.first, b.second);
    for (auto& [r, c] : out) f.blocks.at(a.first + b.first).add_to(r.second, col, c);
  }
  return f;
}

MonoidalAssemblyResult monoidal_assembly(const Preset& p, int L, bool normalised) {
  if (!p.monoidal || !p.monoidal_fibre)
    throw std::invalid_argument("monoidal assembly: preset has no monoidal data");
  {
    auto rep = validate_monoidal(p.A, *p.monoidal);
    auto rep2 = validate_monoidal_fibre(p.A, p.omega, *p.monoidal, *p.monoidal_fibre);
    rep.insert(rep.end(), rep2.begin(), rep2.end());
    if (!rep.empty()) throw std::invalid_argument("monoidal assembly: " + rep[0]);
  }
  require_degree_zero(p.A, p.omega, "monoidal assembly");
  L = resolve_cutoff(p.A, L, "monoidal assembly");

  MonoidalAssemblyResult out;
  TannakianDualResult td = tannakian_dual(p.A, p.omega, L, normalised);
  LevelProduct prod = monoidal_level_product(p.A, p.omega, *p.monoidal, *p.monoidal_fibre,
                                             td.levels);
  out.C = shuffle_bialgebra(td.levels, prod, std::move(td.C), normalised);
  out.levels = td.levels;

  // lax-monoidality structure map on P(𝟙): the same shuffle extension of the
  // level-wise ⋆, with the representable slot multiplied through ⊠
  const MonoidalData& m = *p.monoidal;
  int u = m.unit;
  SimplicialLevels lvP = hochschild_levels(
      p.A, product_bimodule(p.A, module_omega(p.A, p.omega), module_hom_from(p.A, u)), L);
  auto rprod = [&](int Xn, int Yn, int Zn, int ir, int ir2) {
    (void)Zn;
    Complex t = tensor(p.omega.val[Xn], p.omega.val[Yn]);
    SparseMatrix M = p.monoidal_fibre->iso.at({Xn, Yn})
                         .block(0, t, p.omega.val[m.obj_tensor[Xn][Yn]]);
    int col = tensor_index(p.omega.val[Xn], p.omega.val[Yn], 0, ir, 0, ir2);
    LinComb outc;
    for (int r = 0; r < M.rows; ++r) {
      Rat v = M.get(r, col);
      if (v != 0) outc[r] = v;
    }
    return outc;
  };
  auto lprod = [&](int X0, int Y0, int Z0, int il, int il2) {
    (void)Z0;
    auto it = m.mor.find({u, X0, 0, il, u, Y0, 0, il2});
    return it == m.mor.end() ? LinComb{} : it->second;
  };
  std::pair<int, int> ucoef{
      0, tensor_index(p.omega.val[u], p.A.H(u, u), 0, 0, 0, p.A.id_idx.at(u))};
  LevelProduct prodP = monoidal_product_core(p.A, m, lvP, rprod, lprod, ucoef, m.symmetric);
  out.structure_map = shuffle_chain_map(lvP, prodP, normalised);

  SimplicialLevels nmP = normalised ? normalize(lvP) : lvP;
  Complex totP = hochschild_total(nmP).first;
  Complex TP = tensor(totP, totP);
  int lo = TP.empty() ? 0 : std::max(TP.min_degree(), -L + 1);
  int hi = TP.empty() ? -1 : TP.max_degree();
  out.structure_cert = induced_map_on_cohomology(out.structure_map, TP, totP, lo, hi);
  return out;
}

}  // namespace dgtk
