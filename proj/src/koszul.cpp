#include "dgtk/koszul.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace dgtk {

namespace {

const Complex kZero{};

Rat sgn(long e) { return (e % 2 == 0) ? Rat(1) : Rat(-1); }

std::string pair_name(const std::vector<std::string>& objects, int X, int Y) {
  return objects[X] + "," + objects[Y];
}

// All tensor words over S with letters from `hom`, total weight <= L,
// generated by length (shorter first), extending on the right with targets,
// degrees and indices in increasing order.  Deterministic.
std::vector<KWord> enumerate_words(int nobj, const std::map<std::pair<int, int>, Complex>& hom,
                                   const std::function<long(int, int, int, int)>& wof, int L) {
  std::vector<KWord> all;
  std::vector<std::pair<KWord, long>> frontier;
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y) {
      auto it = hom.find({X, Y});
      if (it == hom.end()) continue;
      for (auto& [deg, labels] : it->second.basis)
        for (int i = 0; i < (int)labels.size(); ++i) {
          long w = wof(X, Y, deg, i);
          if (w > L) continue;
          KWord kw;
          kw.objs = {X, Y};
          kw.letters = {{deg, i}};
          frontier.push_back({kw, w});
        }
    }
  while (!frontier.empty()) {
    for (auto& [kw, w] : frontier) all.push_back(kw);
    std::vector<std::pair<KWord, long>> next;
    for (auto& [kw, w] : frontier) {
      int Y = kw.objs.back();
      for (int Z = 0; Z < nobj; ++Z) {
        auto it = hom.find({Y, Z});
        if (it == hom.end()) continue;
        for (auto& [deg, labels] : it->second.basis)
          for (int i = 0; i < (int)labels.size(); ++i) {
            long w2 = w + wof(Y, Z, deg, i);
            if (w2 > L) continue;
            KWord ext = kw;
            ext.objs.push_back(Z);
            ext.letters.push_back({deg, i});
            next.push_back({ext, w2});
          }
      }
    }
    frontier = std::move(next);
  }
  return all;
}

}  // namespace

std::vector<int> KWord::key() const {
  std::vector<int> k;
  k.push_back((int)letters.size());
  k.insert(k.end(), objs.begin(), objs.end());
  for (auto& [d, i] : letters) {
    k.push_back(d);
    k.push_back(i);
  }
  return k;
}

const Complex& PositiveDgAlgebraOverS::H(int X, int Y) const {
  auto it = hom.find({X, Y});
  return it == hom.end() ? kZero : it->second;
}

LinComb PositiveDgAlgebraOverS::mul(int X, int Y, int Z, int da, int ia, int db, int ib) const {
  auto it = comp.find({X, Y, Z, da, ia, db, ib});
  return it == comp.end() ? LinComb{} : it->second;
}

long PositiveDgAlgebraOverS::weight_of(int X, int Y, int deg, int idx) const {
  auto it = weight.find({X, Y, deg, idx});
  return it == weight.end() ? 1 : it->second;
}

const Complex& ConilpotentDgCoalgebra::at(int X, int Y) const {
  auto it = val.find({X, Y});
  return it == val.end() ? kZero : it->second;
}

long ConilpotentDgCoalgebra::weight_of(int X, int Y, int deg, int idx) const {
  auto it = weight.find({X, Y, deg, idx});
  return it == weight.end() ? 1 : it->second;
}

std::vector<std::string> validate_positive_algebra(const PositiveDgAlgebraOverS& A) {
  std::vector<std::string> out;
  for (auto& [XY, c] : A.hom) {
    std::string where = "A(" + pair_name(A.objects, XY.first, XY.second) + ")";
    if (!c.empty() && c.min_degree() < 1) out.push_back(where + ": degree below 1");
    for (auto& line : check_complex(c)) out.push_back(where + ": " + line);
    for (auto& [deg, labels] : c.basis)
      for (int i = 0; i < (int)labels.size(); ++i)
        if (A.weight_of(XY.first, XY.second, deg, i) < 1)
          out.push_back(where + ": weight of " + labels[i] + " below 1");
  }
  // Product weight bound: weights may only drop under multiplication.
  for (auto& [k, lc] : A.comp) {
    long wa = A.weight_of(k[0], k[1], k[3], k[4]) + A.weight_of(k[1], k[2], k[5], k[6]);
    for (auto& [j, v] : lc)
      if (A.weight_of(k[0], k[2], k[3] + k[5], j) > wa)
        out.push_back("product raises weight at " + pair_name(A.objects, k[0], k[2]));
  }
  auto lc_add = [&](LinComb& acc, const LinComb& t, const Rat& s) {
    for (auto& [i, v] : t) {
      Rat base = acc.count(i) ? acc[i] : Rat(0);
      Rat w = A.field.normalize(base + s * v);
      if (w == 0)
        acc.erase(i);
      else
        acc[i] = w;
    }
  };
  auto mul_lin = [&](int X, int Y, int Z, int da, const LinComb& a, int db, const LinComb& b) {
    LinComb acc;
    for (auto& [ia, ca] : a)
      for (auto& [ib, cb] : b) lc_add(acc, A.mul(X, Y, Z, da, ia, db, ib), ca * cb);
    return acc;
  };
  auto dvec = [&](const Complex& c, int deg, int idx) {
    LinComb acc;
    SparseMatrix d = c.diff(deg);
    for (int r = 0; r < d.rows; ++r) {
      Rat e = d.get(r, idx);
      if (e != 0) acc[r] = e;
    }
    return acc;
  };
  int nobj = (int)A.objects.size();
  for (int X = 0; X < nobj; ++X)
    for (int Y = 0; Y < nobj; ++Y)
      for (int Z = 0; Z < nobj; ++Z) {
        const Complex &ab = A.H(X, Y), &bc = A.H(Y, Z);
        for (auto& [da, la] : ab.basis)
          for (int ia = 0; ia < (int)la.size(); ++ia)
            for (auto& [db, lb] : bc.basis)
              for (int ib = 0; ib < (int)lb.size(); ++ib) {
                // Leibniz: d(ab) = da.b + (-1)^{|a|} a.db
                LinComb prod = A.mul(X, Y, Z, da, ia, db, ib);
                LinComb lhs;
                for (auto& [j, v] : prod) lc_add(lhs, dvec(A.H(X, Z), da + db, j), v);
                LinComb rhs = mul_lin(X, Y, Z, da + 1, dvec(ab, da, ia), db, {{ib, Rat(1)}});
                lc_add(rhs, mul_lin(X, Y, Z, da, {{ia, Rat(1)}}, db + 1, dvec(bc, db, ib)),
                       sgn(da));
                lc_add(lhs, rhs, Rat(-1));
                if (!lhs.empty())
                  out.push_back("Leibniz fails at " + la[ia] + "." + lb[ib]);
                // associativity against every third factor
                for (int W = 0; W < nobj; ++W) {
                  const Complex& cd = A.H(Z, W);
                  for (auto& [dc, lci] : cd.basis)
                    for (int ic = 0; ic < (int)lci.size(); ++ic) {
                      LinComb left = mul_lin(X, Z, W, da + db, prod, dc, {{ic, Rat(1)}});
                      LinComb right = mul_lin(X, Y, W, da, {{ia, Rat(1)}}, db + dc,
                                              A.mul(Y, Z, W, db, ib, dc, ic));
                      lc_add(left, right, Rat(-1));
                      if (!left.empty())
                        out.push_back("associativity fails at " + la[ia] + "." + lb[ib] + "." +
                                      lci[ic]);
                    }
                }
              }
      }
  return out;
}

std::vector<std::string> check_conilpotent_coalgebra(const ConilpotentDgCoalgebra& C) {
  std::vector<std::string> out;
  for (auto& [XY, c] : C.val) {
    std::string where = "C(" + pair_name(C.objects, XY.first, XY.second) + ")";
    if (!c.empty() && c.min_degree() < 0) out.push_back(where + ": degree below 0");
    for (auto& line : check_complex(c)) out.push_back(where + ": " + line);
    for (auto& [deg, labels] : c.basis)
      for (int i = 0; i < (int)labels.size(); ++i)
        if (C.weight_of(XY.first, XY.second, deg, i) < 1)
          out.push_back(where + ": weight of " + labels[i] + " below 1");
  }
  using Triple = std::tuple<int, int, BasisRef, BasisRef, BasisRef>;
  for (auto& [XY, c] : C.val) {
    int X = XY.first, Z = XY.second;
    for (auto& [deg, labels] : c.basis)
      for (int i = 0; i < (int)labels.size(); ++i) {
        std::string who = labels[i];
        auto it = C.delta.find({X, Z, deg, i});
        std::vector<CoTerm> terms = it == C.delta.end() ? std::vector<CoTerm>{} : it->second;
        long w = C.weight_of(X, Z, deg, i);
        std::map<Triple, Rat> assoc;
        std::map<std::tuple<int, BasisRef, BasisRef>, Rat> chain;
        for (auto& t : terms) {
          if (t.left.first + t.right.first != deg)
            out.push_back(who + ": comultiplication term degree mismatch");
          if (C.weight_of(X, t.mid, t.left.first, t.left.second) +
                  C.weight_of(t.mid, Z, t.right.first, t.right.second) !=
              w)
            out.push_back(who + ": comultiplication does not split the weight");
          // (Delta x 1) Delta - (1 x Delta) Delta
          auto lit = C.delta.find({X, t.mid, t.left.first, t.left.second});
          if (lit != C.delta.end())
            for (auto& s : lit->second)
              assoc[{s.mid, t.mid, s.left, s.right, t.right}] += t.c * s.c;
          auto rit = C.delta.find({t.mid, Z, t.right.first, t.right.second});
          if (rit != C.delta.end())
            for (auto& s : rit->second)
              assoc[{t.mid, s.mid, t.left, s.left, s.right}] -= t.c * s.c;
          // (d x 1 + (-1)^{|left|} 1 x d) of the term
          SparseMatrix dl = C.at(X, t.mid).diff(t.left.first);
          for (int r = 0; r < dl.rows; ++r) {
            Rat e = dl.get(r, t.left.second);
            if (e != 0) chain[{t.mid, {t.left.first + 1, r}, t.right}] += t.c * e;
          }
          SparseMatrix dr = C.at(t.mid, Z).diff(t.right.first);
          for (int r = 0; r < dr.rows; ++r) {
            Rat e = dr.get(r, t.right.second);
            if (e != 0) chain[{t.mid, t.left, {t.right.first + 1, r}}] += t.c * e * sgn(t.left.first);
          }
        }
        for (auto& [k, v] : assoc)
          if (C.field.normalize(v) != 0) {
            out.push_back(who + ": coassociativity fails");
            break;
          }
        // minus Delta(db)
        SparseMatrix d = c.diff(deg);
        for (int r = 0; r < d.rows; ++r) {
          Rat e = d.get(r, i);
          if (e == 0) continue;
          auto dit = C.delta.find({X, Z, deg + 1, r});
          if (dit == C.delta.end()) continue;
          for (auto& t : dit->second) chain[{t.mid, t.left, t.right}] -= e * t.c;
        }
        for (auto& [k, v] : chain)
          if (C.field.normalize(v) != 0) {
            out.push_back(who + ": comultiplication is not a chain map");
            break;
          }
      }
  }
  return out;
}

BarResult bar_beta(const PositiveDgAlgebraOverS& A, int L) {
  BarResult out;
  out.B.field = A.field;
  out.B.objects = A.objects;
  auto wof = [&](int X, int Y, int d, int i) { return A.weight_of(X, Y, d, i); };
  auto words = enumerate_words((int)A.objects.size(), A.hom, wof, L);

  auto word_degree = [&](const KWord& w) {
    int d = 0;
    for (auto& [dk, ik] : w.letters) d += dk - 1;
    return d;
  };
  auto word_weight = [&](const KWord& w) {
    long s = 0;
    for (size_t k = 0; k < w.letters.size(); ++k)
      s += A.weight_of(w.objs[k], w.objs[k + 1], w.letters[k].first, w.letters[k].second);
    return s;
  };
  auto word_label = [&](const KWord& w) {
    std::ostringstream os;
    os << "[";
    for (size_t k = 0; k < w.letters.size(); ++k) {
      if (k) os << "|";
      os << A.H(w.objs[k], w.objs[k + 1]).basis.at(w.letters[k].first)[w.letters[k].second];
    }
    os << "]";
    return os.str();
  };

  for (auto& w : words) {
    std::pair<int, int> pr{w.objs.front(), w.objs.back()};
    int deg = word_degree(w);
    Complex& c = out.B.val.try_emplace(pr, Complex(A.field)).first->second;
    int idx = c.dim(deg);
    c.basis[deg].push_back(word_label(w));
    out.words[pr][deg].push_back(w);
    out.index[pr][w.key()] = {deg, idx};
    out.B.weight[{pr.first, pr.second, deg, idx}] = word_weight(w);
    if (w.letters.size() == 1)
      out.gen_of[{pr.first, pr.second, w.letters[0].first, w.letters[0].second}] = {deg, idx};
  }

  // deconcatenation comultiplication and the (d_A, composition) differential
  for (auto& [pr, perdeg] : out.words) {
    Complex& c = out.B.val.at(pr);
    std::map<int, SparseMatrix> dmat;
    for (auto& [deg, ws] : perdeg)
      dmat[deg] = SparseMatrix::zero(A.field, c.dim(deg + 1), c.dim(deg));
    for (auto& [deg, ws] : perdeg)
      for (int col = 0; col < (int)ws.size(); ++col) {
        const KWord& w = ws[col];
        int n = (int)w.letters.size();
        for (int r = 1; r < n; ++r) {
          KWord lw, rw;
          lw.objs.assign(w.objs.begin(), w.objs.begin() + r + 1);
          lw.letters.assign(w.letters.begin(), w.letters.begin() + r);
          rw.objs.assign(w.objs.begin() + r, w.objs.end());
          rw.letters.assign(w.letters.begin() + r, w.letters.end());
          BasisRef lr = out.index.at({w.objs.front(), w.objs[r]}).at(lw.key());
          BasisRef rr = out.index.at({w.objs[r], w.objs.back()}).at(rw.key());
          out.B.delta[{pr.first, pr.second, deg, col}].push_back({w.objs[r], lr, rr, Rat(1)});
        }
        long e = 0;  // shifted degree of the prefix
        for (int k = 0; k < n; ++k) {
          int X = w.objs[k], Y = w.objs[k + 1];
          auto [dk, ik] = w.letters[k];
          SparseMatrix dA = A.H(X, Y).diff(dk);
          for (int r2 = 0; r2 < dA.rows; ++r2) {
            Rat v = dA.get(r2, ik);
            if (v == 0) continue;
            KWord nw = w;
            nw.letters[k] = {dk + 1, r2};
            BasisRef ref = out.index.at(pr).at(nw.key());
            dmat[deg].add_to(ref.second, col, A.field.normalize(Rat(-1) * sgn(e) * v));
          }
          e += dk - 1;
          if (k + 1 < n) {
            auto [dn, in] = w.letters[k + 1];
            for (auto& [j, v] : A.mul(X, Y, w.objs[k + 2], dk, ik, dn, in)) {
              KWord nw;
              nw.objs = w.objs;
              nw.objs.erase(nw.objs.begin() + k + 1);
              nw.letters = w.letters;
              nw.letters[k] = {dk + dn, j};
              nw.letters.erase(nw.letters.begin() + k + 1);
              auto iit = out.index.at(pr).find(nw.key());
              if (iit == out.index.at(pr).end())
                throw std::logic_error("bar_beta: composition left the truncation");
              dmat[deg].add_to(iit->second.second, col, A.field.normalize(sgn(e) * v));
            }
          }
        }
      }
    for (auto& [deg, m] : dmat)
      if (!m.is_zero()) c.set_diff(deg, std::move(m));
  }
  return out;
}

CobarAlgebraResult cobar_beta_star(const ConilpotentDgCoalgebra& C, int L) {
  CobarAlgebraResult out;
  out.A.field = C.field;
  out.A.objects = C.objects;
  auto wof = [&](int X, int Y, int d, int i) { return C.weight_of(X, Y, d, i); };
  auto words = enumerate_words((int)C.objects.size(), C.val, wof, L);

  auto word_degree = [&](const KWord& w) {
    int d = 0;
    for (auto& [dk, ik] : w.letters) d += dk + 1;
    return d;
  };
  auto word_weight = [&](const KWord& w) {
    long s = 0;
    for (size_t k = 0; k < w.letters.size(); ++k)
      s += C.weight_of(w.objs[k], w.objs[k + 1], w.letters[k].first, w.letters[k].second);
    return s;
  };
  auto word_label = [&](const KWord& w) {
    std::ostringstream os;
    os << "(";
    for (size_t k = 0; k < w.letters.size(); ++k) {
      if (k) os << "|";
      os << C.at(w.objs[k], w.objs[k + 1]).basis.at(w.letters[k].first)[w.letters[k].second];
    }
    os << ")";
    return os.str();
  };

  std::map<std::pair<int, int>, std::map<int, long>> wgt;  // per ref, for the product cutoff
  for (auto& w : words) {
    std::pair<int, int> pr{w.objs.front(), w.objs.back()};
    int deg = word_degree(w);
    Complex& c = out.A.hom.try_emplace(pr, Complex(C.field)).first->second;
    int idx = c.dim(deg);
    c.basis[deg].push_back(word_label(w));
    out.words[pr][deg].push_back(w);
    out.index[pr][w.key()] = {deg, idx};
    out.A.weight[{pr.first, pr.second, deg, idx}] = word_weight(w);
    if (w.letters.size() == 1)
      out.gen_of[{pr.first, pr.second, w.letters[0].first, w.letters[0].second}] = {deg, idx};
  }

  // concatenation product, zero past the weight cutoff (a two-sided ideal)
  for (auto& [pra, perdega] : out.words)
    for (auto& [da, wsa] : perdega)
      for (int ia = 0; ia < (int)wsa.size(); ++ia)
        for (auto& [prb, perdegb] : out.words) {
          if (prb.first != pra.second) continue;
          for (auto& [db, wsb] : perdegb)
            for (int ib = 0; ib < (int)wsb.size(); ++ib) {
              const KWord &wa = wsa[ia], &wb = wsb[ib];
              KWord cat;
              cat.objs = wa.objs;
              cat.objs.insert(cat.objs.end(), wb.objs.begin() + 1, wb.objs.end());
              cat.letters = wa.letters;
              cat.letters.insert(cat.letters.end(), wb.letters.begin(), wb.letters.end());
              auto iit = out.index.at({pra.first, prb.second}).find(cat.key());
              if (iit == out.index.at({pra.first, prb.second}).end()) continue;
              out.A.comp[{pra.first, pra.second, prb.second, da, ia, db, ib}] = {
                  {iit->second.second, Rat(1)}};
            }
        }

  // differential d_C + Delta_C
  for (auto& [pr, perdeg] : out.words) {
    Complex& c = out.A.hom.at(pr);
    std::map<int, SparseMatrix> dmat;
    for (auto& [deg, ws] : perdeg)
      dmat[deg] = SparseMatrix::zero(C.field, c.dim(deg + 1), c.dim(deg));
    for (auto& [deg, ws] : perdeg)
      for (int col = 0; col < (int)ws.size(); ++col) {
        const KWord& w = ws[col];
        int n = (int)w.letters.size();
        long e = 0;  // shifted degree of the prefix
        for (int k = 0; k < n; ++k) {
          int X = w.objs[k], Y = w.objs[k + 1];
          auto [dk, ik] = w.letters[k];
          SparseMatrix dC = C.at(X, Y).diff(dk);
          for (int r2 = 0; r2 < dC.rows; ++r2) {
            Rat v = dC.get(r2, ik);
            if (v == 0) continue;
            KWord nw = w;
            nw.letters[k] = {dk + 1, r2};
            BasisRef ref = out.index.at(pr).at(nw.key());
            dmat[deg].add_to(ref.second, col, C.field.normalize(Rat(-1) * sgn(e) * v));
          }
          auto dit = C.delta.find({X, Y, dk, ik});
          if (dit != C.delta.end())
            for (auto& t : dit->second) {
              KWord nw;
              nw.objs = w.objs;
              nw.objs.insert(nw.objs.begin() + k + 1, t.mid);
              nw.letters = w.letters;
              nw.letters[k] = t.left;
              nw.letters.insert(nw.letters.begin() + k + 1, t.right);
              auto iit = out.index.at(pr).find(nw.key());
              if (iit == out.index.at(pr).end())
                throw std::logic_error("cobar_beta_star: comultiplication left the truncation");
              dmat[deg].add_to(iit->second.second, col,
                               C.field.normalize(sgn(e + t.left.first) * t.c));
            }
          e += dk + 1;
        }
      }
    for (auto& [deg, m] : dmat)
      if (!m.is_zero()) c.set_diff(deg, std::move(m));
  }
  return out;
}

std::vector<std::string> tangent_check(const BarResult& bar, const PositiveDgAlgebraOverS& A) {
  std::vector<std::string> out;
  for (auto& [pr, c] : bar.B.val) {
    for (auto& [deg, labels] : c.basis) {
      // stack all comultiplication components into one matrix
      std::map<std::tuple<int, BasisRef, BasisRef>, int> rows;
      std::vector<std::tuple<int, int, Rat>> ent;
      for (int i = 0; i < (int)labels.size(); ++i) {
        auto it = bar.B.delta.find({pr.first, pr.second, deg, i});
        if (it == bar.B.delta.end()) continue;
        for (auto& t : it->second) {
          auto rit = rows.try_emplace({t.mid, t.left, t.right}, (int)rows.size()).first;
          ent.push_back({rit->second, i, t.c});
        }
      }
      SparseMatrix m(bar.B.field, (int)rows.size(), (int)labels.size());
      for (auto& [r, i, v] : ent) m.add_to(r, i, v);
      int prim = (int)labels.size() - rank(m);
      int expected = A.H(pr.first, pr.second).dim(deg + 1);
      if (prim != expected)
        out.push_back("tan beta(A)(" + pair_name(A.objects, pr.first, pr.second) + ") degree " +
                      std::to_string(deg) + ": " + std::to_string(prim) + " primitives, expected " +
                      std::to_string(expected));
    }
  }
  return out;
}

namespace {

// Block-diagonal accumulation of (source, target, degree-0 map) summands.
struct Bundle {
  Complex src, tgt;
  ChainMap f;
  explicit Bundle(FieldSpec F) : src(F), tgt(F) {}

  void add(const Complex& s, const Complex& t, const ChainMap& g) {
    std::set<int> degs;
    for (auto& [n, b] : src.basis) degs.insert(n);
    for (auto& [n, b] : s.basis) degs.insert(n);
    std::map<int, SparseMatrix> nb;
    for (int n : degs) {
      SparseMatrix m(src.field, tgt.dim(n) + t.dim(n), src.dim(n) + s.dim(n));
      SparseMatrix a = f.block(n, src, tgt), b = g.block(n, s, t);
      for (int r = 0; r < a.rows; ++r)
        for (auto& [cidx, v] : a.entries[r]) m.set(r, cidx, v);
      for (int r = 0; r < b.rows; ++r)
        for (auto& [cidx, v] : b.entries[r]) m.set(tgt.dim(n) + r, src.dim(n) + cidx, v);
      if (!m.is_zero()) nb[n] = std::move(m);
    }
    src = direct_sum(src, s);
    tgt = direct_sum(tgt, t);
    f.blocks = std::move(nb);
  }
};

}  // namespace

QuasiIsoCertificate unit_check(const ConilpotentDgCoalgebra& C, int L, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("unit_check: empty window");
  CobarAlgebraResult cb = cobar_beta_star(C, L);
  BarResult bb = bar_beta(cb.A, L);

  std::set<std::pair<int, int>> pairs;
  for (auto& [pr, c] : C.val) pairs.insert(pr);
  for (auto& [pr, c] : bb.B.val) pairs.insert(pr);

  Bundle bundle(C.field);
  for (auto& pr : pairs) {
    const Complex& s = C.at(pr.first, pr.second);
    Complex t = bb.B.val.count(pr) ? bb.B.val.at(pr) : Complex(C.field);
    ChainMap u;
    for (auto& [deg, labels] : s.basis) {
      SparseMatrix m(C.field, t.dim(deg), (int)labels.size());
      for (int i = 0; i < (int)labels.size(); ++i) {
        // iterated reduced comultiplication, letterized through beta*(C)
        std::vector<std::pair<KWord, Rat>> terms;
        KWord seed;
        seed.objs = {pr.first, pr.second};
        seed.letters = {{deg, i}};
        terms.push_back({seed, Rat(1)});
        while (!terms.empty()) {
          for (auto& [w, coef] : terms) {
            KWord img;
            img.objs = w.objs;
            for (size_t k = 0; k < w.letters.size(); ++k)
              img.letters.push_back(cb.gen_of.at(
                  {w.objs[k], w.objs[k + 1], w.letters[k].first, w.letters[k].second}));
            auto pit = bb.index.find(pr);
            if (pit == bb.index.end()) continue;
            auto iit = pit->second.find(img.key());
            if (iit == pit->second.end()) continue;  // weight past the cutoff
            m.add_to(iit->second.second, i, coef);
          }
          // split the last letter once more
          std::vector<std::pair<KWord, Rat>> next;
          for (auto& [w, coef] : terms) {
            int k = (int)w.letters.size() - 1;
            auto dit =
                C.delta.find({w.objs[k], w.objs[k + 1], w.letters[k].first, w.letters[k].second});
            if (dit == C.delta.end()) continue;
            for (auto& t2 : dit->second) {
              KWord nw = w;
              nw.objs.insert(nw.objs.begin() + k + 1, t2.mid);
              nw.letters[k] = t2.left;
              nw.letters.push_back(t2.right);
              next.push_back({nw, C.field.normalize(coef * t2.c)});
            }
          }
          terms = std::move(next);
        }
      }
      if (!m.is_zero()) u.blocks[deg] = std::move(m);
    }
    bundle.add(s, t, u);
  }
  if (!check_chain_map(bundle.f, bundle.src, bundle.tgt))
    throw std::logic_error("unit_check: unit is not a chain map");
  return induced_map_on_cohomology(bundle.f, bundle.src, bundle.tgt, lo, hi);
}

QuasiIsoCertificate counit_check(const PositiveDgAlgebraOverS& A, int L, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("counit_check: empty window");
  BarResult bar = bar_beta(A, L);
  CobarAlgebraResult cb = cobar_beta_star(bar.B, L);

  std::set<std::pair<int, int>> pairs;
  for (auto& [pr, c] : A.hom) pairs.insert(pr);
  for (auto& [pr, c] : cb.A.hom) pairs.insert(pr);

  Bundle bundle(A.field);
  for (auto& pr : pairs) {
    Complex s = cb.A.hom.count(pr) ? cb.A.hom.at(pr) : Complex(A.field);
    const Complex& t = A.H(pr.first, pr.second);
    ChainMap v;
    if (cb.words.count(pr))
      for (auto& [deg, ws] : cb.words.at(pr)) {
        SparseMatrix m(A.field, t.dim(deg), (int)ws.size());
        for (int col = 0; col < (int)ws.size(); ++col) {
          const KWord& w = ws[col];
          // only words all of whose letters are one-letter bar words survive
          std::vector<std::pair<int, int>> as;
          bool ok = true;
          for (size_t k = 0; k < w.letters.size() && ok; ++k) {
            const KWord& bw = bar.words.at({w.objs[k], w.objs[k + 1]})
                                  .at(w.letters[k].first)[w.letters[k].second];
            if (bw.letters.size() != 1)
              ok = false;
            else
              as.push_back(bw.letters[0]);
          }
          if (!ok) continue;
          LinComb cur{{as[0].second, Rat(1)}};
          int dcur = as[0].first;
          for (size_t k = 1; k < as.size(); ++k) {
            LinComb next;
            for (auto& [j, cf] : cur)
              for (auto& [j2, cf2] :
                   A.mul(w.objs[0], w.objs[k], w.objs[k + 1], dcur, j, as[k].first, as[k].second)) {
                Rat base = next.count(j2) ? next[j2] : Rat(0);
                Rat nv = A.field.normalize(base + cf * cf2);
                if (nv == 0)
                  next.erase(j2);
                else
                  next[j2] = nv;
              }
            cur = std::move(next);
            dcur += as[k].first;
          }
          for (auto& [j, cf] : cur) m.add_to(j, col, cf);
        }
        if (!m.is_zero()) v.blocks[deg] = std::move(m);
      }
    bundle.add(s, t, v);
  }
  if (!check_chain_map(bundle.f, bundle.src, bundle.tgt))
    throw std::logic_error("counit_check: counit is not a chain map");
  return induced_map_on_cohomology(bundle.f, bundle.src, bundle.tgt, lo, hi);
}

}  // namespace dgtk
