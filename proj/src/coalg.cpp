#include "dgtk/coalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace dgtk {

namespace {

using Elt = std::map<BasisRef, Rat>;

void add_term(Elt& e, const BasisRef& b, const Rat& c) {
  if (c == 0) return;
  Rat v = e.count(b) ? e[b] : Rat(0);
  v += c;
  if (v == 0)
    e.erase(b);
  else
    e[b] = v;
}

Elt d_of(const Complex& c, const BasisRef& b) {
  Elt out;
  SparseMatrix d = c.diff(b.first);
  for (int r = 0; r < d.rows; ++r) {
    Rat v = d.get(r, b.second);
    if (v != 0) out[{b.first + 1, r}] = v;
  }
  return out;
}

std::string label_of(const Complex& c, const BasisRef& b) {
  return c.basis.at(b.first)[b.second];
}

bool elt_equal(const Elt& a, const Elt& b) {
  Elt d = a;
  for (auto& [k, v] : b) add_term(d, k, -v);
  return d.empty();
}

}  // namespace

int DgCoalgebra::level_of(const BasisRef& b) const {
  auto it = level.find(b);
  return it == level.end() ? -1 : it->second;
}

std::optional<std::map<BasisRef, Rat>> DgCoalgebra::product(const BasisRef& a,
                                                            const BasisRef& b) const {
  if (!has_product) return std::nullopt;
  if (!level.empty() && max_level >= 0) {
    int la = level_of(a), lb = level_of(b);
    if (la < 0 || lb < 0 || la + lb > max_level) return std::nullopt;
  }
  auto it = star.find({a, b});
  return it == star.end() ? std::map<BasisRef, Rat>{} : it->second;
}

std::vector<std::string> check_coalgebra(const DgCoalgebra& C) {
  std::vector<std::string> rep;
  const Complex& U = C.underlying;
  auto note = [&](const BasisRef& b, const std::string& what) {
    if (rep.size() < 200) rep.push_back(what + " at " + label_of(U, b));
  };
  auto delta_of = [&](const BasisRef& b) -> const std::vector<DeltaTerm>& {
    static const std::vector<DeltaTerm> none;
    auto it = C.delta.find(b);
    return it == C.delta.end() ? none : it->second;
  };
  auto eps_of = [&](const BasisRef& b) -> Rat {
    auto it = C.counit.find(b);
    return it == C.counit.end() ? Rat(0) : it->second;
  };

  std::vector<BasisRef> all;
  for (auto& [deg, labels] : U.basis)
    for (int i = 0; i < (int)labels.size(); ++i) all.push_back({deg, i});

  for (auto& b : all) {
    // degree and level bookkeeping of the comultiplication
    for (auto& t : delta_of(b)) {
      if (t.left.first + t.right.first != b.first) note(b, "comultiplication degree mismatch");
      if (!C.level.empty() &&
          C.level_of(t.left) + C.level_of(t.right) != C.level_of(b))
        note(b, "comultiplication level mismatch");
    }
    // counit axioms
    Elt le, re;
    for (auto& t : delta_of(b)) {
      add_term(le, t.right, t.c * eps_of(t.left));
      add_term(re, t.left, t.c * eps_of(t.right));
    }
    Elt self{{b, Rat(1)}};
    if (!elt_equal(le, self)) note(b, "left counit axiom fails");
    if (!elt_equal(re, self)) note(b, "right counit axiom fails");
    if (eps_of(b) != 0 && b.first != 0) note(b, "counit supported outside degree 0");
    // coassociativity
    std::map<std::tuple<BasisRef, BasisRef, BasisRef>, Rat> acc1, acc2;
    for (auto& t : delta_of(b)) {
      for (auto& u : delta_of(t.left)) {
        Rat& v = acc1[{u.left, u.right, t.right}];
        v += t.c * u.c;
      }
      for (auto& u : delta_of(t.right)) {
        Rat& v = acc2[{t.left, u.left, u.right}];
        v += t.c * u.c;
      }
    }
    bool coassoc = true;
    for (auto& [k, v] : acc1) {
      Rat w = acc2.count(k) ? acc2[k] : Rat(0);
      if (v != w) coassoc = false;
    }
    for (auto& [k, v] : acc2)
      if (!acc1.count(k) && v != 0) coassoc = false;
    if (!coassoc) note(b, "coassociativity fails");
    // chain-map identity for the comultiplication
    std::map<std::pair<BasisRef, BasisRef>, Rat> lhs, rhs;
    for (auto& [b2, c2] : d_of(U, b))
      for (auto& t : delta_of(b2)) {
        Rat& v = lhs[{t.left, t.right}];
        v += c2 * t.c;
      }
    for (auto& t : delta_of(b)) {
      for (auto& [l2, c2] : d_of(U, t.left)) {
        Rat& v = rhs[{BasisRef{t.left.first + 1, l2.second}, t.right}];
        v += t.c * c2;
      }
      Rat sgn(t.left.first % 2 != 0 ? -1 : 1);
      for (auto& [r2, c2] : d_of(U, t.right)) {
        Rat& v = rhs[{t.left, BasisRef{t.right.first + 1, r2.second}}];
        v += t.c * c2 * sgn;
      }
    }
    bool chain = true;
    for (auto& [k, v] : lhs) {
      Rat w = rhs.count(k) ? rhs[k] : Rat(0);
      if (v != w) chain = false;
    }
    for (auto& [k, v] : rhs)
      if (!lhs.count(k) && v != 0) chain = false;
    if (!chain) note(b, "comultiplication chain-map identity fails");
    // counit kills boundaries
    {
      Rat s(0);
      if (b.first == -1)
        for (auto& [b2, c2] : d_of(U, b)) s += c2 * eps_of(b2);
      if (s != 0) note(b, "counit is not a chain map");
    }
  }

  if (C.has_product) {
    auto star_elt = [&](const Elt& x, const Elt& y) -> std::optional<Elt> {
      Elt out;
      for (auto& [a, ca] : x)
        for (auto& [b, cb] : y) {
          auto p = C.product(a, b);
          if (!p) return std::nullopt;
          for (auto& [r, cr] : *p) add_term(out, r, ca * cb * cr);
        }
      return out;
    };
    for (auto& b : all) {
      auto pu = C.product(C.unit, b);
      auto pu2 = C.product(b, C.unit);
      if (!pu || !elt_equal(Elt(pu->begin(), pu->end()), Elt{{b, Rat(1)}}))
        note(b, "left unit fails");
      if (!pu2 || !elt_equal(Elt(pu2->begin(), pu2->end()), Elt{{b, Rat(1)}}))
        note(b, "right unit fails");
    }
    for (auto& a : all)
      for (auto& b : all) {
        auto p = C.product(a, b);
        if (!p) continue;
        Elt ab(p->begin(), p->end());
        // counit is an algebra map
        Rat eab(0);
        for (auto& [r, c] : ab) eab += c * eps_of(r);
        if (eab != eps_of(a) * eps_of(b)) note(a, "counit is not multiplicative");
        // Leibniz for the product
        Elt lhsd;
        for (auto& [r, c] : ab)
          for (auto& [r2, c2] : d_of(U, r)) add_term(lhsd, r2, c * c2);
        std::optional<Elt> t1 = star_elt(d_of(U, a), Elt{{b, Rat(1)}});
        std::optional<Elt> t2 = star_elt(Elt{{a, Rat(1)}}, d_of(U, b));
        if (t1 && t2) {
          Elt rhsd = *t1;
          Rat sgn(a.first % 2 != 0 ? -1 : 1);
          for (auto& [r, c] : *t2) add_term(rhsd, r, sgn * c);
          if (!elt_equal(lhsd, rhsd)) note(a, "product Leibniz identity fails");
        }
        // graded commutativity when symmetric
        if (C.symmetric) {
          auto q = C.product(b, a);
          if (q) {
            Elt ba(q->begin(), q->end());
            Rat sgn((a.first * b.first) % 2 != 0 ? -1 : 1);
            Elt want;
            for (auto& [r, c] : ba) add_term(want, r, sgn * c);
            if (!elt_equal(ab, want)) note(a, "graded commutativity fails");
          }
        }
        // comultiplication is an algebra map: Δ(a⋆b) = Δa ⋆ Δb
        std::map<std::pair<BasisRef, BasisRef>, Rat> lhs, rhs;
        for (auto& [r, c] : ab)
          for (auto& t : delta_of(r)) {
            Rat& v = lhs[{t.left, t.right}];
            v += c * t.c;
          }
        bool defined = true;
        for (auto& t : delta_of(a))
          for (auto& u : delta_of(b)) {
            auto p1 = C.product(t.left, u.left);
            auto p2 = C.product(t.right, u.right);
            if (!p1 || !p2) {
              defined = false;
              continue;
            }
            Rat sgn((t.right.first * u.left.first) % 2 != 0 ? -1 : 1);
            for (auto& [x, cx] : *p1)
              for (auto& [y, cy] : *p2) {
                Rat& v = rhs[{x, y}];
                v += t.c * u.c * sgn * cx * cy;
              }
          }
        if (defined) {
          bool ok = true;
          for (auto& [k, v] : lhs) {
            Rat w = rhs.count(k) ? rhs[k] : Rat(0);
            if (v != w) ok = false;
          }
          for (auto& [k, v] : rhs)
            if (!lhs.count(k) && v != 0) ok = false;
          if (!ok) note(a, "comultiplication is not an algebra map");
        }
        // associativity over all c
        for (auto& c : all) {
          auto pab_c = star_elt(ab, Elt{{c, Rat(1)}});
          auto pbc = C.product(b, c);
          if (!pab_c || !pbc) continue;
          auto pa_bc = star_elt(Elt{{a, Rat(1)}}, Elt(pbc->begin(), pbc->end()));
          if (!pa_bc) continue;
          if (!elt_equal(*pab_c, *pa_bc)) note(a, "product associativity fails");
        }
      }
  }
  return rep;
}

DgCoalgebra free_dg_coalgebra(int L) {
  DgCoalgebra C;
  C.underlying = Complex(FieldSpec::rationals());
  for (int n = 0; n <= L; ++n) {
    std::string lab = n == 0 ? "1" : (n == 1 ? "x" : "x^" + std::to_string(n));
    C.underlying.basis[-n] = {lab};
    C.level[{-n, 0}] = n;
    std::vector<DeltaTerm> dl;
    for (int i = 0; i <= n; ++i) dl.push_back({{-i, 0}, {i - n, 0}, Rat(1)});
    C.delta[{-n, 0}] = dl;
  }
  C.counit[{0, 0}] = Rat(1);
  C.max_level = L;
  return C;
}

std::vector<std::string> check_comodule(const Comodule& M) {
  std::vector<std::string> rep;
  if (!M.C) return {"comodule has no coalgebra"};
  const DgCoalgebra& C = *M.C;
  const Complex& U = M.underlying;
  auto note = [&](const BasisRef& b, const std::string& what) {
    if (rep.size() < 200) rep.push_back(what + " at " + label_of(U, b));
  };
  auto mu_of = [&](const BasisRef& b) -> const std::vector<DeltaTerm>& {
    static const std::vector<DeltaTerm> none;
    auto it = M.mu.find(b);
    return it == M.mu.end() ? none : it->second;
  };
  auto delta_of = [&](const BasisRef& b) -> const std::vector<DeltaTerm>& {
    static const std::vector<DeltaTerm> none;
    auto it = C.delta.find(b);
    return it == C.delta.end() ? none : it->second;
  };
  auto eps_of = [&](const BasisRef& b) -> Rat {
    auto it = C.counit.find(b);
    return it == C.counit.end() ? Rat(0) : it->second;
  };
  // in DeltaTerm (left,right): right comodule = (m', c); left = (c, m')
  for (auto& [deg, labels] : U.basis)
    for (int i = 0; i < (int)labels.size(); ++i) {
      BasisRef b{deg, i};
      Elt ce;
      for (auto& t : mu_of(b)) {
        if (t.left.first + t.right.first != deg) note(b, "coaction degree mismatch");
        add_term(ce, M.right ? t.left : t.right,
                 t.c * eps_of(M.right ? t.right : t.left));
      }
      if (!elt_equal(ce, Elt{{b, Rat(1)}})) note(b, "coaction counit axiom fails");
      // coassociativity
      std::map<std::tuple<BasisRef, BasisRef, BasisRef>, Rat> acc1, acc2;
      for (auto& t : mu_of(b)) {
        if (M.right) {
          for (auto& u : mu_of(t.left)) {
            Rat& v = acc1[{u.left, u.right, t.right}];
            v += t.c * u.c;
          }
          for (auto& u : delta_of(t.right)) {
            Rat& v = acc2[{t.left, u.left, u.right}];
            v += t.c * u.c;
          }
        } else {
          for (auto& u : mu_of(t.right)) {
            Rat& v = acc1[{t.left, u.left, u.right}];
            v += t.c * u.c;
          }
          for (auto& u : delta_of(t.left)) {
            Rat& v = acc2[{u.left, u.right, t.right}];
            v += t.c * u.c;
          }
        }
      }
      bool ok = true;
      for (auto& [k, v] : acc1) {
        Rat w = acc2.count(k) ? acc2[k] : Rat(0);
        if (v != w) ok = false;
      }
      for (auto& [k, v] : acc2)
        if (!acc1.count(k) && v != 0) ok = false;
      if (!ok) note(b, "coaction coassociativity fails");
      // chain map
      std::map<std::pair<BasisRef, BasisRef>, Rat> lhs, rhs;
      for (auto& [b2, c2] : d_of(U, b))
        for (auto& t : mu_of(b2)) {
          Rat& v = lhs[{t.left, t.right}];
          v += c2 * t.c;
        }
      for (auto& t : mu_of(b)) {
        const Complex& LC = M.right ? U : C.underlying;
        const Complex& RC = M.right ? C.underlying : U;
        for (auto& [l2, c2] : d_of(LC, t.left)) {
          Rat& v = rhs[{l2, t.right}];
          v += t.c * c2;
        }
        Rat sgn(t.left.first % 2 != 0 ? -1 : 1);
        for (auto& [r2, c2] : d_of(RC, t.right)) {
          Rat& v = rhs[{t.left, r2}];
          v += t.c * c2 * sgn;
        }
      }
      bool chain = true;
      for (auto& [k, v] : lhs) {
        Rat w = rhs.count(k) ? rhs[k] : Rat(0);
        if (v != w) chain = false;
      }
      for (auto& [k, v] : rhs)
        if (!lhs.count(k) && v != 0) chain = false;
      if (!chain) note(b, "coaction chain-map identity fails");
    }
  return rep;
}

Comodule coalgebra_as_comodule(const DgCoalgebra& C, bool right) {
  Comodule M;
  M.right = right;
  M.underlying = C.underlying;
  M.mu = C.delta;
  M.C = &C;
  return M;
}

Comodule trivial_comodule(const DgCoalgebra& C, const BasisRef& g, bool right) {
  Comodule M;
  M.right = right;
  M.underlying = Complex(C.underlying.field);
  M.underlying.basis[0] = {"k"};
  if (right)
    M.mu[{0, 0}] = {{BasisRef{0, 0}, g, Rat(1)}};
  else
    M.mu[{0, 0}] = {{g, BasisRef{0, 0}, Rat(1)}};
  M.C = &C;
  return M;
}

Complex cotensor(const Comodule& N, const Comodule& M) {
  if (N.C != M.C) throw std::invalid_argument("cotensor: coalgebra mismatch");
  if (!N.right || M.right) throw std::invalid_argument("cotensor: need (right, left) comodules");
  const DgCoalgebra& C = *N.C;
  Complex T = tensor(N.underlying, M.underlying);
  Complex CM = tensor(C.underlying, M.underlying);
  Complex T3 = tensor(N.underlying, CM);
  std::map<int, std::vector<std::vector<Rat>>> span;
  for (auto& [deg, labels] : T.basis) {
    SparseMatrix v(T.field, T3.dim(deg), (int)labels.size());
    int col = 0;
    for (auto& [dn, ln] : N.underlying.basis)
      for (int in = 0; in < (int)ln.size(); ++in) {
        int dm = deg - dn;
        for (int im = 0; im < M.underlying.dim(dm); ++im, ++col) {
          // mu_N ⊗ id
          auto itn = N.mu.find({dn, in});
          if (itn != N.mu.end())
            for (auto& t : itn->second) {
              int inner = tensor_index(C.underlying, M.underlying, t.right.first, t.right.second,
                                       dm, im);
              int row = tensor_index(N.underlying, CM, t.left.first, t.left.second,
                                     t.right.first + dm, inner);
              v.add_to(row, col, t.c);
            }
          // id ⊗ mu_M
          auto itm = M.mu.find({dm, im});
          if (itm != M.mu.end())
            for (auto& t : itm->second) {
              int inner = tensor_index(C.underlying, M.underlying, t.left.first, t.left.second,
                                       t.right.first, t.right.second);
              int row = tensor_index(N.underlying, CM, dn, in, deg - dn, inner);
              v.add_to(row, col, -t.c);
            }
        }
      }
    auto ker = kernel_basis(v);
    if (!ker.empty()) span[deg] = ker;
  }
  return subcomplex(T, span).first;
}

HomComplexResult comodule_hom_complex(const Comodule& P, const Comodule& N, int lo, int hi) {
  if (P.C != N.C) throw std::invalid_argument("comodule hom: coalgebra mismatch");
  if (!P.right || !N.right) throw std::invalid_argument("comodule hom: right comodules expected");
  const FieldSpec& F = P.underlying.field;
  const Complex& PU = P.underlying;
  const Complex& NU = N.underlying;

  HomComplexResult res;
  res.hom.field = F;

  // unknown layout at degree i: (source degree n asc, P index asc, N index asc)
  struct Slot {
    int n, pc, nr;
  };
  auto layout = [&](int i) {
    std::vector<Slot> slots;
    for (auto& [n, lp] : PU.basis)
      for (int pc = 0; pc < (int)lp.size(); ++pc)
        for (int nr = 0; nr < NU.dim(n + i); ++nr) slots.push_back({n, pc, nr});
    return slots;
  };

  std::map<int, std::vector<std::vector<Rat>>> sols;
  for (int i = lo; i <= hi; ++i) {
    auto slots = layout(i);
    if (slots.empty()) {
      sols[i] = {};
      continue;
    }
    // rows: for each P basis element, each (N basis, C basis) pair in N⊗C
    std::map<std::tuple<int, int, BasisRef, BasisRef>, int> rowof;
    std::vector<std::map<int, Rat>> rows;
    auto row_idx = [&](int pn, int pi, const BasisRef& nb, const BasisRef& cb) {
      auto key = std::make_tuple(pn, pi, nb, cb);
      auto it = rowof.find(key);
      if (it != rowof.end()) return it->second;
      int r = (int)rows.size();
      rowof[key] = r;
      rows.push_back({});
      return r;
    };
    for (int u = 0; u < (int)slots.size(); ++u) {
      const Slot& s = slots[u];
      // mu_N(f(p)): p = (s.n, s.pc) contributes through f(p) = (s.n+i, s.nr)
      auto itn = N.mu.find({s.n + i, s.nr});
      if (itn != N.mu.end())
        for (auto& t : itn->second) {
          int r = row_idx(s.n, s.pc, t.left, t.right);
          Rat v = rows[r].count(u) ? rows[r][u] : Rat(0);
          rows[r][u] = v + t.c;
        }
      // -(f ⊗ id) mu_P(p') for every p' whose coaction hits p = (s.n, s.pc)
    }
    for (auto& [pn, lp] : PU.basis)
      for (int pi = 0; pi < (int)lp.size(); ++pi) {
        auto itp = P.mu.find({pn, pi});
        if (itp == P.mu.end()) continue;
        for (auto& t : itp->second) {
          // term (p', c): contributes -c * f(p') ⊗ c-part
          for (int nr = 0; nr < NU.dim(t.left.first + i); ++nr) {
            // locate unknown (t.left -> nr)
            int u = -1, k = 0;
            for (auto& s2 : slots) {
              if (s2.n == t.left.first && s2.pc == t.left.second && s2.nr == nr) {
                u = k;
                break;
              }
              ++k;
            }
            if (u < 0) continue;
            int r = row_idx(pn, pi, {t.left.first + i, nr}, t.right);
            Rat v = rows[r].count(u) ? rows[r][u] : Rat(0);
            rows[r][u] = v - t.c;
          }
        }
      }
    SparseMatrix sys(F, (int)rows.size(), (int)slots.size());
    for (int r = 0; r < (int)rows.size(); ++r)
      for (auto& [c, v] : rows[r]) sys.set(r, c, F.normalize(v));
    sols[i] = kernel_basis(sys);
  }

  for (int i = lo; i <= hi; ++i) {
    int n = (int)sols[i].size();
    if (n == 0) continue;
    std::vector<std::string> labels;
    auto slots = layout(i);
    for (int k = 0; k < n; ++k) {
      labels.push_back("f" + std::to_string(i) + "_" + std::to_string(k));
      ChainMap f;
      f.degree = i;
      std::map<int, SparseMatrix> blocks;
      for (auto& [pn, lp] : PU.basis)
        blocks.emplace(pn, SparseMatrix(F, NU.dim(pn + i), (int)lp.size()));
      for (int u = 0; u < (int)slots.size(); ++u)
        if (sols[i][k][u] != 0) blocks.at(slots[u].n).set(slots[u].nr, slots[u].pc,
                                                          sols[i][k][u]);
      f.blocks = blocks;
      res.maps[{i, k}] = f;
    }
    res.hom.basis[i] = labels;
  }
  // differential: df = d_N f - (-1)^i f d_P, expressed in the next solution basis
  for (int i = lo; i < hi; ++i) {
    if (res.hom.dim(i) == 0 || sols[i + 1].empty()) continue;
    auto slots1 = layout(i + 1);
    SparseMatrix basis1(PU.field, (int)slots1.size(), (int)sols[i + 1].size());
    for (int k = 0; k < (int)sols[i + 1].size(); ++k)
      for (int u = 0; u < (int)slots1.size(); ++u)
        if (sols[i + 1][k][u] != 0) basis1.set(u, k, sols[i + 1][k][u]);
    SparseMatrix dm(PU.field, res.hom.dim(i + 1), res.hom.dim(i));
    for (int k = 0; k < res.hom.dim(i); ++k) {
      const ChainMap& f = res.maps.at({i, k});
      std::vector<Rat> dfv(slots1.size(), Rat(0));
      for (int u = 0; u < (int)slots1.size(); ++u) {
        const Slot& s = slots1[u];
        // (d_N f)(p): block at s.n composed with d into degree s.n+i+1
        Rat v(0);
        SparseMatrix fb = f.block(s.n, PU, NU);
        SparseMatrix dn = NU.diff(s.n + i);
        for (int m = 0; m < fb.rows; ++m) v += dn.get(s.nr, m) * fb.get(m, s.pc);
        // -(-1)^i (f d_P)(p)
        SparseMatrix dp = PU.diff(s.n);
        SparseMatrix fb2 = f.block(s.n + 1, PU, NU);
        Rat w(0);
        for (int m = 0; m < dp.rows; ++m) w += fb2.get(s.nr, m) * dp.get(m, s.pc);
        v += (i % 2 != 0 ? w : -w);
        dfv[u] = PU.field.normalize(v);
      }
      auto x = solve(basis1, dfv);
      if (!x) throw std::logic_error("comodule hom: differential leaves the solution space");
      for (int r = 0; r < (int)x->size(); ++r)
        if ((*x)[r] != 0) dm.set(r, k, (*x)[r]);
    }
    if (!dm.is_zero()) res.hom.set_diff(i, dm);
  }
  res.hom.prune();
  return res;
}

CobarResult cobar_coresolution(const Comodule& M, int depth) {
  if (!M.right) throw std::invalid_argument("cobar coresolution: right comodule expected");
  const DgCoalgebra& C = *M.C;
  const Complex& MU = M.underlying;
  const Complex& CU = C.underlying;
  const FieldSpec& F = MU.field;

  // reduced term n = M ⊗ C̄^{⊗n} ⊗ C, basis enumerated lexicographically;
  // C̄ is the coaugmentation complement (level >= 1, or ker ε on the basis
  // when no level grading is present).  Cofaces are projected back into the
  // reduced cells, which realizes the conormalized complex.
  struct Cell {
    BasisRef m;
    std::vector<BasisRef> cs;
  };
  auto eps0 = [&](const BasisRef& b) {
    auto it = C.counit.find(b);
    return it == C.counit.end() || it->second == 0;
  };
  auto reduced = [&](const BasisRef& b) {
    return C.level.empty() ? eps0(b) : C.level_of(b) >= 1;
  };
  std::vector<std::map<int, std::vector<Cell>>> cells(depth + 1);  // per n, internal degree
  std::vector<std::map<std::vector<int>, std::pair<int, int>>> idx(depth + 1);
  auto key_of = [](const Cell& c) {
    std::vector<int> k{c.m.first, c.m.second};
    for (auto& b : c.cs) {
      k.push_back(b.first);
      k.push_back(b.second);
    }
    return k;
  };
  std::vector<BasisRef> cbasis, rbasis, mbasis;
  for (auto& [d, l] : CU.basis)
    for (int i = 0; i < (int)l.size(); ++i) {
      cbasis.push_back({d, i});
      if (reduced({d, i})) rbasis.push_back({d, i});
    }
  for (auto& [d, l] : MU.basis)
    for (int i = 0; i < (int)l.size(); ++i) mbasis.push_back({d, i});
  for (int n = 0; n <= depth; ++n) {
    if (n > 0 && rbasis.empty()) break;
    std::vector<int> pos(n + 1, 0);
    for (auto& mb : mbasis) {
      std::fill(pos.begin(), pos.end(), 0);
      if (cbasis.empty()) break;
      while (true) {
        Cell c;
        c.m = mb;
        int deg = mb.first;
        for (int k = 0; k < n; ++k) {
          c.cs.push_back(rbasis[pos[k]]);
          deg += rbasis[pos[k]].first;
        }
        c.cs.push_back(cbasis[pos[n]]);
        deg += cbasis[pos[n]].first;
        int at = (int)cells[n][deg].size();
        cells[n][deg].push_back(c);
        idx[n][key_of(c)] = {deg, at};
        int k = n;
        while (k >= 0 && ++pos[k] == (int)(k == n ? cbasis.size() : rbasis.size()))
          pos[k--] = 0;
        if (k < 0) break;
      }
    }
  }

  // assemble the total complex: internal degree j at term n sits in degree j+n
  Complex tot(F);
  // offset of term n inside total degree t
  std::map<std::pair<int, int>, int> offset;
  {
    std::set<int> degs;
    for (int n = 0; n <= depth; ++n)
      for (auto& [j, cc] : cells[n]) degs.insert(j + n);
    for (int t : degs) {
      std::vector<std::string> ls;
      for (int n = 0; n <= depth; ++n) {
        offset[{t, n}] = (int)ls.size();
        auto it = cells[n].find(t - n);
        if (it == cells[n].end()) continue;
        for (auto& c : it->second) {
          std::ostringstream os;
          os << n << '|' << label_of(MU, c.m);
          for (auto& b : c.cs) os << "\xe2\x8a\x97" << label_of(CU, b);
          ls.push_back(os.str());
        }
      }
      tot.basis[t] = ls;
    }
  }
  auto total_of = [&](int n, const Cell& c) -> std::pair<int, int> {
    auto it = idx[n].find(key_of(c));
    if (it == idx[n].end()) return {0, -1};
    auto [j, k] = it->second;
    return {j + n, offset.at({j + n, n}) + k};
  };

  auto delta_of = [&](const BasisRef& b) -> const std::vector<DeltaTerm>& {
    static const std::vector<DeltaTerm> none;
    auto it = C.delta.find(b);
    return it == C.delta.end() ? none : it->second;
  };

  // differential
  for (auto& [t, labels] : tot.basis) {
    SparseMatrix d(F, tot.dim(t + 1), (int)labels.size());
    for (int n = 0; n <= depth; ++n) {
      auto it = cells[n].find(t - n);
      if (it == cells[n].end()) continue;
      int base = offset.at({t, n});
      for (int k = 0; k < (int)it->second.size(); ++k) {
        const Cell& c = it->second[k];
        int col = base + k;
        // internal Koszul differential, twisted by level parity so the
        // coaction on the last factor is a chain map
        Rat tw(n % 2 != 0 ? -1 : 1);
        long before = 0;
        {
          for (auto& [m2, v] : d_of(MU, c.m)) {
            Cell c2 = c;
            c2.m = m2;
            auto [tt, row] = total_of(n, c2);
            (void)tt;
            if (row >= 0) d.add_to(row, col, tw * v);
          }
          before = c.m.first;
          for (int f = 0; f <= n; ++f) {
            Rat sgn(before % 2 != 0 ? -1 : 1);
            for (auto& [b2, v] : d_of(CU, c.cs[f])) {
              Cell c2 = c;
              c2.cs[f] = b2;
              auto [tt, row] = total_of(n, c2);
              (void)tt;
              if (row >= 0) d.add_to(row, col, tw * sgn * v);
            }
            before += c.cs[f].first;
          }
        }
        if (n == depth) continue;
        // cosimplicial part, alternating cofaces
        // delta_0 = mu_M ⊗ id
        auto itm = M.mu.find(c.m);
        if (itm != M.mu.end())
          for (auto& u : itm->second) {
            Cell c2;
            c2.m = u.left;
            c2.cs = c.cs;
            c2.cs.insert(c2.cs.begin(), u.right);
            auto [tt, row] = total_of(n + 1, c2);
            (void)tt;
            if (row >= 0) d.add_to(row, col, u.c);
          }
        // delta_{f+1} = Δ on the (f+1)-st C factor
        for (int f = 0; f <= n; ++f) {
          Rat sgn(((f + 1) % 2 != 0) ? -1 : 1);
          for (auto& u : delta_of(c.cs[f])) {
            Cell c2 = c;
            c2.cs[f] = u.left;
            c2.cs.insert(c2.cs.begin() + f + 1, u.right);
            auto [tt, row] = total_of(n + 1, c2);
            (void)tt;
            if (row >= 0) d.add_to(row, col, sgn * u.c);
          }
        }
      }
    }
    if (!d.is_zero()) tot.set_diff(t, d);
  }
  tot.prune();

  CobarResult out;
  out.R.right = true;
  out.R.C = M.C;
  out.R.underlying = tot;
  // coaction: Δ on the last factor
  for (int n = 0; n <= depth; ++n)
    for (auto& [j, cc] : cells[n])
      for (int k = 0; k < (int)cc.size(); ++k) {
        const Cell& c = cc[k];
        BasisRef me{j + n, offset.at({j + n, n}) + k};
        std::vector<DeltaTerm> terms;
        for (auto& u : delta_of(c.cs[n])) {
          Cell c2 = c;
          c2.cs[n] = u.left;
          auto [tt, row] = total_of(n, c2);
          if (row >= 0) terms.push_back({BasisRef{tt, row}, u.right, u.c});
        }
        if (!terms.empty()) out.R.mu[me] = terms;
      }
  // inclusion = coaugmentation by the coaction of M
  for (auto& [dm, lm] : MU.basis) {
    SparseMatrix inc(F, tot.dim(dm), (int)lm.size());
    for (int i = 0; i < (int)lm.size(); ++i) {
      auto itm = M.mu.find({dm, i});
      if (itm == M.mu.end()) continue;
      for (auto& u : itm->second) {
        Cell c;
        c.m = u.left;
        c.cs = {u.right};
        auto [tt, row] = total_of(0, c);
        (void)tt;
        if (row >= 0) inc.add_to(row, i, u.c);
      }
    }
    out.inclusion.blocks[dm] = inc;
  }
  int lo = MU.empty() ? 0 : MU.min_degree();
  int hi = MU.empty() ? 0 : MU.max_degree();
  out.cert = induced_map_on_cohomology(out.inclusion, MU, tot, lo, hi);
  return out;
}

std::map<BasisRef, std::pair<int, int>> total_origin(const SimplicialLevels& lv) {
  std::map<BasisRef, std::pair<int, int>> origin;
  std::set<int> degs;
  for (int i = 0; i <= lv.L; ++i)
    for (auto& [j, l] : lv.levels[i].basis) degs.insert(j - i);
  for (int t : degs) {
    int at = 0;
    for (int i = 0; i <= lv.L; ++i)
      for (int k = 0; k < lv.levels[i].dim(t + i); ++k) origin[{t, at++}] = {i, k};
  }
  return origin;
}

Rat signed_shuffle_count(int p, int q) {
  // recursion for the signed binomial: last move is an a-step or a b-step
  if (p == 0 || q == 0) return Rat(1);
  return signed_shuffle_count(p - 1, q) * Rat(q % 2 != 0 ? -1 : 1) +
         signed_shuffle_count(p, q - 1);
}

namespace {

// offsets of level blocks inside the totalization
std::map<std::pair<int, int>, int> total_offsets(const SimplicialLevels& lv) {
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

void require_flat(const SimplicialLevels& lv, const char* what) {
  for (int n = 0; n <= lv.L; ++n)
    for (auto& [j, l] : lv.levels[n].basis)
      if (j != 0 && !l.empty())
        throw std::invalid_argument(std::string(what) +
                                    ": implemented for levels concentrated in degree 0");
}

}  // namespace

DgCoalgebra shuffle_bialgebra(const SimplicialLevels& lv, const LevelProduct& prod,
                              DgCoalgebra C, bool normalized) {
  require_flat(lv, "shuffle product");
  SimplicialLevels nm = normalized ? normalize(lv) : lv;
  auto origin = total_origin(nm);
  auto off = total_offsets(nm);

  C.level.clear();
  for (auto& [b, o] : origin) C.level[b] = o.first;
  C.max_level = lv.L;
  C.has_product = true;
  C.symmetric = prod.symmetric;
  C.unit = {prod.unit.first, off.count({prod.unit.first, 0})
                                 ? off[{prod.unit.first, 0}] + prod.unit.second
                                 : prod.unit.second};

  // everything is internal degree 0, so level p sits in total degree -p
  auto lift = [&](int from, const std::vector<int>& degs, const std::vector<Rat>& vecin) {
    // apply degeneracies at the listed positions (ascending) starting at level `from`
    std::vector<Rat> vec = vecin;
    int level = from;
    for (int pos : degs) {
      const ChainMap& s = lv.degens[level][pos];
      SparseMatrix blk = s.block(0, lv.levels[level], lv.levels[level + 1]);
      std::vector<Rat> next(blk.rows, Rat(0));
      for (int c = 0; c < blk.cols; ++c)
        if (vec[c] != 0)
          for (int r = 0; r < blk.rows; ++r) {
            Rat v = blk.get(r, c);
            if (v != 0) next[r] = lv.field.normalize(next[r] + v * vec[c]);
          }
      vec = next;
      ++level;
    }
    return vec;
  };

  for (auto& [a, oa] : origin)
    for (auto& [b, ob] : origin) {
      int p = oa.first, q = ob.first;
      if (p + q > lv.L) continue;
      // strings of nm lift to lv unchanged
      const StringElt& sx = nm.strings[p].at(0).at(oa.second);
      const StringElt& sy = nm.strings[q].at(0).at(ob.second);
      auto fx = lv.find(p, sx);
      auto fy = lv.find(q, sy);
      if (fx.second < 0 || fy.second < 0)
        throw std::logic_error("shuffle product: string lift missing");
      std::vector<Rat> acc(lv.levels[p + q].dim(0), Rat(0));
      int total = p + q;
      for (unsigned mask = 0; mask < (1u << total); ++mask) {
        if (__builtin_popcount(mask) != p) continue;
        // mask bits = positions of a-steps; sign = inversions between steps
        std::vector<int> apos, bpos;
        for (int t = 0; t < total; ++t)
          (mask >> t & 1u) ? apos.push_back(t) : bpos.push_back(t);
        long inv = 0;
        for (int ai : apos)
          for (int bi : bpos)
            if (bi < ai) ++inv;
        Rat sgn(inv % 2 != 0 ? -1 : 1);
        // degenerate x at the b-positions and y at the a-positions
        std::vector<Rat> xv(lv.levels[p].dim(0), Rat(0));
        xv[fx.second] = Rat(1);
        std::vector<Rat> yv(lv.levels[q].dim(0), Rat(0));
        yv[fy.second] = Rat(1);
        std::vector<Rat> xl = lift(p, bpos, xv);
        std::vector<Rat> yl = lift(q, apos, yv);
        for (int ix = 0; ix < (int)xl.size(); ++ix) {
          if (xl[ix] == 0) continue;
          for (int iy = 0; iy < (int)yl.size(); ++iy) {
            if (yl[iy] == 0) continue;
            auto it = prod.table.find({total, 0, ix, 0, iy});
            if (it == prod.table.end()) continue;
            for (auto& [r, cr] : it->second)
              acc[r.second] = lv.field.normalize(acc[r.second] + sgn * xl[ix] * yl[iy] * cr);
          }
        }
      }
      // project to nm and record in total coordinates
      std::map<BasisRef, Rat> out;
      for (int r = 0; r < (int)acc.size(); ++r) {
        if (acc[r] == 0) continue;
        const StringElt& sr = lv.strings[total].at(0).at(r);
        auto fr = nm.find(total, sr);
        if (fr.second < 0) continue;  // degenerate, killed by normalization
        out[{-total, off.at({-total, total}) + fr.second}] = acc[r];
      }
      if (!out.empty()) C.star[{a, b}] = out;
    }
  return C;
}

std::vector<std::string> involution_and_antipode_check(const SimplicialLevels& lv,
                                                       const DualData& dual, DgCoalgebra& C,
                                                       bool normalized) {
  std::vector<std::string> rep;
  require_flat(lv, "involution");
  const DgCat& A = *lv.A;
  SimplicialLevels nm = normalized ? normalize(lv) : lv;
  auto off = total_offsets(nm);
  auto origin = total_origin(nm);

  // rho on one string: reverse, dualize factors, sign (-1)^{m(m+1)/2}
  auto rho_string = [&](int m, const StringElt& s) {
    std::map<int, Rat> out;  // index within nm level m (degree 0)
    std::vector<std::map<int, Rat>> parts;  // dual of each factor, reversed order
    for (int k = m - 1; k >= 0; --k) {
      auto it = dual.mor_dual.find({s.tuple[k], s.tuple[k + 1], 0, s.inner[k].second});
      parts.push_back(it == dual.mor_dual.end() ? LinComb{} : it->second);
    }
    std::vector<int> tuple;
    for (int k = m; k >= 0; --k) tuple.push_back(dual.obj_dual[s.tuple[k]]);
    Rat sgn(((long)m * (m + 1) / 2) % 2 != 0 ? -1 : 1);
    // expand the product of linear combinations
    std::vector<std::pair<std::vector<int>, Rat>> terms{{{}, sgn}};
    for (auto& part : parts) {
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (auto& [idxs, c] : terms)
        for (auto& [i2, c2] : part) {
          auto v = idxs;
          v.push_back(i2);
          next.push_back({v, c * c2});
        }
      terms = next;
    }
    for (auto& [idxs, c] : terms) {
      StringElt t;
      t.tuple = tuple;
      for (int i2 : idxs) t.inner.push_back({0, i2});
      t.coef = s.coef;  // one-dimensional trivial fibres
      auto f = nm.find(m, t);
      if (f.second >= 0) {
        Rat v = out.count(f.second) ? out[f.second] : Rat(0);
        out[f.second] = lv.field.normalize(v + c);
      }
    }
    return out;
  };

  // trivial-fibre requirement
  if (!lv.F.slotR || !lv.F.slotL) {
    rep.push_back("involution: coefficient bimodule has no slot decomposition");
    return rep;
  }
  for (int X = 0; X < (int)A.objects.size(); ++X)
    if (lv.F.slotR->at(X).dim(0) != 1 || lv.F.slotR->at(X).basis.size() != 1) {
      rep.push_back("involution: fibres must be one-dimensional in degree 0");
      return rep;
    }

  // rho as matrices per level on nm
  std::vector<SparseMatrix> R;
  for (int m = 0; m <= lv.L; ++m) {
    int dm = nm.levels[m].dim(0);
    SparseMatrix rm(lv.field, dm, dm);
    for (int k = 0; k < dm; ++k)
      for (auto& [r, c] : rho_string(m, nm.strings[m].at(0).at(k))) rm.add_to(r, k, c);
    R.push_back(rm);
  }

  // involutivity (the global signs square away) and the face descent relations
  for (int m = 0; m <= lv.L; ++m) {
    SparseMatrix sq = R[m].mul(R[m]);
    if (!(sq == SparseMatrix::identity(lv.field, sq.rows)))
      rep.push_back("involution: rho^2 != id at level " + std::to_string(m));
  }
  for (int m = 1; m <= lv.L; ++m)
    for (int i = 0; i <= m; ++i) {
      SparseMatrix lhs =
          R[m - 1].mul(nm.faces[m][i].block(0, nm.levels[m], nm.levels[m - 1]));
      SparseMatrix rhs =
          nm.faces[m][m - i].block(0, nm.levels[m], nm.levels[m - 1]).mul(R[m]);
      if (m % 2 != 0) rhs = rhs.neg();
      if (!(lhs == rhs))
        rep.push_back("involution: face relation fails at level " + std::to_string(m) +
                      ", face " + std::to_string(i));
    }

  // attach rho to C in total coordinates
  C.has_involution = true;
  C.rho.clear();
  for (auto& [b, o] : origin) {
    auto img = rho_string(o.first, nm.strings[o.first].at(0).at(o.second));
    std::map<BasisRef, Rat> row;
    for (auto& [r, c] : img) row[{b.first, off.at({b.first, o.first}) + r}] = c;
    C.rho[b] = row;
  }

  // antipode identity, chain level and on H^0
  const Complex& U = C.underlying;
  auto antipode_defect = [&](const BasisRef& b) -> std::optional<Elt> {
    Elt acc;
    auto it = C.delta.find(b);
    if (it != C.delta.end())
      for (auto& t : it->second)
        for (auto& [rl, cl] : C.rho.at(t.left)) {
          auto pr = C.product(rl, t.right);
          if (!pr) return std::nullopt;
          for (auto& [r, c] : *pr) add_term(acc, r, t.c * cl * c);
        }
    auto ie = C.counit.find(b);
    if (ie != C.counit.end()) add_term(acc, C.unit, -ie->second);
    return acc;
  };
  std::vector<BasisRef> chain_fail;
  for (auto& [deg, labels] : U.basis)
    for (int i = 0; i < (int)labels.size(); ++i) {
      auto d = antipode_defect({deg, i});
      if (d && !d->empty()) chain_fail.push_back({deg, i});
    }
  for (auto& b : chain_fail)
    rep.push_back("chain-level: antipode identity fails at " + label_of(U, b));

  // on H^0: defect of each representative must be a boundary
  auto H = cohomology(U, 0, 0);
  SparseMatrix dprev = U.diff(-1);
  for (auto& v : H.reps[0]) {
    Elt defect;
    for (int i = 0; i < (int)v.size(); ++i)
      if (v[i] != 0) {
        auto d = antipode_defect({0, i});
        if (!d) continue;
        for (auto& [r, c] : *d) add_term(defect, r, v[i] * c);
      }
    std::vector<Rat> dv(U.dim(0), Rat(0));
    bool in_zero = true;
    for (auto& [r, c] : defect) {
      if (r.first != 0) in_zero = false;
      else
        dv[r.second] = c;
    }
    if (!in_zero || !in_column_span(dprev, dv))
      rep.push_back("antipode identity fails on an H^0 class");
  }
  return rep;
}

}  // namespace dgtk
