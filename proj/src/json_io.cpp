#include "dgtk/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dgtk {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::runtime_error("schema: " + what); }

Json rat_json(const Rat& r) { return rat_to_string(r); }

Rat rat_from(const Json& j) {
  if (!j.is_string()) bad("scalar must be a \"num/den\" string");
  return parse_rat(j.get<std::string>());
}

// sparse block list [[deg,row,col,q],...] for a map of SparseMatrix blocks
Json blocks_to_json(const std::map<int, SparseMatrix>& blocks) {
  Json out = Json::array();
  for (auto& [n, m] : blocks)
    for (int r = 0; r < m.rows; ++r)
      for (auto& [c, v] : m.entries[r]) out.push_back(Json::array({n, r, c, rat_json(v)}));
  return out;
}

LinComb lincomb_from(const Json& j) {
  LinComb out;
  for (auto& t : j) {
    if (!t.is_array() || t.size() != 2) bad("coefficient list entries are [index, scalar]");
    out[t[0].get<int>()] = rat_from(t[1]);
  }
  return out;
}

Json lincomb_to_json(const LinComb& lc) {
  Json out = Json::array();
  for (auto& [i, v] : lc) out.push_back(Json::array({i, rat_json(v)}));
  return out;
}

// per-pair hom complexes, rows sorted by (source, target)
Json homs_to_json(const std::map<std::pair<int, int>, Complex>& hom) {
  Json out = Json::array();
  for (auto& [pr, c] : hom) {
    Json row;
    row["source"] = pr.first;
    row["target"] = pr.second;
    row["complex"] = complex_to_json(c);
    out.push_back(std::move(row));
  }
  return out;
}

std::map<std::pair<int, int>, Complex> homs_from_json(const Json& j, FieldSpec F, int nobj) {
  std::map<std::pair<int, int>, Complex> out;
  for (auto& row : j) {
    int X = row.at("source").get<int>(), Y = row.at("target").get<int>();
    if (X < 0 || X >= nobj || Y < 0 || Y >= nobj) bad("hom pair out of range");
    Complex c = complex_from_json(row.at("complex"));
    if (c.field != F) bad("hom complex field differs from the file field");
    out[{X, Y}] = std::move(c);
  }
  return out;
}

Json comp_to_json(const std::map<std::array<int, 7>, LinComb>& comp) {
  Json out = Json::array();
  for (auto& [k, lc] : comp) {
    Json row;
    row["g"] = Json::array({k[0], k[1], k[3], k[4]});
    row["f"] = Json::array({k[1], k[2], k[5], k[6]});
    row["to"] = lincomb_to_json(lc);
    out.push_back(std::move(row));
  }
  return out;
}

std::map<std::array<int, 7>, LinComb> comp_from_json(const Json& j) {
  std::map<std::array<int, 7>, LinComb> out;
  for (auto& row : j) {
    auto& g = row.at("g");
    auto& f = row.at("f");
    if (g.size() != 4 || f.size() != 4) bad("composition refs are [X,Y,deg,idx]");
    if (g[1].get<int>() != f[0].get<int>()) bad("composition factors are not composable");
    out[{g[0].get<int>(), g[1].get<int>(), f[1].get<int>(), g[2].get<int>(), g[3].get<int>(),
         f[2].get<int>(), f[3].get<int>()}] = lincomb_from(row.at("to"));
  }
  return out;
}

std::map<int, SparseMatrix> blocks_from_json(const Json& j, FieldSpec F,
                                             const Complex& src, const Complex& tgt, int degree) {
  std::map<int, SparseMatrix> out;
  for (auto& e : j) {
    if (!e.is_array() || e.size() != 4) bad("block entries are [deg,row,col,scalar]");
    int n = e[0].get<int>(), r = e[1].get<int>(), c = e[2].get<int>();
    auto it = out.find(n);
    if (it == out.end())
      it = out.emplace(n, SparseMatrix(F, tgt.dim(n + degree), src.dim(n))).first;
    if (r < 0 || r >= it->second.rows || c < 0 || c >= it->second.cols)
      bad("block entry out of shape");
    it->second.set(r, c, rat_from(e[3]));
  }
  return out;
}

}  // namespace

std::string fnv1a64_hex(const std::string& data) {
  unsigned long long h = 14695981039346656037ull;
  for (unsigned char b : data) {
    h ^= b;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << data;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move artifact into place at " + path);
}

Json field_to_json(const FieldSpec& f) {
  if (f.is_rational()) return "Q";
  Json j;
  j["Fp"] = f.p;
  return j;
}

FieldSpec field_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "Q") return FieldSpec::rationals();
    bad("unknown field " + j.get<std::string>());
  }
  if (j.is_object() && j.contains("Fp")) return FieldSpec::prime(j["Fp"].get<unsigned long>());
  bad("field must be \"Q\" or {\"Fp\": p}");
}

Json complex_to_json(const Complex& c) {
  Json j;
  j["field"] = field_to_json(c.field);
  Json degs = Json::array();
  Json basis;
  for (auto& [n, labels] : c.basis) {
    degs.push_back(n);
    basis[std::to_string(n)] = labels;
  }
  j["degrees"] = std::move(degs);
  j["basis"] = std::move(basis);
  j["d"] = blocks_to_json(c.d);
  return j;
}

Complex complex_from_json(const Json& j) {
  Complex c(field_from_json(j.at("field")));
  for (auto& n : j.at("degrees")) {
    int deg = n.get<int>();
    auto& labels = j.at("basis").at(std::to_string(deg));
    c.basis[deg] = labels.get<std::vector<std::string>>();
  }
  if (j.contains("d"))
    for (auto& [n, m] : blocks_from_json(j["d"], c.field, c, c, 1)) c.set_diff(n, std::move(m));
  auto rep = check_complex(c);
  if (!rep.empty()) bad("complex invariants fail: " + rep.front());
  return c;
}

CategoryFile category_from_json(const Json& j) {
  if (j.value("schema", "") != "dgcat.json") bad("expected schema dgcat.json");
  CategoryFile cf;
  cf.A.field = field_from_json(j.at("field"));
  cf.A.objects = j.at("objects").get<std::vector<std::string>>();
  cf.A.hom = homs_from_json(j.at("hom"), cf.A.field, (int)cf.A.objects.size());
  cf.A.comp = comp_from_json(j.value("comp", Json::array()));
  for (auto& e : j.at("identities")) cf.A.id_idx[e[0].get<int>()] = e[1].get<int>();
  if (j.contains("nilpotence")) cf.A.nilpotence = j["nilpotence"].get<long>();

  if (j.contains("fibre")) {
    FibreFunctor w;
    for (auto& v : j["fibre"].at("val")) w.val.push_back(complex_from_json(v));
    if ((int)w.val.size() != (int)cf.A.objects.size()) bad("fibre needs one complex per object");
    for (auto& row : j["fibre"].value("act", Json::array())) {
      auto& a = row.at("a");
      int X = a[0].get<int>(), Y = a[1].get<int>();
      ChainMap f;
      f.degree = a[2].get<int>();
      f.blocks = blocks_from_json(row.at("blocks"), cf.A.field, w.val[Y], w.val[X], f.degree);
      w.act[{X, Y, a[2].get<int>(), a[3].get<int>()}] = std::move(f);
    }
    cf.omega = std::move(w);
  }

  if (j.contains("monoidal")) {
    auto& mj = j["monoidal"];
    MonoidalData m;
    m.obj_tensor = mj.at("obj_tensor").get<std::vector<std::vector<int>>>();
    m.unit = mj.at("unit").get<int>();
    m.symmetric = mj.value("symmetric", false);
    for (auto& row : mj.value("mor", Json::array())) {
      auto& a = row.at("a");
      auto& b = row.at("b");
      m.mor[{a[0].get<int>(), a[1].get<int>(), a[2].get<int>(), a[3].get<int>(), b[0].get<int>(),
             b[1].get<int>(), b[2].get<int>(), b[3].get<int>()}] = lincomb_from(row.at("to"));
    }
    cf.monoidal = std::move(m);
  }

  if (j.contains("monoidal_fibre")) {
    if (!cf.omega) bad("monoidal_fibre requires a fibre block");
    MonoidalFibreData mf;
    for (auto& row : j["monoidal_fibre"].at("iso")) {
      int X = row.at("pair")[0].get<int>(), Y = row.at("pair")[1].get<int>();
      if (!cf.monoidal) bad("monoidal_fibre requires a monoidal block");
      int XY = cf.monoidal->obj_tensor[X][Y];
      ChainMap f;
      f.blocks = blocks_from_json(row.at("blocks"), cf.A.field,
                                  tensor(cf.omega->val[X], cf.omega->val[Y]), cf.omega->val[XY], 0);
      mf.iso[{X, Y}] = std::move(f);
    }
    cf.monoidal_fibre = std::move(mf);
  }

  if (j.contains("dual")) {
    DualData d;
    d.obj_dual = j["dual"].at("objects").get<std::vector<int>>();
    for (auto& row : j["dual"].at("mor")) {
      auto& a = row.at("a");
      d.mor_dual[{a[0].get<int>(), a[1].get<int>(), a[2].get<int>(), a[3].get<int>()}] =
          lincomb_from(row.at("to"));
    }
    cf.dual = std::move(d);
  }
  return cf;
}

Json category_to_json(const CategoryFile& cf) {
  Json j;
  j["schema"] = "dgcat.json";
  j["field"] = field_to_json(cf.A.field);
  j["objects"] = cf.A.objects;
  j["hom"] = homs_to_json(cf.A.hom);
  j["comp"] = comp_to_json(cf.A.comp);
  Json ids = Json::array();
  for (auto& [X, i] : cf.A.id_idx) ids.push_back(Json::array({X, i}));
  j["identities"] = std::move(ids);
  if (cf.A.nilpotence) j["nilpotence"] = *cf.A.nilpotence;
  if (cf.omega) {
    Json fj;
    Json vals = Json::array();
    for (auto& v : cf.omega->val) vals.push_back(complex_to_json(v));
    fj["val"] = std::move(vals);
    Json act = Json::array();
    for (auto& [k, f] : cf.omega->act) {
      Json row;
      row["a"] = Json::array({k[0], k[1], k[2], k[3]});
      row["blocks"] = blocks_to_json(f.blocks);
      act.push_back(std::move(row));
    }
    fj["act"] = std::move(act);
    j["fibre"] = std::move(fj);
  }
  if (cf.monoidal) {
    Json mj;
    mj["obj_tensor"] = cf.monoidal->obj_tensor;
    mj["unit"] = cf.monoidal->unit;
    mj["symmetric"] = cf.monoidal->symmetric;
    Json mor = Json::array();
    for (auto& [k, lc] : cf.monoidal->mor) {
      Json row;
      row["a"] = Json::array({k[0], k[1], k[2], k[3]});
      row["b"] = Json::array({k[4], k[5], k[6], k[7]});
      row["to"] = lincomb_to_json(lc);
      mor.push_back(std::move(row));
    }
    mj["mor"] = std::move(mor);
    j["monoidal"] = std::move(mj);
  }
  if (cf.monoidal_fibre) {
    Json mf;
    Json iso = Json::array();
    for (auto& [pr, f] : cf.monoidal_fibre->iso) {
      Json row;
      row["pair"] = Json::array({pr.first, pr.second});
      row["blocks"] = blocks_to_json(f.blocks);
      iso.push_back(std::move(row));
    }
    mf["iso"] = std::move(iso);
    j["monoidal_fibre"] = std::move(mf);
  }
  if (cf.dual) {
    Json dj;
    dj["objects"] = cf.dual->obj_dual;
    Json mor = Json::array();
    for (auto& [k, lc] : cf.dual->mor_dual) {
      Json row;
      row["a"] = Json::array({k[0], k[1], k[2], k[3]});
      row["to"] = lincomb_to_json(lc);
      mor.push_back(std::move(row));
    }
    dj["mor"] = std::move(mor);
    j["dual"] = std::move(dj);
  }
  return j;
}

Json algebra_to_json(const PositiveDgAlgebraOverS& A) {
  Json j;
  j["schema"] = "algebra.json";
  j["field"] = field_to_json(A.field);
  j["objects"] = A.objects;
  j["hom"] = homs_to_json(A.hom);
  j["comp"] = comp_to_json(A.comp);
  Json w = Json::array();
  for (auto& [k, v] : A.weight)
    if (v != 1) w.push_back(Json::array({k[0], k[1], k[2], k[3], v}));
  j["weights"] = std::move(w);
  return j;
}

PositiveDgAlgebraOverS algebra_from_json(const Json& j) {
  if (j.value("schema", "") != "algebra.json") bad("expected schema algebra.json");
  PositiveDgAlgebraOverS A;
  A.field = field_from_json(j.at("field"));
  A.objects = j.at("objects").get<std::vector<std::string>>();
  A.hom = homs_from_json(j.at("hom"), A.field, (int)A.objects.size());
  A.comp = comp_from_json(j.value("comp", Json::array()));
  for (auto& e : j.value("weights", Json::array()))
    A.weight[{e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()}] =
        e[4].get<long>();
  return A;
}

Json conilpotent_to_json(const ConilpotentDgCoalgebra& C) {
  Json j;
  j["schema"] = "coalgebra.json";
  j["field"] = field_to_json(C.field);
  j["objects"] = C.objects;
  j["val"] = homs_to_json(C.val);
  Json dl = Json::array();
  for (auto& [k, terms] : C.delta)
    for (auto& t : terms) {
      Json row;
      row["b"] = Json::array({k[0], k[1], k[2], k[3]});
      row["mid"] = t.mid;
      row["left"] = Json::array({t.left.first, t.left.second});
      row["right"] = Json::array({t.right.first, t.right.second});
      row["c"] = rat_json(t.c);
      dl.push_back(std::move(row));
    }
  j["delta"] = std::move(dl);
  Json w = Json::array();
  for (auto& [k, v] : C.weight)
    if (v != 1) w.push_back(Json::array({k[0], k[1], k[2], k[3], v}));
  j["weights"] = std::move(w);
  return j;
}

ConilpotentDgCoalgebra conilpotent_from_json(const Json& j) {
  if (j.value("schema", "") != "coalgebra.json") bad("expected schema coalgebra.json");
  ConilpotentDgCoalgebra C;
  C.field = field_from_json(j.at("field"));
  C.objects = j.at("objects").get<std::vector<std::string>>();
  C.val = homs_from_json(j.at("val"), C.field, (int)C.objects.size());
  for (auto& row : j.value("delta", Json::array())) {
    auto& b = row.at("b");
    CoTerm t;
    t.mid = row.at("mid").get<int>();
    t.left = {row.at("left")[0].get<int>(), row.at("left")[1].get<int>()};
    t.right = {row.at("right")[0].get<int>(), row.at("right")[1].get<int>()};
    t.c = rat_from(row.at("c"));
    C.delta[{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()}].push_back(t);
  }
  for (auto& e : j.value("weights", Json::array()))
    C.weight[{e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()}] =
        e[4].get<long>();
  return C;
}

Json dg_coalgebra_to_json(const DgCoalgebra& C) {
  Json j;
  j["schema"] = "dgcoalgebra.json";
  j["underlying"] = complex_to_json(C.underlying);
  Json dl = Json::array();
  for (auto& [b, terms] : C.delta)
    for (auto& t : terms) {
      Json row;
      row["b"] = Json::array({b.first, b.second});
      row["left"] = Json::array({t.left.first, t.left.second});
      row["right"] = Json::array({t.right.first, t.right.second});
      row["c"] = rat_json(t.c);
      dl.push_back(std::move(row));
    }
  j["delta"] = std::move(dl);
  Json eps = Json::array();
  for (auto& [b, v] : C.counit) eps.push_back(Json::array({b.first, b.second, rat_json(v)}));
  j["counit"] = std::move(eps);
  if (!C.level.empty()) {
    Json lv = Json::array();
    for (auto& [b, l] : C.level) lv.push_back(Json::array({b.first, b.second, l}));
    j["level"] = std::move(lv);
    j["max_level"] = C.max_level;
  }
  if (C.has_product) {
    Json pj;
    pj["symmetric"] = C.symmetric;
    pj["unit"] = Json::array({C.unit.first, C.unit.second});
    Json star = Json::array();
    for (auto& [ab, to] : C.star) {
      Json row;
      row["a"] = Json::array({ab.first.first, ab.first.second});
      row["b"] = Json::array({ab.second.first, ab.second.second});
      Json terms = Json::array();
      for (auto& [b, v] : to) terms.push_back(Json::array({b.first, b.second, rat_json(v)}));
      row["to"] = std::move(terms);
      star.push_back(std::move(row));
    }
    pj["star"] = std::move(star);
    j["product"] = std::move(pj);
  }
  return j;
}

Json certificate_to_json(const QuasiIsoCertificate& c) {
  Json j;
  j["window"] = Json::array({c.window_lo, c.window_hi});
  j["depth"] = c.depth;
  Json ds, dt, rk, vd;
  for (auto& [n, v] : c.dims_source) ds[std::to_string(n)] = v;
  for (auto& [n, v] : c.dims_target) dt[std::to_string(n)] = v;
  for (auto& [n, v] : c.induced_ranks) rk[std::to_string(n)] = v;
  for (auto& [n, v] : c.verdict) vd[std::to_string(n)] = v;
  j["dims"] = Json{{"source", std::move(ds)}, {"target", std::move(dt)}};
  j["ranks"] = std::move(rk);
  j["verdict"] = std::move(vd);
  j["all_true"] = c.all_true();
  return j;
}

}  // namespace dgtk
