#include "dgtk/presets.hpp"

#include <stdexcept>

namespace dgtk {

namespace {

Complex point_complex(FieldSpec F, const std::string& label) {
  Complex c(F);
  c.basis[0] = {label};
  return c;
}

ChainMap scalar_action(FieldSpec F, long v) {
  // a degree-0 map k -> k
  ChainMap f;
  SparseMatrix m(F, 1, 1);
  m.set(0, 0, Rat(v));
  f.blocks[0] = m;
  return f;
}

// One-object commutative algebra in degree 0 from a multiplication table.
Preset one_object_algebra(const std::vector<std::string>& basis, int id_idx,
                          const std::vector<std::vector<LinComb>>& table, bool monoidal) {
  FieldSpec F = FieldSpec::rationals();
  Preset p;
  p.A.field = F;
  p.A.objects = {"*"};
  Complex h(F);
  h.basis[0] = basis;
  p.A.hom[{0, 0}] = h;
  p.A.id_idx[0] = id_idx;
  for (int i = 0; i < (int)basis.size(); ++i)
    for (int j = 0; j < (int)basis.size(); ++j)
      if (!table[i][j].empty()) p.A.comp[{0, 0, 0, 0, i, 0, j}] = table[i][j];

  p.omega.val = {point_complex(F, "v")};
  p.omega.act[{0, 0, 0, id_idx}] = scalar_action(F, 1);  // augmentation: others act by 0

  if (monoidal) {
    MonoidalData m;
    m.obj_tensor = {{0}};
    m.unit = 0;
    m.symmetric = true;
    for (int i = 0; i < (int)basis.size(); ++i)
      for (int j = 0; j < (int)basis.size(); ++j)
        if (!table[i][j].empty()) m.mor[{0, 0, 0, i, 0, 0, 0, j}] = table[i][j];
    p.monoidal = m;
    MonoidalFibreData mf;
    mf.iso[{0, 0}] = scalar_action(F, 1);
    p.monoidal_fibre = mf;
  }
  return p;
}

}  // namespace

Preset preset_k() {
  std::vector<std::vector<LinComb>> table = {{LinComb{{0, Rat(1)}}}};
  Preset p = one_object_algebra({"id"}, 0, table, true);
  p.A.nilpotence = 1;
  return p;
}

Preset preset_dual_numbers() {
  // basis {id, e}, e^2 = 0
  std::vector<std::vector<LinComb>> t(2, std::vector<LinComb>(2));
  t[0][0] = {{0, Rat(1)}};
  t[0][1] = {{1, Rat(1)}};
  t[1][0] = {{1, Rat(1)}};
  // t[1][1] = 0
  return one_object_algebra({"id", "e"}, 0, t, true);
}

Preset preset_kx3() {
  // basis {id, x, x2}, x*x = x2, x*x2 = x2*x = x2*x2 = 0
  std::vector<std::vector<LinComb>> t(3, std::vector<LinComb>(3));
  t[0][0] = {{0, Rat(1)}};
  t[0][1] = {{1, Rat(1)}};
  t[0][2] = {{2, Rat(1)}};
  t[1][0] = {{1, Rat(1)}};
  t[2][0] = {{2, Rat(1)}};
  t[1][1] = {{2, Rat(1)}};
  return one_object_algebra({"id", "x", "x2"}, 0, t, true);
}

Preset preset_a2() {
  FieldSpec F = FieldSpec::rationals();
  Preset p;
  p.A.field = F;
  p.A.objects = {"X", "Y"};
  p.A.hom[{0, 0}] = point_complex(F, "idX");
  p.A.hom[{1, 1}] = point_complex(F, "idY");
  Complex hf(F);
  hf.basis[1] = {"f"};
  p.A.hom[{0, 1}] = hf;
  p.A.hom[{1, 0}] = Complex(F);
  p.A.id_idx[0] = 0;
  p.A.id_idx[1] = 0;
  p.A.comp[{0, 0, 0, 0, 0, 0, 0}] = {{0, Rat(1)}};  // idX * idX
  p.A.comp[{1, 1, 1, 0, 0, 0, 0}] = {{0, Rat(1)}};  // idY * idY
  p.A.comp[{0, 0, 1, 0, 0, 1, 0}] = {{0, Rat(1)}};  // idX * f = f
  p.A.comp[{0, 1, 1, 1, 0, 0, 0}] = {{0, Rat(1)}};  // f * idY = f
  p.A.nilpotence = 1;

  p.omega.val = {point_complex(F, "vX"), point_complex(F, "vY")};
  p.omega.act[{0, 0, 0, 0}] = scalar_action(F, 1);
  p.omega.act[{1, 1, 0, 0}] = scalar_action(F, 1);
  // omega(f): omega(Y) -> omega(X) of degree 1 between degree-0 lines: zero.
  return p;
}

Preset preset_by_name(const std::string& name) {
  if (name == "k") return preset_k();
  if (name == "dual_numbers") return preset_dual_numbers();
  if (name == "a2") return preset_a2();
  if (name == "kx3") return preset_kx3();
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace dgtk
