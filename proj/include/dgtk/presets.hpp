#pragma once

#include "dgtk/dgcat.hpp"

namespace dgtk {

// A bundled example presentation with its fibre functor and, when available,
// monoidal data.
struct Preset {
  DgCat A;
  FibreFunctor omega;
  std::optional<MonoidalData> monoidal;
  std::optional<MonoidalFibreData> monoidal_fibre;
};

Preset preset_k();             // one object, hom = k·id
Preset preset_dual_numbers();  // k[e], e^2 = 0, |e| = 0, ω = augmentation
Preset preset_a2();            // objects X, Y; one degree-1 arrow f ∈ A(X,Y)
Preset preset_kx3();           // k[x]/x^3, |x| = 0, ω = augmentation, monoidal

Preset preset_by_name(const std::string& name);

}  // namespace dgtk
