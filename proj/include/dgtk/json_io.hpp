#pragma once

#include <json.hpp>
#include <string>

#include "dgtk/coalg.hpp"
#include "dgtk/koszul.hpp"

namespace dgtk {

// Insertion-ordered JSON: serializers emit keys in a fixed order so identical
// inputs produce byte-identical artifacts.
using Json = nlohmann::ordered_json;

// Version tag for the global sign conventions; stamped into every artifact.
inline constexpr const char* kSignConvention = "signs-v1";

// FNV-1a 64-bit content hash, lower-case hex.
std::string fnv1a64_hex(const std::string& data);

std::string read_file(const std::string& path);  // throws std::runtime_error
// Writes the whole artifact or nothing (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& data);

Json field_to_json(const FieldSpec& f);
FieldSpec field_from_json(const Json& j);

// {"field", "degrees", "basis": {degree: labels}, "d": [[deg,row,col,q],...]}
Json complex_to_json(const Complex& c);
Complex complex_from_json(const Json& j);

// One parsed "dgcat.json" file: the presentation plus its optional blocks.
struct CategoryFile {
  DgCat A;
  std::optional<FibreFunctor> omega;
  std::optional<MonoidalData> monoidal;
  std::optional<MonoidalFibreData> monoidal_fibre;
  std::optional<DualData> dual;
};
CategoryFile category_from_json(const Json& j);
Json category_to_json(const CategoryFile& cf);

Json algebra_to_json(const PositiveDgAlgebraOverS& A);
PositiveDgAlgebraOverS algebra_from_json(const Json& j);

Json conilpotent_to_json(const ConilpotentDgCoalgebra& C);
ConilpotentDgCoalgebra conilpotent_from_json(const Json& j);

// Output-only: Tannakian duals and bialgebras.
Json dg_coalgebra_to_json(const DgCoalgebra& C);

Json certificate_to_json(const QuasiIsoCertificate& c);

}  // namespace dgtk
