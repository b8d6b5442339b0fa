#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace dgtk {

using Rat = mpq_class;

// Base field of all computations: the rationals, or Z/p for a prime p.
// Prime-field values are stored as canonical residues 0..p-1 in the
// numerator of a Rat with denominator 1.
struct FieldSpec {
  enum class Kind { Rationals, Prime };
  Kind kind = Kind::Rationals;
  unsigned long p = 0;

  static FieldSpec rationals() { return FieldSpec{}; }
  static FieldSpec prime(unsigned long p);

  bool operator==(const FieldSpec& o) const { return kind == o.kind && p == o.p; }
  bool operator!=(const FieldSpec& o) const { return !(*this == o); }

  bool is_rational() const { return kind == Kind::Rationals; }

  // Canonical representative of x in this field.
  Rat normalize(const Rat& x) const;
  Rat add(const Rat& a, const Rat& b) const { return normalize(a + b); }
  Rat sub(const Rat& a, const Rat& b) const { return normalize(a - b); }
  Rat mul(const Rat& a, const Rat& b) const { return normalize(a * b); }
  Rat neg(const Rat& a) const { return normalize(-a); }
  Rat inv(const Rat& a) const;
  Rat div(const Rat& a, const Rat& b) const { return mul(a, inv(b)); }
  bool is_zero(const Rat& a) const { return normalize(a) == 0; }

  std::string to_string() const;
};

bool is_prime(unsigned long n);

Rat parse_rat(const std::string& s);
std::string rat_to_string(const Rat& r);

}  // namespace dgtk
