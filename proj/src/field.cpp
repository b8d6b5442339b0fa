#include "dgtk/field.hpp"

namespace dgtk {

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime(unsigned long p) {
  if (!is_prime(p)) throw std::invalid_argument("FieldSpec: " + std::to_string(p) + " is not prime");
  FieldSpec f;
  f.kind = Kind::Prime;
  f.p = p;
  return f;
}

Rat FieldSpec::normalize(const Rat& x) const {
  if (kind == Kind::Rationals) {
    Rat y = x;
    y.canonicalize();
    return y;
  }
  // Residue of num * den^{-1} mod p.
  mpz_class pz(static_cast<unsigned long>(p));
  mpz_class num = x.get_num() % pz;
  if (num < 0) num += pz;
  mpz_class den = x.get_den() % pz;
  if (den < 0) den += pz;
  if (den == 0) throw std::domain_error("FieldSpec: denominator divisible by p");
  if (den != 1) {
    mpz_class dinv;
    if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()) == 0)
      throw std::domain_error("FieldSpec: non-invertible denominator mod p");
    num = (num * dinv) % pz;
  }
  return Rat(num);
}

Rat FieldSpec::inv(const Rat& a) const {
  Rat x = normalize(a);
  if (x == 0) throw std::domain_error("FieldSpec: division by zero");
  if (kind == Kind::Rationals) {
    Rat y = 1 / x;
    y.canonicalize();
    return y;
  }
  mpz_class pz(static_cast<unsigned long>(p));
  mpz_class v = x.get_num();
  mpz_class vinv;
  mpz_invert(vinv.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t());
  if (vinv < 0) vinv += pz;
  return Rat(vinv);
}

std::string FieldSpec::to_string() const {
  if (kind == Kind::Rationals) return "Q";
  return "Fp:" + std::to_string(p);
}

Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) { return r.get_str(); }

}  // namespace dgtk
