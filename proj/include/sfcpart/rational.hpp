#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace sfcpart {

using Int = mpz_class;
using Rat = mpq_class;

inline Int ipow(long base, long exp) {
  if (exp < 0) throw std::invalid_argument("ipow: negative exponent");
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(exp));
  return r;
}

inline Int ipow(const Int& base, long exp) {
  if (exp < 0) throw std::invalid_argument("ipow: negative exponent");
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
  return r;
}

inline Rat rpow(const Rat& base, long exp) {
  if (exp < 0) return 1 / rpow(base, -exp);
  Rat r(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
  r.canonicalize();
  return r;
}

// k^{-e} as an exact rational, e may be negative.
inline Rat kpow(long k, long e) {
  if (e >= 0) return Rat(ipow(k, e));
  Rat r(Int(1), ipow(k, -e));
  r.canonicalize();
  return r;
}

// Serialized as "p/q", always reduced, q >= 1.
inline std::string to_frac_string(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rat parse_frac(const std::string& s) {
  auto slash = s.find('/');
  Rat r;
  if (slash == std::string::npos) {
    r = Rat(Int(s));
  } else {
    r = Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  }
  r.canonicalize();
  return r;
}

}  // namespace sfcpart
