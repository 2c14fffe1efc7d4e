#pragma once

// Exact scalar backend. All symbolic work runs over GMP rationals; the float
// backend (plain double) exists only for quadrature. The two never mix inside
// one expression tree: the scalar type is a template parameter everywhere, so
// a mixed-mode product is a compile error rather than a silent promotion.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rsc {

using Rational = mpq_class;

inline Rational rat(long p, long q = 1) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double r) { return r; }

// scalar_cast bridges the one permitted direction: exact -> float, at the
// explicit conversion boundary of a whole kernel or polynomial.
template <class S>
S scalar_cast(const Rational& r);
template <>
inline Rational scalar_cast<Rational>(const Rational& r) { return r; }
template <>
inline double scalar_cast<double>(const Rational& r) { return r.get_d(); }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(double r) { return r == 0.0; }

// Exact square root of a nonnegative rational, when one exists.
inline std::optional<Rational> rational_sqrt(const Rational& r) {
  if (sgn(r) < 0) return std::nullopt;
  if (sgn(r) == 0) return Rational(0);
  const mpz_class& num = r.get_num();
  const mpz_class& den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  return Rational(sn, sd);
}

// Rising factorial (a)_m = a(a+1)...(a+m-1).
inline Rational pochhammer(const Rational& a, unsigned m) {
  Rational out(1);
  Rational t = a;
  for (unsigned i = 0; i < m; ++i) {
    out *= t;
    t += 1;
  }
  return out;
}

inline Rational factorial(unsigned m) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), m);
  return Rational(f);
}

inline Rational binomial(unsigned nn, unsigned kk) {
  if (kk > nn) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), nn, kk);
  return Rational(b);
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational rational_from_string(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

}  // namespace rsc
