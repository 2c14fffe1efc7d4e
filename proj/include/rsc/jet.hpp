#pragma once

// Forward-mode first derivatives over the exact scalar field. A Jet carries a
// value and its gradient with respect to the base-point coordinates; the
// Clifford- and polynomial-valued variants lift the same Leibniz rule to
// Multivector and MPoly coefficients. Used by the conformal checks to
// differentiate Moebius compositions exactly at rational base points, square
// roots included (the base points are chosen so the norms are perfect
// squares).

#include <stdexcept>
#include <vector>

#include "rsc/clifford.hpp"
#include "rsc/poly.hpp"

namespace rsc {

inline Rational sqrt_exact(const Rational& r) {
  auto s = rational_sqrt(r);
  if (!s) throw std::domain_error("square root is not rational at this point");
  return *s;
}

inline Rational rational_pow(Rational base, int e) {
  if (e < 0) {
    if (sgn(base) == 0) throw std::domain_error("zero to a negative power");
    base = Rational(1) / base;
    e = -e;
  }
  Rational out(1);
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

struct Jet {
  Rational v;
  std::vector<Rational> d;  // gradient, one slot per base coordinate

  Jet() : v(0) {}
  Jet(int nvars, Rational value) : v(std::move(value)), d((size_t)nvars, Rational(0)) {}

  static Jet constant(int nvars, Rational value) { return Jet(nvars, std::move(value)); }
  static Jet variable(int nvars, int i, Rational value) {
    Jet j(nvars, std::move(value));
    j.d[(size_t)i] = 1;
    return j;
  }
  int nvars() const { return (int)d.size(); }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet out = a;
  out.v += b.v;
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] += b.d[i];
  return out;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet out = a;
  out.v -= b.v;
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] -= b.d[i];
  return out;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet out((int)a.d.size(), a.v * b.v);
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return out;
}

inline Jet operator*(const Jet& a, const Rational& s) {
  Jet out = a;
  out.v *= s;
  for (auto& g : out.d) g *= s;
  return out;
}

inline Jet jet_inverse(const Jet& a) {
  if (sgn(a.v) == 0) throw std::domain_error("jet inverse at zero");
  Jet out((int)a.d.size(), Rational(1) / a.v);
  Rational m = Rational(-1) / (a.v * a.v);
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] = a.d[i] * m;
  return out;
}

// a^{p/2} for integer p of either sign; the value's square root must be
// rational. d(a^{p/2}) = (p/2) a^{p/2-1} da = (p/2) s^{p-2} da with s=sqrt(a).
inline Jet jet_pow_half(const Jet& a, int p) {
  Rational s = sqrt_exact(a.v);
  if (sgn(s) == 0) throw std::domain_error("half-power jet at zero");
  Jet out((int)a.d.size(), rational_pow(s, p));
  Rational m = rat(p, 2) * rational_pow(s, p - 2);
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] = a.d[i] * m;
  return out;
}

// ---- Clifford-valued jets -------------------------------------------------

struct MVJet {
  Multivector<Rational> v;
  std::vector<Multivector<Rational>> d;

  MVJet() = default;
  MVJet(int dim, int nvars)
      : v(dim), d((size_t)nvars, Multivector<Rational>(dim)) {}

  static MVJet constant(int nvars, Multivector<Rational> value) {
    MVJet out(value.dim(), nvars);
    out.v = std::move(value);
    return out;
  }
  // The grade-1 point sum_i x_i e_i with d(x_i)/d(x_j) = delta_ij.
  static MVJet point(int dim, const std::vector<Rational>& x0) {
    MVJet out(dim, dim);
    out.v = Multivector<Rational>::from_vector(dim, x0);
    for (int i = 0; i < dim; ++i)
      out.d[(size_t)i] = Multivector<Rational>::basis_vector(dim, i);
    return out;
  }
  int nvars() const { return (int)d.size(); }

  MVJet reversion() const {
    MVJet out = *this;
    out.v = out.v.reversion();
    for (auto& g : out.d) g = g.reversion();
    return out;
  }
  Jet coeff(Blade b) const {
    Jet out(nvars(), v.coeff(b));
    for (size_t i = 0; i < d.size(); ++i) out.d[i] = d[i].coeff(b);
    return out;
  }
  Jet norm_squared() const {
    Jet out(nvars(), v.norm_squared());
    for (size_t i = 0; i < d.size(); ++i) {
      Rational g(0);
      for (const auto& [b, c] : v.terms()) g += 2 * c * d[i].coeff(b);
      out.d[i] = g;
    }
    return out;
  }
};

inline MVJet operator+(const MVJet& a, const MVJet& b) {
  MVJet out = a;
  out.v += b.v;
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] += b.d[i];
  return out;
}

inline MVJet operator-(const MVJet& a, const MVJet& b) {
  MVJet out = a;
  out.v -= b.v;
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] -= b.d[i];
  return out;
}

inline MVJet operator*(const MVJet& a, const MVJet& b) {
  MVJet out(a.v.dim(), a.nvars());
  out.v = a.v * b.v;
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return out;
}

inline MVJet scale(const MVJet& a, const Jet& s) {
  MVJet out(a.v.dim(), a.nvars());
  out.v = a.v;
  out.v.scale(s.v);
  for (size_t i = 0; i < out.d.size(); ++i) {
    Multivector<Rational> g = a.d[i];
    g.scale(s.v);
    Multivector<Rational> h = a.v;
    h.scale(s.d[i]);
    out.d[i] = g + h;
  }
  return out;
}

// q^{-1} = rev(q)/(q rev(q)) for versor-valued jets.
inline MVJet versor_inverse(const MVJet& q) {
  MVJet r = q.reversion();
  MVJet mu = q * r;
  if (!mu.v.is_grade(0) || mu.v.is_zero())
    throw std::domain_error("jet versor inverse: q rev(q) not a nonzero scalar");
  Jet muj = mu.coeff(0);
  return scale(r, jet_inverse(muj));
}

// ---- polynomial-valued jets ----------------------------------------------
// Value and gradient are MPoly in the still-symbolic spaces (spinor
// variables); the base-point coordinates have already been substituted.

struct PolyJet {
  MPoly<Rational> val;
  std::vector<MPoly<Rational>> d;

  PolyJet() = default;
  PolyJet(int dim, int nvars)
      : val(dim), d((size_t)nvars, MPoly<Rational>(dim)) {}

  static PolyJet constant(int nvars, MPoly<Rational> p) {
    PolyJet out(p.dim(), nvars);
    out.val = std::move(p);
    return out;
  }
  static PolyJet from_jet(int dim, const Jet& j) {
    PolyJet out(dim, j.nvars());
    out.val = MPoly<Rational>::constant(dim, j.v);
    for (size_t i = 0; i < out.d.size(); ++i)
      out.d[i] = MPoly<Rational>::constant(dim, j.d[i]);
    return out;
  }
  static PolyJet from_mvjet(const MVJet& m) {
    PolyJet out(m.v.dim(), m.nvars());
    out.val = MPoly<Rational>::constant(m.v.dim(), m.v);
    for (size_t i = 0; i < out.d.size(); ++i)
      out.d[i] = MPoly<Rational>::constant(m.v.dim(), m.d[i]);
    return out;
  }
  int nvars() const { return (int)d.size(); }
};

inline PolyJet operator+(const PolyJet& a, const PolyJet& b) {
  PolyJet out = a;
  out.val += b.val;
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] += b.d[i];
  return out;
}

inline PolyJet operator*(const PolyJet& a, const PolyJet& b) {
  PolyJet out(a.val.dim(), a.nvars());
  out.val = a.val * b.val;
  for (size_t i = 0; i < out.d.size(); ++i)
    out.d[i] = a.d[i] * b.val + a.val * b.d[i];
  return out;
}

inline PolyJet pow(const PolyJet& a, unsigned e) {
  PolyJet out = PolyJet::constant(
      a.nvars(), MPoly<Rational>::constant(a.val.dim(), Rational(1)));
  for (unsigned i = 0; i < e; ++i) out = out * a;
  return out;
}

// D applied through the jet: sum_i e_i (d/dx_i), as an MPoly in the
// remaining symbolic spaces.
inline MPoly<Rational> jet_dirac(const PolyJet& L) {
  MPoly<Rational> out(L.val.dim());
  for (size_t i = 0; i < L.d.size(); ++i)
    out += L.d[i].mv_left(Multivector<Rational>::basis_vector(L.val.dim(), (int)i));
  return out;
}

}  // namespace rsc
