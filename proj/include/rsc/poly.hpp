#pragma once

// Multivariate polynomials with Clifford coefficients over named variable
// spaces (x, y, u, v, w, t). Variables are real scalars and commute with
// everything; only the coefficients multiply noncommutatively. A polynomial
// may involve several spaces at once; operators that integrate or
// differentiate touch exactly one space and leave the others symbolic.

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rsc/clifford.hpp"
#include "rsc/rational.hpp"

namespace rsc {

enum class Space : std::uint8_t { x = 0, y = 1, u = 2, v = 3, w = 4, t = 5 };

inline const char* space_name(Space s) {
  static const char* names[] = {"x", "y", "u", "v", "w", "t"};
  return names[(int)s];
}

constexpr int kMaxPolyDim = 5;   // packed-exponent limit; ambient n <= 5
constexpr int kSpaceCount = 6;

// ==== monomials =========================================================

// Exponent pack: 30 variables (6 spaces x 5 coords), 4 bits each, split
// across two 64-bit words. Exponents above 15 are rejected; nothing in the
// engine approaches that degree per variable.
struct Monomial {
  std::uint64_t lo = 0, hi = 0;

  static int var_id(Space s, int i) { return (int)s * kMaxPolyDim + i; }

  unsigned get(Space s, int i) const { return get_id(var_id(s, i)); }
  unsigned get_id(int id) const {
    return (id < 16 ? (lo >> (4 * id)) : (hi >> (4 * (id - 16)))) & 0xF;
  }
  void set(Space s, int i, unsigned e) {
    int id = var_id(s, i);
    if (e > 15) throw std::overflow_error("monomial exponent overflow");
    if (id < 16) {
      lo = (lo & ~(std::uint64_t{0xF} << (4 * id))) |
           (std::uint64_t{e} << (4 * id));
    } else {
      int sh = 4 * (id - 16);
      hi = (hi & ~(std::uint64_t{0xF} << sh)) | (std::uint64_t{e} << sh);
    }
  }

  static bool add_checked(std::uint64_t a, std::uint64_t b,
                          std::uint64_t& out) {
    std::uint64_t sum = a + b;
    // carry crossed a nibble boundary <=> overflow of some exponent field
    if ((a ^ b ^ sum) & 0x1111111111111110ULL) return false;
    out = sum;
    return true;
  }

  Monomial times(const Monomial& o) const {
    Monomial m;
    if (!add_checked(lo, o.lo, m.lo) || !add_checked(hi, o.hi, m.hi))
      throw std::overflow_error("monomial exponent overflow");
    return m;
  }

  int degree(Space s, int n) const {
    int d = 0;
    for (int i = 0; i < n; ++i) d += (int)get(s, i);
    return d;
  }
  int total_degree() const {
    int d = 0;
    for (int id = 0; id < 16; ++id) d += (int)((lo >> (4 * id)) & 0xF);
    for (int id = 0; id < 14; ++id) d += (int)((hi >> (4 * id)) & 0xF);
    return d;
  }

  // Monomial with the exponents of one space cleared / kept.
  Monomial without(Space s) const {
    Monomial m = *this;
    for (int i = 0; i < kMaxPolyDim; ++i) m.set(s, i, 0);
    return m;
  }
  Monomial only(Space s) const {
    Monomial m;
    for (int i = 0; i < kMaxPolyDim; ++i) m.set(s, i, get(s, i));
    return m;
  }

  bool uses(Space s) const {
    for (int i = 0; i < kMaxPolyDim; ++i)
      if (get(s, i)) return true;
    return false;
  }

  bool operator<(const Monomial& o) const {
    return hi != o.hi ? hi < o.hi : lo < o.lo;
  }
  bool operator==(const Monomial& o) const { return lo == o.lo && hi == o.hi; }
};

// ==== polynomials =======================================================

template <class S>
class MPoly {
 public:
  using Coeff = Multivector<S>;
  using TermMap = std::map<Monomial, Coeff>;

  MPoly() : dim_(0) {}
  explicit MPoly(int dim) : dim_(dim) { check_dim(dim); }

  static MPoly constant(int dim, Coeff c) {
    MPoly p(dim);
    if (!c.is_zero()) p.terms_.emplace(Monomial{}, std::move(c));
    return p;
  }
  static MPoly constant(int dim, S s) {
    return constant(dim, Coeff::scalar(dim, std::move(s)));
  }
  static MPoly variable(int dim, Space sp, int i) {
    MPoly p(dim);
    Monomial m;
    m.set(sp, i, 1);
    p.terms_.emplace(m, Coeff::scalar(dim, S(1)));
    return p;
  }
  static MPoly monomial(int dim, Monomial m, Coeff c) {
    MPoly p(dim);
    if (!c.is_zero()) p.terms_.emplace(m, std::move(c));
    return p;
  }

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Monomial& m, Coeff c) {
    if (c.is_zero()) return;
    if (c.dim() != dim_) throw std::invalid_argument("coefficient dimension");
    auto [it, fresh] = terms_.try_emplace(m, std::move(c));
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Coeff coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coeff(dim_) : it->second;
  }

  // The value of a constant polynomial; errors if any variable survives.
  Coeff constant_value() const {
    if (terms_.empty()) return Coeff(dim_);
    if (terms_.size() != 1 || !(terms_.begin()->first == Monomial{}))
      throw std::domain_error("polynomial is not constant");
    return terms_.begin()->second;
  }

  MPoly& operator+=(const MPoly& o) {
    bind_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    bind_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend MPoly operator+(MPoly a, const MPoly& b) { a += b; return a; }
  friend MPoly operator-(MPoly a, const MPoly& b) { a -= b; return a; }
  MPoly operator-() const {
    MPoly out(dim_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
  }

  MPoly& scale(const S& s) {
    if (rsc::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c.scale(s);
    return *this;
  }
  friend MPoly operator*(MPoly p, const S& s) { p.scale(s); return p; }
  friend MPoly operator*(const S& s, MPoly p) { p.scale(s); return p; }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    if (a.dim_ != b.dim_ && !a.terms_.empty() && !b.terms_.empty())
      throw std::invalid_argument("dimension mismatch");
    MPoly out(a.dim_ ? a.dim_ : b.dim_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_)
        out.add_term(ma.times(mb), ca * cb);
    return out;
  }

  // Coefficient-side Clifford multiplication.
  MPoly mv_left(const Coeff& a) const {
    MPoly out(dim_);
    for (const auto& [m, c] : terms_) out.add_term(m, a * c);
    return out;
  }
  MPoly mv_right(const Coeff& a) const {
    MPoly out(dim_);
    for (const auto& [m, c] : terms_) out.add_term(m, c * a);
    return out;
  }

  template <class Fn>
  MPoly map_coeffs(Fn fn) const {
    MPoly out(dim_);
    for (const auto& [m, c] : terms_) out.add_term(m, fn(c));
    return out;
  }

  // Scalar polynomial multiplying e_i (i = 0-based) in a vector-valued poly.
  MPoly component(int i) const {
    MPoly out(dim_);
    for (const auto& [m, c] : terms_) {
      S ci = c.coeff(Blade(1u) << i);
      if (!rsc::is_zero(ci)) out.add_term(m, Coeff::scalar(dim_, ci));
    }
    return out;
  }

  bool operator==(const MPoly& o) const {
    return terms_ == o.terms_;
  }

  bool uses(Space s) const {
    for (const auto& [m, c] : terms_)
      if (m.uses(s)) return true;
    return false;
  }

  int degree(Space s) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree(s, dim_));
    return d;
  }

  bool is_homogeneous(Space s, int k) const {
    for (const auto& [m, c] : terms_)
      if (m.degree(s, dim_) != k) return false;
    return true;
  }

  bool is_homogeneous(Space s) const { return is_homogeneous(s, degree(s)); }

  MPoly homogeneous_part(Space s, int k) const {
    MPoly out(dim_);
    for (const auto& [m, c] : terms_)
      if (m.degree(s, dim_) == k) out.terms_.emplace(m, c);
    return out;
  }

  // Coefficients must be grade-0 for use as substitution images.
  bool scalar_coeffs() const {
    for (const auto& [m, c] : terms_)
      if (!c.is_grade(0)) return false;
    return true;
  }

  template <class T>
  MPoly<T> convert() const {
    MPoly<T> out(dim_);
    for (const auto& [m, c] : terms_)
      out.add_term(m, c.template convert<T>());
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << "  +  ";
      first = false;
      os << "(" << c.str() << ")";
      for (int sp = 0; sp < kSpaceCount; ++sp)
        for (int i = 0; i < dim_; ++i) {
          unsigned e = m.get((Space)sp, i);
          if (e) {
            os << " " << space_name((Space)sp) << i + 1;
            if (e > 1) os << "^" << e;
          }
        }
    }
    return os.str();
  }

 private:
  static void check_dim(int dim) {
    if (dim < 0 || dim > kMaxPolyDim)
      throw std::invalid_argument("polynomial dimension out of range");
  }
  void bind_dim(const MPoly& o) {
    if (dim_ == 0) dim_ = o.dim_;
    else if (o.dim_ != 0 && o.dim_ != dim_ && !o.terms_.empty())
      throw std::invalid_argument("dimension mismatch");
  }

  int dim_;
  TermMap terms_;
};

// ==== calculus ==========================================================

enum class Side { left, right };

template <class S>
MPoly<S> partial_derivative(const MPoly<S>& p, Space sp, int i) {
  MPoly<S> out(p.dim());
  for (const auto& [m, c] : p.terms()) {
    unsigned e = m.get(sp, i);
    if (!e) continue;
    Monomial d = m;
    d.set(sp, i, e - 1);
    out.add_term(d, c * S((long)e));
  }
  return out;
}

// Dirac operator in one space: sum_i e_i d/di (left) or sum_i (d/di)f e_i.
template <class S>
MPoly<S> dirac(const MPoly<S>& p, Space sp, Side side = Side::left) {
  MPoly<S> out(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    MPoly<S> d = partial_derivative(p, sp, i);
    auto ei = Multivector<S>::basis_vector(p.dim(), i);
    out += (side == Side::left) ? d.mv_left(ei) : d.mv_right(ei);
  }
  return out;
}

template <class S>
MPoly<S> laplacian(const MPoly<S>& p, Space sp) {
  MPoly<S> out(p.dim());
  for (int i = 0; i < p.dim(); ++i)
    out += partial_derivative(partial_derivative(p, sp, i), sp, i);
  return out;
}

// Euler operator sum_i s_i d/ds_i (degree counting on homogeneous input).
template <class S>
MPoly<S> euler(const MPoly<S>& p, Space sp) {
  MPoly<S> out(p.dim());
  for (int i = 0; i < p.dim(); ++i)
    out += MPoly<S>::variable(p.dim(), sp, i) * partial_derivative(p, sp, i);
  return out;
}

// The grade-1 symbol sum_i s_i e_i of a space.
template <class S>
MPoly<S> vector_poly(int dim, Space sp) {
  MPoly<S> out(dim);
  for (int i = 0; i < dim; ++i) {
    Monomial m;
    m.set(sp, i, 1);
    out.add_term(m, Multivector<S>::basis_vector(dim, i));
  }
  return out;
}

// |s|^2 as a polynomial.
template <class S>
MPoly<S> r2_poly(int dim, Space sp) {
  MPoly<S> out(dim);
  for (int i = 0; i < dim; ++i) {
    Monomial m;
    m.set(sp, i, 2);
    out.add_term(m, Multivector<S>::scalar(dim, S(1)));
  }
  return out;
}

template <class S>
MPoly<S> reversion_coeffs(const MPoly<S>& p) {
  return p.map_coeffs([](const Multivector<S>& c) { return c.reversion(); });
}

template <class S>
MPoly<S> conjugation_coeffs(const MPoly<S>& p) {
  return p.map_coeffs([](const Multivector<S>& c) { return c.conjugation(); });
}

// Substitute each variable of one space by a polynomial image. Images must
// have scalar coefficients (they are coordinates of transformed vectors), so
// placement relative to the Clifford coefficient is unambiguous.
template <class S>
MPoly<S> substitute(const MPoly<S>& p, Space sp,
                    const std::vector<MPoly<S>>& images) {
  if ((int)images.size() != p.dim())
    throw std::invalid_argument("image count");
  for (const auto& im : images)
    if (!im.scalar_coeffs())
      throw std::invalid_argument("substitution images must be scalar-valued");
  // image powers, built on demand
  std::array<std::vector<MPoly<S>>, kMaxPolyDim> powers;
  auto power = [&](int i, unsigned e) -> const MPoly<S>& {
    auto& ladder = powers[i];
    if (ladder.empty())
      ladder.push_back(MPoly<S>::constant(p.dim(), S(1)));
    while (ladder.size() <= e)
      ladder.push_back(ladder.back() * images[i]);
    return ladder[e];
  };
  MPoly<S> out(p.dim());
  for (const auto& [m, c] : p.terms()) {
    MPoly<S> term = MPoly<S>::monomial(p.dim(), m.without(sp), c);
    for (int i = 0; i < p.dim(); ++i) {
      unsigned e = m.get(sp, i);
      if (e) term = term * power(i, e);
    }
    out += term;
  }
  return out;
}

// Evaluate one space at a point; the other spaces stay symbolic.
template <class S>
MPoly<S> evaluate_space(const MPoly<S>& p, Space sp,
                        const std::vector<S>& point) {
  if ((int)point.size() != p.dim()) throw std::invalid_argument("point size");
  MPoly<S> out(p.dim());
  for (const auto& [m, c] : p.terms()) {
    S factor(1);
    for (int i = 0; i < p.dim(); ++i) {
      unsigned e = m.get(sp, i);
      for (unsigned t = 0; t < e; ++t) factor *= point[i];
    }
    out.add_term(m.without(sp), c * factor);
  }
  return out;
}

// Normalized sphere mean over one space: (1/omega_n) times the surface
// integral over the unit sphere. Exact via half-integer Pochhammer moments:
//   mean(prod s_i^{b_i}) = prod (1/2)_{b_i/2} / (n/2)_{|b|/2},
// zero when any b_i is odd. Other spaces pass through symbolically.
inline Rational sphere_moment(const std::vector<unsigned>& b, int n) {
  unsigned total = 0;
  for (unsigned e : b) {
    if (e & 1) return Rational(0);
    total += e;
  }
  Rational num(1);
  for (unsigned e : b) num *= pochhammer(rat(1, 2), e / 2);
  return num / pochhammer(rat(n, 2), total / 2);
}

template <class S>
MPoly<S> sphere_mean(const MPoly<S>& p, Space sp) {
  MPoly<S> out(p.dim());
  std::vector<unsigned> b(p.dim());
  for (const auto& [m, c] : p.terms()) {
    for (int i = 0; i < p.dim(); ++i) b[i] = m.get(sp, i);
    Rational mom = sphere_moment(b, p.dim());
    if (rsc::is_zero(mom)) continue;
    out.add_term(m.without(sp), c * scalar_cast<S>(mom));
  }
  return out;
}

// Normalized L2-type pairing on the sphere: mean of P*Q over one space.
// normalized=false (the raw surface integral, factor omega_n) is reserved
// for the float backend; requesting it from the exact backend is an error.
template <class S>
MPoly<S> pairing(const MPoly<S>& P, const MPoly<S>& Q, Space sp,
                 bool normalized = true);

double omega_n_double(int n);  // defined in quadrature.hpp

template <>
inline MPoly<Rational> pairing(const MPoly<Rational>& P,
                               const MPoly<Rational>& Q, Space sp,
                               bool normalized) {
  if (!normalized)
    throw std::domain_error("raw surface pairing requires the float backend");
  return sphere_mean(P * Q, sp);
}

template <>
inline MPoly<double> pairing(const MPoly<double>& P, const MPoly<double>& Q,
                             Space sp, bool normalized) {
  MPoly<double> m = sphere_mean(P * Q, sp);
  if (!normalized) m.scale(omega_n_double(P.dim()));
  return m;
}

// Exact division by |s|^2; empty result when not divisible. Long division
// in the first coordinate: |s|^2 = s_1^2 + R is monic of degree 2 in s_1,
// so the remainder has s_1-degree <= 1 and exactness means it vanishes.
template <class S>
bool exact_divide_by_r2(const MPoly<S>& p, Space sp, MPoly<S>& quotient) {
  const int n = p.dim();
  MPoly<S> rem = p;
  MPoly<S> q(n);
  MPoly<S> r2 = r2_poly<S>(n, sp);
  while (true) {
    int d = 0;
    for (const auto& [m, c] : rem.terms())
      d = std::max(d, (int)m.get(sp, 0));
    if (d < 2) break;
    MPoly<S> t(n);
    for (const auto& [m, c] : rem.terms())
      if ((int)m.get(sp, 0) == d) {
        Monomial mm = m;
        mm.set(sp, 0, d - 2);
        t.add_term(mm, c);
      }
    q += t;
    rem -= t * r2;
  }
  if (!rem.is_zero()) return false;
  quotient = std::move(q);
  return true;
}

}  // namespace rsc
