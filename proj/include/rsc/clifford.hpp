#pragma once

// Clifford algebra Cl_n with negative-definite metric: e_i e_j + e_j e_i =
// -2 delta_ij, so e_i^2 = -1 and x^2 = -|x|^2 for grade-1 x. Blades are bit
// masks (bit i set <=> e_{i+1} present); a multivector is a sparse list of
// (mask, coefficient) pairs sorted by mask.

#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "rsc/rational.hpp"

namespace rsc {

using Blade = std::uint32_t;

// ==== blade products ====================================================

// Transpositions needed to merge sorted factor lists e_A e_B: pairs (i in A,
// j in B) with i > j.
inline int blade_reorder_swaps(Blade a, Blade b) {
  int swaps = 0;
  a >>= 1;
  while (a) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return swaps;
}

// Sign of e_A e_B; repeated generators contribute e_i^2 = -1 each.
inline int blade_product_sign(Blade a, Blade b) {
  int s = blade_reorder_swaps(a, b) + std::popcount(a & b);
  return (s & 1) ? -1 : +1;
}

inline int reversion_sign(int grade) {
  return ((grade * (grade - 1) / 2) & 1) ? -1 : +1;
}

inline int conjugation_sign(int grade) {
  return ((grade * (grade + 1) / 2) & 1) ? -1 : +1;
}

inline std::string blade_name(Blade mask) {
  if (mask == 0) return "1";
  std::string s = "e";
  for (int i = 0; i < 32; ++i)
    if (mask & (Blade{1} << i)) s += std::to_string(i + 1);
  return s;
}

// ==== multivectors ======================================================

template <class S>
class Multivector {
 public:
  using Term = std::pair<Blade, S>;

  Multivector() : dim_(0) {}
  explicit Multivector(int dim) : dim_(dim) { check_dim(dim); }

  static Multivector scalar(int dim, S value) {
    Multivector m(dim);
    if (!rsc::is_zero(value)) m.terms_.push_back({0, std::move(value)});
    return m;
  }
  static Multivector basis_vector(int dim, int i) {
    return blade(dim, Blade{1} << i, S(1));
  }
  static Multivector blade(int dim, Blade mask, S value) {
    Multivector m(dim);
    if (mask >= (Blade{1} << dim))
      throw std::invalid_argument("blade outside algebra");
    if (!rsc::is_zero(value)) m.terms_.push_back({mask, std::move(value)});
    return m;
  }
  static Multivector from_vector(int dim, const std::vector<S>& x) {
    Multivector m(dim);
    if ((int)x.size() != dim) throw std::invalid_argument("vector length");
    for (int i = 0; i < dim; ++i)
      if (!rsc::is_zero(x[i])) m.terms_.push_back({Blade{1} << i, x[i]});
    return m;
  }

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S coeff(Blade mask) const {
    for (const auto& [b, c] : terms_)
      if (b == mask) return c;
    return S(0);
  }
  S scalar_part() const { return coeff(0); }

  bool is_grade(int g) const {
    for (const auto& [b, c] : terms_)
      if (std::popcount(b) != g) return false;
    return true;
  }

  int max_grade() const {
    int g = 0;
    for (const auto& [b, c] : terms_) g = std::max(g, std::popcount(b));
    return g;
  }

  std::vector<S> to_vector() const {
    if (!is_grade(1)) throw std::domain_error("not grade-1");
    std::vector<S> x(dim_, S(0));
    for (const auto& [b, c] : terms_) x[std::countr_zero(b)] = c;
    return x;
  }

  Multivector grade_part(int g) const {
    Multivector out(dim_);
    for (const auto& [b, c] : terms_)
      if (std::popcount(b) == g) out.terms_.push_back({b, c});
    return out;
  }

  Multivector& operator+=(const Multivector& o) {
    merge(o, +1);
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    merge(o, -1);
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) {
    a += b;
    return a;
  }
  friend Multivector operator-(Multivector a, const Multivector& b) {
    a -= b;
    return a;
  }
  Multivector operator-() const {
    Multivector out(*this);
    for (auto& [b, c] : out.terms_) c = -c;
    return out;
  }

  Multivector& scale(const S& s) {
    if (rsc::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [b, c] : terms_) c *= s;
    return *this;
  }
  friend Multivector operator*(Multivector a, const S& s) {
    a.scale(s);
    return a;
  }
  friend Multivector operator*(const S& s, Multivector a) {
    a.scale(s);
    return a;
  }

  friend Multivector operator*(const Multivector& a, const Multivector& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
    // Dense accumulation: at most 2^dim blades.
    std::vector<S> acc(std::size_t{1} << a.dim_, S(0));
    for (const auto& [ba, ca] : a.terms_)
      for (const auto& [bb, cb] : b.terms_) {
        const Blade m = ba ^ bb;
        if (blade_product_sign(ba, bb) > 0)
          acc[m] += ca * cb;
        else
          acc[m] -= ca * cb;
      }
    Multivector out(a.dim_);
    for (Blade m = 0; m < acc.size(); ++m)
      if (!rsc::is_zero(acc[m])) out.terms_.push_back({m, std::move(acc[m])});
    return out;
  }

  Multivector reversion() const { return mapped_signs(&reversion_sign); }
  Multivector conjugation() const { return mapped_signs(&conjugation_sign); }
  Multivector grade_involution() const {
    return mapped_signs([](int g) { return (g & 1) ? -1 : +1; });
  }

  // Equals the scalar part of conjugation(a)*a; property-tested against the
  // literal product.
  S norm_squared() const {
    S out(0);
    for (const auto& [b, c] : terms_) out += c * c;
    return out;
  }

  // Grade-1 inverse: x^{-1} = -x/|x|^2 (x^2 = -|x|^2).
  Multivector vector_inverse() const {
    if (!is_grade(1) || is_zero()) throw std::domain_error("not an invertible vector");
    Multivector out = -*this;
    out.scale(S(1) / norm_squared());
    return out;
  }

  // Inverse of a versor w (product of invertible vectors): w rev(w) is a
  // nonzero scalar mu, so w^{-1} = rev(w)/mu. The grade validation is exact
  // and only meaningful for exact scalars; float products carry roundoff in
  // the other grades, so there only the scalar part is used.
  Multivector versor_inverse() const {
    Multivector r = reversion();
    Multivector mu = *this * r;
    if constexpr (std::is_floating_point_v<S>) {
      S m0 = mu.scalar_part();
      if (m0 == S(0)) throw std::domain_error("not a versor");
      r.scale(S(1) / m0);
      return r;
    } else {
      if (!mu.is_grade(0) || mu.is_zero())
        throw std::domain_error("not a versor");
      r.scale(S(1) / mu.scalar_part());
      return r;
    }
  }

  bool operator==(const Multivector& o) const {
    return dim_ == o.dim_ && terms_ == o.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << rsc::to_string(c);
      if (b) os << "*" << blade_name(b);
    }
    return os.str();
  }

  template <class T>
  Multivector<T> convert() const {
    Multivector<T> out(dim_);
    for (const auto& [b, c] : terms_) out.add_term(b, scalar_cast<T>(c));
    return out;
  }

  // Internal: append respecting sorted order or combine.
  void add_term(Blade mask, S value) {
    if (rsc::is_zero(value)) return;
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), mask,
        [](const Term& t, Blade m) { return t.first < m; });
    if (it != terms_.end() && it->first == mask) {
      it->second += value;
      if (rsc::is_zero(it->second)) terms_.erase(it);
    } else {
      terms_.insert(it, {mask, std::move(value)});
    }
  }

 private:
  static void check_dim(int dim) {
    if (dim < 0 || dim > 16) throw std::invalid_argument("bad dimension");
  }

  template <class SignFn>
  Multivector mapped_signs(SignFn sign) const {
    Multivector out(*this);
    for (auto& [b, c] : out.terms_)
      if (sign(std::popcount(b)) < 0) c = -c;
    return out;
  }

  void merge(const Multivector& o, int sgn) {
    if (dim_ == 0 && terms_.empty()) dim_ = o.dim_;
    if (o.terms_.empty()) return;
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto ia = terms_.begin();
    auto ib = o.terms_.begin();
    while (ia != terms_.end() || ib != o.terms_.end()) {
      if (ib == o.terms_.end() ||
          (ia != terms_.end() && ia->first < ib->first)) {
        out.push_back(*ia++);
      } else if (ia == terms_.end() || ib->first < ia->first) {
        out.push_back({ib->first, sgn > 0 ? ib->second : -ib->second});
        ++ib;
      } else {
        S c = ia->second + (sgn > 0 ? ib->second : -ib->second);
        if (!rsc::is_zero(c)) out.push_back({ia->first, std::move(c)});
        ++ia;
        ++ib;
      }
    }
    terms_ = std::move(out);
  }

  int dim_;
  std::vector<Term> terms_;
};

template <class S>
S scalar_product_trace(const Multivector<S>& a) {
  return (a.conjugation() * a).scalar_part();
}

// ==== versors ===========================================================

// Ordered product of grade-1 factors; represents an element of Pin(n) after
// normalization. apply() folds the factor norms in, so factors may be any
// nonzero rational vectors and the action stays exact.
template <class S>
class Versor {
 public:
  Versor(int dim, std::vector<Multivector<S>> factors)
      : dim_(dim), factors_(std::move(factors)) {
    for (const auto& f : factors_)
      if (f.dim() != dim_ || !f.is_grade(1) || f.is_zero())
        throw std::invalid_argument("versor factors must be nonzero vectors");
  }

  int dim() const { return dim_; }
  int parity() const { return (int)factors_.size() & 1; }  // 1: Pin \ Spin
  const std::vector<Multivector<S>>& factors() const { return factors_; }

  Multivector<S> expand() const {
    Multivector<S> a = Multivector<S>::scalar(dim_, S(1));
    for (const auto& f : factors_) a = a * f;
    return a;
  }

  // Unit-normalized expansion: expand()/prod|f_i|. Exact only when each
  // |f_i|^2 is a perfect square; callers that need exactness pass factors
  // with rational norms.
  Multivector<S> expand_unit() const {
    Multivector<S> a = expand();
    S n2(1);
    for (const auto& f : factors_) n2 *= f.norm_squared();
    return normalize_by_sqrt(a, n2);
  }

  // x -> a x rev(a) with unit-normalized a. Preserves grade and norm.
  Multivector<S> apply(const Multivector<S>& x) const {
    Multivector<S> a = expand();
    Multivector<S> out = a * x * a.reversion();
    S n2(1);
    for (const auto& f : factors_) n2 *= f.norm_squared();
    out.scale(S(1) / n2);
    return out;
  }

 private:
  static Multivector<S> normalize_by_sqrt(Multivector<S> a, const S& n2);

  int dim_;
  std::vector<Multivector<S>> factors_;
};

template <>
inline Multivector<Rational> Versor<Rational>::normalize_by_sqrt(
    Multivector<Rational> a, const Rational& n2) {
  auto root = rational_sqrt(n2);
  if (!root) throw std::domain_error("versor norm is irrational");
  a.scale(Rational(1) / *root);
  return a;
}

template <>
inline Multivector<double> Versor<double>::normalize_by_sqrt(
    Multivector<double> a, const double& n2) {
  a.scale(1.0 / std::sqrt(n2));
  return a;
}

}  // namespace rsc
