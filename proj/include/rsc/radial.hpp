#pragma once

// Rational functions of the form N(...)/|s|^p where N is a polynomial and s
// is one designated radial space. p may be odd: the fundamental solution in
// odd dimension carries odd norm powers. All arithmetic only ever multiplies
// or exactly divides by |s|^2, so odd p is pure bookkeeping; irrationality
// can only surface at evaluation, which therefore demands points whose norm
// squared is a perfect square when p is odd.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rsc/poly.hpp"

namespace rsc {

template <class S>
class RadialRational {
 public:
  RadialRational() : spow_(0), rspace_(Space::x) {}
  RadialRational(MPoly<S> num, int spow, Space rspace)
      : num_(std::move(num)), spow_(spow), rspace_(rspace) {
    if (spow_ < 0) throw std::invalid_argument("negative radial power");
    reduce();
  }
  static RadialRational from_poly(MPoly<S> p, Space rspace) {
    return RadialRational(std::move(p), 0, rspace);
  }

  const MPoly<S>& num() const { return num_; }
  int spow() const { return spow_; }
  Space rspace() const { return rspace_; }
  int dim() const { return num_.dim(); }
  bool is_zero() const { return num_.is_zero(); }

  RadialRational operator-() const {
    return RadialRational(-num_, spow_, rspace_);
  }

  friend RadialRational operator+(const RadialRational& a,
                                  const RadialRational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.rspace_ != b.rspace_)
      throw std::invalid_argument("radial space mismatch");
    // Denominators of mixed parity would need a bare |s| in the numerator;
    // nothing in the calculus produces that, so treat it as a usage error.
    if ((a.spow_ & 1) != (b.spow_ & 1))
      throw std::invalid_argument("norm power parity mismatch");
    int p = std::max(a.spow_, b.spow_);
    auto lift = [&](const RadialRational& r) {
      MPoly<S> n = r.num_;
      MPoly<S> r2 = r2_poly<S>(r.dim(), r.rspace_);
      for (int e = r.spow_; e + 2 <= p; e += 2) n = n * r2;
      return n;
    };
    return RadialRational(lift(a) + lift(b), p, a.rspace_);
  }
  friend RadialRational operator-(const RadialRational& a,
                                  const RadialRational& b) {
    return a + (-b);
  }

  friend RadialRational operator*(const RadialRational& a,
                                  const RadialRational& b) {
    if (a.rspace_ != b.rspace_ && !a.is_zero() && !b.is_zero())
      throw std::invalid_argument("radial space mismatch");
    return RadialRational(a.num_ * b.num_, a.spow_ + b.spow_, a.rspace_);
  }

  RadialRational mul_poly(const MPoly<S>& p, Side side = Side::right) const {
    return RadialRational(side == Side::right ? num_ * p : p * num_, spow_,
                          rspace_);
  }
  RadialRational mv_left(const Multivector<S>& a) const {
    return RadialRational(num_.mv_left(a), spow_, rspace_);
  }
  RadialRational mv_right(const Multivector<S>& a) const {
    return RadialRational(num_.mv_right(a), spow_, rspace_);
  }
  RadialRational& scale(const S& s) {
    num_.scale(s);
    return *this;
  }

  // Multiply by |s|^m (m >= 0 shifts the power down, may reduce).
  RadialRational times_rpow(int m) const {
    if (m < 0) throw std::invalid_argument("negative shift");
    RadialRational out = *this;
    if (m >= out.spow_) {
      int rest = m - out.spow_;
      out.spow_ = 0;
      if (rest & 1) throw std::domain_error("odd residual norm power");
      MPoly<S> r2 = r2_poly<S>(dim(), rspace_);
      for (int e = 0; e < rest; e += 2) out.num_ = out.num_ * r2;
    } else {
      out.spow_ -= m;
    }
    out.reduce();
    return out;
  }

  // d/ds_i (N / |s|^p) = (dN |s|^2 - p s_i N) / |s|^{p+2} for the radial
  // space; plain numerator derivative for any other space.
  RadialRational derivative(Space sp, int i) const {
    if (sp != rspace_ || spow_ == 0)
      return RadialRational(partial_derivative(num_, sp, i), spow_, rspace_);
    MPoly<S> dn = partial_derivative(num_, sp, i);
    MPoly<S> n = dn * r2_poly<S>(dim(), rspace_) -
                 MPoly<S>::variable(dim(), rspace_, i) * num_ * S(spow_);
    return RadialRational(std::move(n), spow_ + 2, rspace_);
  }

  RadialRational dirac(Space sp, Side side = Side::left) const {
    RadialRational out(MPoly<S>(dim()), 0, rspace_);
    for (int i = 0; i < dim(); ++i) {
      RadialRational d = derivative(sp, i);
      auto ei = Multivector<S>::basis_vector(dim(), i);
      out = out + (side == Side::left ? d.mv_left(ei) : d.mv_right(ei));
    }
    return out;
  }

  RadialRational laplacian(Space sp) const {
    RadialRational out(MPoly<S>(dim()), 0, rspace_);
    for (int i = 0; i < dim(); ++i)
      out = out + derivative(sp, i).derivative(sp, i);
    return out;
  }

  // The restriction to |s| = 1 as a polynomial (denominator drops).
  MPoly<S> restrict_to_sphere() const { return num_; }

  // Evaluate the radial space at a point. With odd p the point's norm must
  // be rational in the exact backend.
  MPoly<S> evaluate_radial(const std::vector<S>& point) const {
    MPoly<S> n = evaluate_space(num_, rspace_, point);
    if (spow_ == 0) return n;
    S r2(0);
    for (const auto& c : point) r2 += c * c;
    if (rsc::is_zero(r2)) throw std::domain_error("evaluation at the pole");
    S denom = radial_denom(r2, spow_);
    n.scale(S(1) / denom);
    return n;
  }

  template <class T>
  RadialRational<T> convert() const {
    return RadialRational<T>(num_.template convert<T>(), spow_, rspace_);
  }

  bool operator==(const RadialRational& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    return rspace_ == o.rspace_ && spow_ == o.spow_ && num_ == o.num_;
  }

  // Cancel |s|^2 factors out of the numerator eagerly.
  void reduce() {
    if (num_.is_zero()) {
      spow_ = 0;
      return;
    }
    MPoly<S> q;
    while (spow_ >= 2 && exact_divide_by_r2(num_, rspace_, q)) {
      num_ = q;
      spow_ -= 2;
    }
  }

 private:
  static S radial_denom(const S& r2, int p);

  MPoly<S> num_;
  int spow_;
  Space rspace_;
};

// Free-function forms so generic code can treat MPoly and RadialRational alike.
template <class S>
RadialRational<S> dirac(const RadialRational<S>& f, Space sp,
                        Side side = Side::left) {
  return f.dirac(sp, side);
}
template <class S>
RadialRational<S> laplacian(const RadialRational<S>& f, Space sp) {
  return f.laplacian(sp);
}

template <>
inline Rational RadialRational<Rational>::radial_denom(const Rational& r2,
                                                       int p) {
  Rational out(1);
  for (int e = 0; e + 2 <= p; e += 2) out *= r2;
  if (p & 1) {
    auto root = rational_sqrt(r2);
    if (!root)
      throw std::domain_error(
          "odd norm power at a point with irrational norm");
    out *= *root;
  }
  return out;
}

template <>
inline double RadialRational<double>::radial_denom(const double& r2, int p) {
  double out = 1.0;
  for (int e = 0; e + 2 <= p; e += 2) out *= r2;
  if (p & 1) out *= std::sqrt(r2);
  return out;
}

}  // namespace rsc
