#pragma once

#include <utility>

#include "rsc/gauss.hpp"
#include "rsc/monogenic.hpp"

namespace rsc {

inline Rational rs_ck(int n, int k) {
  if (n <= 2) throw std::invalid_argument("need n > 2");
  return rat(n - 2, n - 2 + 2 * k);
}

namespace detail {

template <class S>
void validate_rs(const MPoly<S>& f, Space us, Side side) {
  if (f.is_zero()) return;
  if (!f.is_homogeneous(us))
    throw std::invalid_argument("not homogeneous in the spinor variable");
  if (!dirac(f, us, side).is_zero())
    throw std::invalid_argument("not monogenic in the spinor variable");
}

template <class S>
void validate_rs(const RadialRational<S>& f, Space us, Side side) {
  validate_rs(f.num(), us, side);
}

// (u D_u/(n+2k-2) + 1) for harmonic degree-k input; mirrored on the right.
// Shared by the polynomial and radial paths: u-operations never touch the
// radial denominator.
template <class S>
MPoly<S> project_u(const MPoly<S>& h, Space us, Side side) {
  int n = h.dim();
  int k = h.degree(us);
  S inv = scalar_cast<S>(rat(1, n + 2 * k - 2));
  MPoly<S> u = vector_poly<S>(n, us);
  if (side == Side::left) return (u * dirac(h, us, Side::left)) * inv + h;
  return (dirac(h, us, Side::right) * u) * inv + h;
}

template <class S>
RadialRational<S> project_u(const RadialRational<S>& g, Space us, Side side) {
  return RadialRational<S>(project_u(g.num(), us, side), g.spow(), g.rspace());
}

}  // namespace detail

// R_k f = P_k D_x f (left) or f D_x P_{k,r} (right).  us is the spinor
// space the projection acts in; the input must be monogenic there.
template <class F>
F apply_Rk(const F& f, Space xs, Space us, Side side = Side::left) {
  detail::validate_rs(f, us, side);
  if (side == Side::left) return detail::project_u(dirac(f, xs, Side::left), us, side);
  return detail::project_u(dirac(f, xs, Side::right), us, side);
}

template <class S, class Body>
struct RSFunction {
  Body body;
  Space xspace, uspace;
  Side side;
  RSFunction(Body b, Space xs, Space us, Side sd = Side::left)
      : body(std::move(b)), xspace(xs), uspace(us), side(sd) {
    detail::validate_rs(body, uspace, side);
  }
  RSFunction apply_Rk() const {
    return RSFunction(rsc::apply_Rk(body, xspace, uspace, side), xspace,
                      uspace, side);
  }
};

// F'_k = x Z'_k(xux, v) / |x|^{n+2k}: the homogenized substitution replaces
// the unit-sphere quotient xux/|x|^2 and keeps everything polynomial.
template <class S>
struct KernelEk {
  int n = 0, k = 0;
  RadialRational<S> F;  // radial space x, polynomial in u and v
  Rational ck;
};

template <class S>
KernelEk<S> build_Ek(int n, int k, const KernelZk<S>& Z) {
  if (Z.n != n || Z.k != k) throw std::invalid_argument("kernel mismatch");
  MPoly<S> xvec = vector_poly<S>(n, Space::x);
  MPoly<S> xux = xvec * vector_poly<S>(n, Space::u) * xvec;
  std::vector<MPoly<S>> images;
  for (int i = 0; i < n; ++i) images.push_back(xux.component(i));
  MPoly<S> num = xvec * substitute(Z.poly, Space::u, images);
  if (!num.is_homogeneous(Space::x, 2 * k + 1) ||
      !num.is_homogeneous(Space::u, k) || !num.is_homogeneous(Space::v, k))
    throw std::logic_error("kernel substitution degree drift");
  return {n, k, RadialRational<S>(std::move(num), n + 2 * k, Space::x),
          rs_ck(n, k)};
}

template <class S>
RadialRational<S> left_annihilation_check(const KernelEk<S>& E) {
  return apply_Rk(E.F, Space::x, Space::u, Side::left);
}

template <class S>
RadialRational<S> right_annihilation_check(const KernelEk<S>& E) {
  return apply_Rk(E.F, Space::x, Space::v, Side::right);
}

// mean over the unit x-sphere of h(xux) against c_k h(u): returned as the
// two exact polynomial sides.
template <class S>
std::pair<MPoly<S>, MPoly<S>> lemma6_check(const MPoly<S>& h, Space us = Space::u,
                                           Space xs = Space::x) {
  int n = h.dim();
  if (n <= 2) throw std::invalid_argument("need n > 2");
  if (!h.is_zero() && !h.is_homogeneous(us))
    throw std::invalid_argument("input not homogeneous");
  if (!laplacian(h, us).is_zero())
    throw std::invalid_argument("input not harmonic");
  int k = h.degree(us);
  MPoly<S> xvec = vector_poly<S>(n, xs);
  MPoly<S> xux = xvec * vector_poly<S>(n, us) * xvec;
  std::vector<MPoly<S>> images;
  for (int i = 0; i < n; ++i) images.push_back(xux.component(i));
  MPoly<S> lhs = sphere_mean(substitute(h, us, images), xs);
  MPoly<S> rhs = h * scalar_cast<S>(rs_ck(n, k));
  return {lhs, rhs};
}

// Normalized Gegenbauer polynomial P_m^lambda, P(1) = 1, as coefficients in
// w = (1-t)/2.
inline std::vector<Rational> gegenbauer_coeffs(int m, const Rational& lambda) {
  std::vector<Rational> c((size_t)m + 1);
  for (int i = 0; i <= m; ++i)
    c[(size_t)i] = pochhammer(Rational(-m), (unsigned)i) *
                   pochhammer(Rational(m) + 2 * lambda, (unsigned)i) /
                   (pochhammer(lambda + rat(1, 2), (unsigned)i) *
                    factorial((unsigned)i));
  return c;
}

template <class T>
T gegenbauer_P(int m, const Rational& lambda, const T& t) {
  auto c = gegenbauer_coeffs(m, lambda);
  T w = (scalar_cast<T>(Rational(1)) - t) * scalar_cast<T>(rat(1, 2));
  T acc = scalar_cast<T>(c[(size_t)m]);
  for (int i = m - 1; i >= 0; --i) acc = acc * w + scalar_cast<T>(c[(size_t)i]);
  return acc;
}

// int_0^pi P_k^lambda(1-2cos^2 t) sin^{n-2} t dt with lambda = n/2-1,
// against the closed form G(1/2)G(lambda+1/2)/G(lambda+1) * lambda/(lambda+k).
// Odd n: substitute t=cos, polynomial weight, Gauss-Legendre is exact.
// Even n: the integrand is a pi-periodic trig polynomial, so the uniform
// midpoint rule is exact once it outruns the bandwidth.
inline std::pair<double, double> gegenbauer_integral_check(int n, int k) {
  Rational lambda = rat(n - 2, 2);
  double lam = to_double(lambda);
  double lhs = 0.0;
  if (n % 2 == 1) {
    auto rule = gauss_legendre(2 * k + n + 2);
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      double t = rule.nodes[i];
      double w = std::pow(1.0 - t * t, (n - 3) / 2);
      lhs += rule.weights[i] * gegenbauer_P(k, lambda, 1.0 - 2.0 * t * t) * w;
    }
  } else {
    int M = 4 * k + 2 * n + 8;
    for (int j = 0; j < M; ++j) {
      double th = M_PI * (j + 0.5) / M;
      double ct = std::cos(th);
      lhs += gegenbauer_P(k, lambda, 1.0 - 2.0 * ct * ct) *
             std::pow(std::sin(th), n - 2) * (M_PI / M);
    }
  }
  double rhs = std::tgamma(0.5) * std::tgamma(lam + 0.5) /
               std::tgamma(lam + 1.0) * lam / (lam + k);
  return {lhs, rhs};
}

}  // namespace rsc
