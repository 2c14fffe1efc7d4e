#pragma once
// Surface and volume quadrature on spheres and balls in R^n.
//
// The sphere rule is a tensor-product construction built recursively from
// the circle: S^{n-1} is sliced as x = (sqrt(1-t^2) y, t) with y on S^{n-2},
// which turns the surface integral into a weighted 1-D integral in t with
// weight (1-t^2)^{(n-3)/2} times an integral over the lower sphere.  Each
// level uses a Gauss rule matched to that weight:
//   * odd power (n even): Gauss-Chebyshev second kind absorbs sqrt(1-t^2)
//     exactly; the remaining integer power joins the integrand,
//   * even power (n odd): Gauss-Legendre with the integer power absorbed
//     into the level weights,
//   * base circle: an equispaced trapezoid rule, exact through trig degree
//     M-1.
// Node counts are padded so a rule of order q integrates every polynomial
// of total degree <= 2q-1 exactly (up to roundoff).
//
// The ball rule pairs a sphere rule with a radial Gauss-Legendre rule whose
// level weights absorb r^{n-1}.  An optional geometric subdivision of the
// radial interval toward the center concentrates nodes near a singularity
// sitting at the center of integration.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsc/clifford.hpp"
#include "rsc/gauss.hpp"
#include "rsc/poly.hpp"

namespace rsc {

// Surface area of the unit sphere S^{n-1} in R^n.
inline double omega_n_double(int n) {
  if (n < 1) throw std::invalid_argument("omega_n_double: dimension");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

// Quadrature rule on the unit sphere S^{n-1}: unit nodes and positive
// weights with sum omega_n.  Exact for polynomials of degree <= 2*order-1.
struct SphereRule {
  int n = 0;
  int order = 0;
  std::vector<std::vector<double>> nodes;  // each a unit vector in R^n
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

namespace quad_detail {

// One-dimensional rule for int_{-1}^{1} g(t) (1-t^2)^{(n-3)/2} dt, exact
// whenever g is a polynomial of degree <= 2q-1 + (even part absorbed).
inline void level_rule(int n, int q, std::vector<double>& tn,
                       std::vector<double>& tw) {
  tn.clear();
  tw.clear();
  if ((n - 3) % 2 == 0) {
    // Integer power: plain Gauss-Legendre with the power absorbed.
    int p = (n - 3) / 2;
    int m = q + (n + 1) / 2;
    QuadRule1D gl = gauss_legendre(m);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      double t = gl.nodes[i];
      tn.push_back(t);
      tw.push_back(gl.weights[i] * std::pow(1.0 - t * t, p));
    }
  } else {
    // Half-integer power: Gauss-Chebyshev (second kind) handles the
    // sqrt(1-t^2) factor exactly; the rest of the power is absorbed.
    int p = (n - 4) / 2;
    int m = q + n / 2;
    for (int j = 1; j <= m; ++j) {
      double theta = j * M_PI / (m + 1);
      double t = std::cos(theta);
      double s2 = std::sin(theta) * std::sin(theta);
      tn.push_back(t);
      tw.push_back(M_PI / (m + 1) * s2 * std::pow(1.0 - t * t, p));
    }
  }
}

}  // namespace quad_detail

inline SphereRule build_sphere_rule(int n, int q) {
  if (n < 2) throw std::invalid_argument("build_sphere_rule: need n >= 2");
  if (q < 1) q = 1;
  SphereRule rule;
  rule.n = n;
  rule.order = q;
  if (n == 2) {
    int M = 2 * q;
    double w = 2.0 * M_PI / M;
    for (int j = 0; j < M; ++j) {
      double theta = 2.0 * M_PI * j / M;
      rule.nodes.push_back({std::cos(theta), std::sin(theta)});
      rule.weights.push_back(w);
    }
    return rule;
  }
  SphereRule sub = build_sphere_rule(n - 1, q);
  std::vector<double> tn, tw;
  quad_detail::level_rule(n, q, tn, tw);
  for (std::size_t j = 0; j < tn.size(); ++j) {
    double t = tn[j];
    double s = std::sqrt(1.0 - t * t);
    for (std::size_t i = 0; i < sub.size(); ++i) {
      std::vector<double> x(n);
      for (int d = 0; d < n - 1; ++d) x[d] = s * sub.nodes[i][d];
      x[n - 1] = t;
      rule.nodes.push_back(std::move(x));
      rule.weights.push_back(tw[j] * sub.weights[i]);
    }
  }
  return rule;
}

namespace quad_detail {

inline void require_finite(const Multivector<double>& value,
                           const char* where) {
  for (const auto& [blade, coeff] : value.terms())
    if (!std::isfinite(coeff))
      throw std::domain_error(std::string(where) +
                              ": integrand evaluated to a non-finite value");
  (void)where;
}

}  // namespace quad_detail

// Integral of f over the sphere of given center and radius.  The callback
// receives the evaluation point and the outward unit normal (as a grade-1
// multivector) and returns a Multivector<double>.  A non-finite value at
// any node is an error.
template <class F>
Multivector<double> integrate_surface(F&& f, const std::vector<double>& center,
                                      double radius, const SphereRule& rule) {
  int n = rule.n;
  if ((int)center.size() != n)
    throw std::invalid_argument("integrate_surface: center size");
  if (!(radius > 0.0))
    throw std::invalid_argument("integrate_surface: radius");
  double scale = std::pow(radius, n - 1);
  Multivector<double> acc(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    Multivector<double> normal(n);
    for (int d = 0; d < n; ++d) {
      x[d] = center[d] + radius * rule.nodes[i][d];
      normal.add_term(1u << d, rule.nodes[i][d]);
    }
    Multivector<double> val = f(x, normal);
    quad_detail::require_finite(val, "integrate_surface");
    val.scale(rule.weights[i] * scale);
    acc += val;
  }
  return acc;
}

// Quadrature rule for the solid ball: a sphere rule times a radial
// Gauss-Legendre rule (the r^{n-1} volume factor is absorbed when the rule
// is applied).  refine_levels > 0 subdivides the radial interval
// geometrically toward the center, for integrands singular there.
struct BallRule {
  SphereRule sphere;
  int radial_order = 0;
  int refine_levels = 0;
  double refine_ratio = 0.5;
};

inline BallRule build_ball_rule(int n, int q, int refine_levels = 0) {
  if (refine_levels < 0)
    throw std::invalid_argument("build_ball_rule: refine_levels");
  BallRule rule;
  rule.sphere = build_sphere_rule(n, q);
  rule.radial_order = q + (n + 2) / 2;
  rule.refine_levels = refine_levels;
  return rule;
}

// Integral of f over the ball of given center and radius.  The callback
// receives the evaluation point and returns a Multivector<double>.
//
// If the integrand is singular somewhere inside, the caller must say so by
// passing the singular point; the rule then must carry radial refinement
// (refine_levels > 0) and the singularity must sit at the center of
// integration, where the absorbed r^{n-1} factor and the geometric
// subdivision handle an integrable blowup.  A declared singularity with a
// plain rule is an error, as is a non-finite integrand value at any node.
template <class F>
Multivector<double> integrate_ball(
    F&& f, const std::vector<double>& center, double radius,
    const BallRule& rule, const std::vector<double>* singular_at = nullptr) {
  int n = rule.sphere.n;
  if ((int)center.size() != n)
    throw std::invalid_argument("integrate_ball: center size");
  if (!(radius > 0.0)) throw std::invalid_argument("integrate_ball: radius");
  if (singular_at != nullptr) {
    if (rule.refine_levels <= 0)
      throw std::invalid_argument(
          "integrate_ball: singular integrand needs a radially refined rule");
    if ((int)singular_at->size() != n)
      throw std::invalid_argument("integrate_ball: singular point size");
    double off = 0.0;
    for (int d = 0; d < n; ++d) {
      double diff = (*singular_at)[d] - center[d];
      off += diff * diff;
    }
    if (off > 1e-24 * radius * radius)
      throw std::invalid_argument(
          "integrate_ball: the singular point must be the center of "
          "integration");
  }

  // Radial cells: either the whole interval, or a geometric subdivision
  // toward r = 0.
  std::vector<std::pair<double, double>> cells;
  if (rule.refine_levels <= 0) {
    cells.emplace_back(0.0, radius);
  } else {
    double outer = radius;
    for (int l = 0; l < rule.refine_levels; ++l) {
      double inner = outer * rule.refine_ratio;
      cells.emplace_back(inner, outer);
      outer = inner;
    }
    cells.emplace_back(0.0, outer);
  }

  QuadRule1D gl = gauss_legendre(rule.radial_order);
  Multivector<double> acc(n);
  std::vector<double> x(n);
  for (const auto& [a, b] : cells) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t ir = 0; ir < gl.nodes.size(); ++ir) {
      double r = mid + half * gl.nodes[ir];
      double wr = half * gl.weights[ir] * std::pow(r, n - 1);
      for (std::size_t is = 0; is < rule.sphere.size(); ++is) {
        for (int d = 0; d < n; ++d)
          x[d] = center[d] + r * rule.sphere.nodes[is][d];
        Multivector<double> val = f(x);
        quad_detail::require_finite(val, "integrate_ball");
        val.scale(wr * rule.sphere.weights[is]);
        acc += val;
      }
    }
  }
  return acc;
}

}  // namespace rsc
