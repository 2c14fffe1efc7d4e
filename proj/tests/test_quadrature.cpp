#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "rsc/quadrature.hpp"
#include "testutil.hpp"

using namespace rsc;
using namespace rsctest;

namespace {

Multivector<double> sc(int n, double v) {
  Multivector<double> m(n);
  m.add_term(0u, v);
  return m;
}

double scalar_of(const Multivector<double>& m) {
  double out = 0.0;
  for (const auto& [blade, coeff] : m.terms())
    if (blade == 0u) out = coeff;
  return out;
}

double surface_scalar(const std::function<double(const std::vector<double>&)>& f,
                      const std::vector<double>& center, double radius,
                      const SphereRule& rule) {
  auto g = [&](const std::vector<double>& x, const Multivector<double>&) {
    return sc(rule.n, f(x));
  };
  return scalar_of(integrate_surface(g, center, radius, rule));
}

std::vector<double> origin(int n) { return std::vector<double>(n, 0.0); }

}  // namespace

TEST_CASE("sphere rule nodes are unit vectors with positive weights") {
  for (int n = 2; n <= 5; ++n) {
    SphereRule rule = build_sphere_rule(n, 6);
    REQUIRE(rule.size() > 0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      double norm2 = 0.0;
      for (int d = 0; d < n; ++d) norm2 += rule.nodes[i][d] * rule.nodes[i][d];
      CHECK(std::abs(norm2 - 1.0) <= 1e-14);
      CHECK(rule.weights[i] > 0.0);
    }
  }
  CHECK_THROWS_AS(build_sphere_rule(1, 4), std::invalid_argument);
}

TEST_CASE("sphere rule weights sum to the surface area") {
  for (int n = 3; n <= 5; ++n) {
    SphereRule rule = build_sphere_rule(n, 8);
    double total = 0.0;
    for (double w : rule.weights) total += w;
    double omega = omega_n_double(n);
    CHECK(std::abs(total - omega) <= 1e-12 * omega);
  }
}

TEST_CASE("surface integrals match the closed-form examples") {
  SphereRule s2 = build_sphere_rule(3, 8);
  double four_pi = 4.0 * M_PI;

  double area = surface_scalar([](const std::vector<double>&) { return 1.0; },
                               origin(3), 1.0, s2);
  CHECK(std::abs(area - four_pi) <= 1e-12 * four_pi);

  double x1sq = surface_scalar(
      [](const std::vector<double>& x) { return x[0] * x[0]; }, origin(3), 1.0,
      s2);
  CHECK(std::abs(x1sq - four_pi / 3.0) <= 1e-12 * four_pi);

  // Radius scaling: area of the sphere of radius 2 is 4 * (4 pi).
  double area2 = surface_scalar([](const std::vector<double>&) { return 1.0; },
                                origin(3), 2.0, s2);
  CHECK(std::abs(area2 - 4.0 * four_pi) <= 1e-12 * 4.0 * four_pi);

  SphereRule s3 = build_sphere_rule(4, 8);
  double mixed = surface_scalar(
      [](const std::vector<double>& x) { return x[0] * x[0] * x[1] * x[1]; },
      origin(4), 1.0, s3);
  std::vector<unsigned> b = {2, 2, 0, 0};
  double expected = omega_n_double(4) * sphere_moment(b, 4).get_d();
  CHECK(std::abs(mixed - expected) <= 1e-12 * omega_n_double(4));
}

TEST_CASE("surface rule reproduces the exact monomial moments") {
  auto rng = make_rng(20240817);
  for (int n = 3; n <= 5; ++n) {
    SphereRule rule = build_sphere_rule(n, 8);
    double omega = omega_n_double(n);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<unsigned> b(n);
      int degree_budget = 7;
      for (int d = 0; d < n; ++d) {
        b[d] = (unsigned)rand_int(rng, 0, degree_budget);
        degree_budget -= (int)b[d];
      }
      double got = surface_scalar(
          [&](const std::vector<double>& x) {
            double v = 1.0;
            for (int d = 0; d < n; ++d)
              for (unsigned e = 0; e < b[d]; ++e) v *= x[d];
            return v;
          },
          origin(n), 1.0, rule);
      double expected = omega * sphere_moment(b, n).get_d();
      if (expected == 0.0)
        CHECK(std::abs(got) <= 1e-10 * omega);
      else
        CHECK(std::abs(got - expected) <= 1e-10 * std::abs(expected));
    }
  }
}

TEST_CASE("outward normals satisfy the divergence identities") {
  SphereRule rule = build_sphere_rule(3, 8);
  // int_S n_i dS = 0 and int_S x_i n_j dS = delta_ij * vol(ball).
  Multivector<double> flux = integrate_surface(
      [](const std::vector<double>&, const Multivector<double>& nv) {
        return nv;
      },
      origin(3), 1.0, rule);
  for (const auto& [blade, coeff] : flux.terms())
    CHECK(std::abs(coeff) <= 1e-12);

  auto xi_nj = [&](int i, int j) {
    return scalar_of(integrate_surface(
        [&](const std::vector<double>& x, const Multivector<double>& nv) {
          double nj = 0.0;
          for (const auto& [blade, coeff] : nv.terms())
            if (blade == (1u << j)) nj = coeff;
          return sc(3, x[i] * nj);
        },
        origin(3), 1.0, rule));
  };
  double ball_vol = 4.0 * M_PI / 3.0;
  CHECK(std::abs(xi_nj(0, 0) - ball_vol) <= 1e-12 * ball_vol);
  CHECK(std::abs(xi_nj(1, 1) - ball_vol) <= 1e-12 * ball_vol);
  CHECK(std::abs(xi_nj(0, 1)) <= 1e-12);
}

TEST_CASE("surface integral of a harmonic component has the mean value") {
  // Components of x |x|^{-n} are harmonic away from the origin, so the
  // surface integral over a sphere avoiding the origin equals the value at
  // the center times the surface measure.
  for (int n = 3; n <= 4; ++n) {
    SphereRule rule = build_sphere_rule(n, 16);
    std::vector<double> c = origin(n);
    c[0] = 2.0;
    double radius = 0.5;
    double got = surface_scalar(
        [&](const std::vector<double>& x) {
          double r2 = 0.0;
          for (double xi : x) r2 += xi * xi;
          return x[0] / std::pow(r2, 0.5 * n);
        },
        c, radius, rule);
    double expected = (c[0] / std::pow(c[0] * c[0], 0.5 * n)) *
                      omega_n_double(n) * std::pow(radius, n - 1);
    CHECK(std::abs(got - expected) <= 1e-10 * std::abs(expected));
  }
}

TEST_CASE("nonpolynomial surface integral converges to the closed form") {
  // int_{S^2} exp(a . x) dS = 4 pi sinh(|a|)/|a|.
  SphereRule rule = build_sphere_rule(3, 16);
  double got = surface_scalar(
      [](const std::vector<double>& x) { return std::exp(x[2]); }, origin(3),
      1.0, rule);
  double expected = 4.0 * M_PI * std::sinh(1.0);
  CHECK(std::abs(got - expected) <= 1e-12 * expected);
}

TEST_CASE("doubling the order leaves polynomial integrals fixed") {
  auto poly = [](const std::vector<double>& x) {
    return x[0] * x[0] * x[1] * x[1] * x[1] * x[1] + x[2] * x[2] + 0.25;
  };
  SphereRule coarse = build_sphere_rule(3, 8);
  SphereRule fine = build_sphere_rule(3, 16);
  double a = surface_scalar(poly, origin(3), 1.0, coarse);
  double b = surface_scalar(poly, origin(3), 1.0, fine);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));

  BallRule bc = build_ball_rule(3, 8);
  BallRule bf = build_ball_rule(3, 16);
  auto f = [&](const std::vector<double>& x) { return sc(3, poly(x)); };
  double va = scalar_of(integrate_ball(f, origin(3), 1.0, bc));
  double vb = scalar_of(integrate_ball(f, origin(3), 1.0, bf));
  CHECK(std::abs(va - vb) <= 1e-12 * std::abs(va));
}

TEST_CASE("ball integrals match the closed-form examples") {
  BallRule rule = build_ball_rule(3, 8);
  double vol = scalar_of(integrate_ball(
      [](const std::vector<double>&) { return sc(3, 1.0); }, origin(3), 1.0,
      rule));
  double expected_vol = 4.0 * M_PI / 3.0;
  CHECK(std::abs(vol - expected_vol) <= 1e-10 * expected_vol);

  double x1sq = scalar_of(integrate_ball(
      [](const std::vector<double>& x) { return sc(3, x[0] * x[0]); },
      origin(3), 1.0, rule));
  double expected_x1sq = 4.0 * M_PI / 15.0;
  CHECK(std::abs(x1sq - expected_x1sq) <= 1e-10 * expected_x1sq);

  // Radius scaling: volume of the ball of radius 2.
  double vol2 = scalar_of(integrate_ball(
      [](const std::vector<double>&) { return sc(3, 1.0); }, origin(3), 2.0,
      rule));
  CHECK(std::abs(vol2 - 8.0 * expected_vol) <= 1e-10 * 8.0 * expected_vol);
}

TEST_CASE("declared singular integrands require a refined rule") {
  BallRule plain = build_ball_rule(3, 8);
  std::vector<double> c = origin(3);
  auto f = [&](const std::vector<double>& x) {
    double r2 = 0.0;
    for (int d = 0; d < 3; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
    return sc(3, std::pow(r2, -0.75));  // |x - c|^{-3/2}, integrable
  };
  CHECK_THROWS_AS(integrate_ball(f, c, 1.0, plain, &c), std::invalid_argument);

  // The singular point must be where the rule is centered.
  BallRule refined = build_ball_rule(3, 8, 20);
  std::vector<double> offset = {0.5, 0.0, 0.0};
  CHECK_THROWS_AS(integrate_ball(f, c, 1.0, refined, &offset),
                  std::invalid_argument);

  // With refinement the integral comes out right:
  // int_{|x|<1} |x|^{-3/2} dx = 4 pi int_0^1 r^{1/2} dr = 8 pi / 3.
  double got = scalar_of(integrate_ball(f, c, 1.0, refined, &c));
  double expected = 8.0 * M_PI / 3.0;
  CHECK(std::abs(got - expected) <= 1e-6 * expected);
}

TEST_CASE("non-finite integrand values are reported as errors") {
  BallRule rule = build_ball_rule(3, 8);
  auto bad = [](const std::vector<double>& x) {
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return sc(3, r2 < 0.04 ? std::numeric_limits<double>::infinity() : 1.0);
  };
  CHECK_THROWS_AS(integrate_ball(bad, origin(3), 1.0, rule),
                  std::domain_error);

  SphereRule srule = build_sphere_rule(3, 4);
  auto nan_f = [](const std::vector<double>&, const Multivector<double>&) {
    Multivector<double> m(3);
    m.add_term(0u, std::numeric_limits<double>::quiet_NaN());
    return m;
  };
  CHECK_THROWS_AS(integrate_surface(nan_f, origin(3), 1.0, srule),
                  std::domain_error);
}
