#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rsc/rarita.hpp"
#include "testutil.hpp"

using namespace rsc;
using rsctest::make_rng;
using rsctest::rand_int;

using MV = Multivector<Rational>;
using Poly = MPoly<Rational>;
using RR = RadialRational<Rational>;

static Poly var(int n, Space sp, int i) { return Poly::variable(n, sp, i); }
static MV e(int n, int i) { return MV::basis_vector(n, i - 1); }

static Poly random_monogenic(std::mt19937_64& rng, int n, Space sp, int k) {
  auto basis = basis_P_sigma<Rational>(n, k, sp, false);
  Poly p(n);
  for (const auto& el : basis.elements)
    p += el.mv_right(rsctest::random_multivector(rng, n, 2));
  return p;
}

TEST_CASE("the constant c_k") {
  CHECK(rs_ck(3, 1) == rat(1, 3));
  CHECK(rs_ck(3, 0) == 1);
  CHECK(rs_ck(4, 0) == 1);
  CHECK(rs_ck(4, 2) == rat(1, 3));
  CHECK(rs_ck(3, 2) == rat(1, 5));
  CHECK_THROWS(rs_ck(2, 1));
}

TEST_CASE("R_k kills x-independent monogenics") {
  auto rng = make_rng(111);
  for (int n : {3, 4})
    for (int k : {0, 1, 2, 3}) {
      Poly p = random_monogenic(rng, n, Space::u, k);
      CHECK(apply_Rk(p, Space::x, Space::u).is_zero());
    }
}

TEST_CASE("R_k worked example") {
  int n = 3;
  Poly z2 = monogenic_factor<Rational>(n, 2, Space::u);
  Poly f = var(n, Space::x, 0) * z2;
  Poly got = apply_Rk(f, Space::x, Space::u);
  // (u_2 e_1 - u_1 e_2 - 2 u_3 e_123) / 3, by hand from (uD_u/3 + 1) e_1 z_2
  Poly expect = (var(n, Space::u, 1).mv_left(e(n, 1)) -
                 var(n, Space::u, 0).mv_left(e(n, 2)) -
                 Rational(2) * var(n, Space::u, 2).mv_left(e(n, 1) * e(n, 2) * e(n, 3))) *
                rat(1, 3);
  CHECK(got == expect);
  CHECK(is_monogenic(got, Space::u));

  // non-monogenic spinor dependence is rejected
  Poly bad = var(n, Space::u, 0);
  CHECK_THROWS(apply_Rk(bad, Space::x, Space::u));
  CHECK_THROWS(RSFunction<Rational, Poly>(bad, Space::x, Space::u));
}

TEST_CASE("R_k output stays monogenic in u") {
  auto rng = make_rng(113);
  for (int t = 0; t < 6; ++t) {
    int n = 3 + t % 2;
    int k = 1 + t % 3;
    Poly p = random_monogenic(rng, n, Space::u, k);
    Poly xfact(n);
    Monomial m;
    m.set(Space::x, (int)rand_int(rng, 0, n - 1), 2);
    xfact.add_term(m, MV::scalar(n, Rational(1)));
    Poly f = xfact * p;
    Poly rf = apply_Rk(f, Space::x, Space::u);
    CHECK(is_monogenic(rf, Space::u));
    Poly rfr = apply_Rk(reversion_coeffs(f), Space::x, Space::u, Side::right);
    CHECK(is_monogenic(rfr, Space::u, Side::right));
    CHECK(rfr == reversion_coeffs(rf));
  }
}

TEST_CASE("fundamental kernel construction") {
  for (int n : {3, 4}) {
    auto E0 = build_Ek(n, 0, build_Zk<Rational>(n, 0));
    CHECK(E0.F == -fundamental_solution<Rational>(n, Space::x));
    CHECK(E0.ck == 1);
  }
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {4, 1}}) {
    auto E = build_Ek(n, k, build_Zk<Rational>(n, k));
    CHECK(E.F.spow() == n + 2 * k);
    CHECK(E.F.num().is_homogeneous(Space::x, 2 * k + 1));
    CHECK(E.F.num().is_homogeneous(Space::u, k));
    CHECK(E.F.num().is_homogeneous(Space::v, k));
  }
}

TEST_CASE("the two representations agree") {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 0}, {3, 1}, {3, 2}, {4, 1}}) {
    auto Z = build_Zk<Rational>(n, k);
    Poly xvec = vector_poly<Rational>(n, Space::x);
    Poly xux = xvec * vector_poly<Rational>(n, Space::u) * xvec;
    Poly xvx = xvec * vector_poly<Rational>(n, Space::v) * xvec;
    std::vector<Poly> uim, vim;
    for (int i = 0; i < n; ++i) {
      uim.push_back(xux.component(i));
      vim.push_back(xvx.component(i));
    }
    Poly left = xvec * substitute(Z.poly, Space::u, uim);
    Poly right = substitute(Z.poly, Space::v, vim) * xvec;
    CHECK(left == right);
  }
}

TEST_CASE("E_k is annihilated on both sides") {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 0}, {3, 1}, {3, 2}, {4, 1}}) {
    auto E = build_Ek(n, k, build_Zk<Rational>(n, k));
    CHECK(left_annihilation_check(E).is_zero());
    CHECK(right_annihilation_check(E).is_zero());
  }
}

TEST_CASE("spinor sphere averaging") {
  int n = 3;
  // constants pass through
  MV a = MV::scalar(n, rat(2, 7)) + e(n, 1) * rat(1, 2);
  auto [l0, r0] = lemma6_check(Poly::constant(n, a));
  CHECK(l0 == r0);
  CHECK(l0 == Poly::constant(n, a));

  // degree one: mean of z_2(xux) is z_2/3
  Poly z2 = monogenic_factor<Rational>(n, 2, Space::u);
  auto [l1, r1] = lemma6_check(z2);
  CHECK(l1 == z2 * rat(1, 3));
  CHECK(l1 == r1);

  // degree two: (u_1^2 - u_2^2) / 5
  Poly h2 = var(n, Space::u, 0) * var(n, Space::u, 0) -
            var(n, Space::u, 1) * var(n, Space::u, 1);
  auto [l2, r2] = lemma6_check(h2);
  CHECK(l2 == h2 * rat(1, 5));
  CHECK(l2 == r2);

  CHECK_THROWS(lemma6_check(r2_poly<Rational>(n, Space::u)));
}

TEST_CASE("spinor sphere averaging spans the harmonics") {
  auto rng = make_rng(127);
  for (int n : {3, 4, 5})
    for (int k : {0, 1, 2, 3}) {
      auto sigmas = enumerate_sigma(n + 1, k);
      // harmonic spanning set: harmonic parts of all degree-k monomials
      int checked = 0;
      for (const auto& s : sigmas) {
        Monomial m;
        for (int i = 0; i < n; ++i) m.set(Space::u, i, s[(size_t)i]);
        Poly mono(n);
        mono.add_term(m, MV::scalar(n, Rational(1)));
        Poly h = harmonic_components(mono, Space::u)[0];
        if (h.is_zero()) continue;
        auto [lhs, rhs] = lemma6_check(h);
        CHECK(lhs == rhs);
        ++checked;
      }
      CHECK(checked > 0);
    }
}

TEST_CASE("gegenbauer evaluation") {
  for (int m : {0, 1, 2, 3, 4})
    for (auto lam : {rat(1, 2), Rational(1), rat(3, 2)}) {
      CHECK(gegenbauer_P(m, lam, Rational(1)) == 1);
    }
  // P_1 = t for every lambda
  for (auto lam : {rat(1, 2), Rational(1), rat(3, 2)})
    CHECK(gegenbauer_P(1, lam, rat(2, 5)) == rat(2, 5));
  // P_2^{1/2} is the Legendre quadratic
  CHECK(gegenbauer_P(2, rat(1, 2), rat(1, 2)) == rat(-1, 8));
}

TEST_CASE("gegenbauer integral identity") {
  auto [l31, r31] = gegenbauer_integral_check(3, 1);
  CHECK(std::abs(r31 - 2.0 / 3.0) < 1e-14);
  CHECK(std::abs(l31 - r31) < 1e-13);

  for (int n : {3, 4, 5})
    for (int k = 0; k <= 4; ++k) {
      auto [lhs, rhs] = gegenbauer_integral_check(n, k);
      CHECK(std::abs(lhs - rhs) < 1e-12);
      // the normalized value is exactly c_k
      auto [l0, r0] = gegenbauer_integral_check(n, 0);
      CHECK(std::abs(rhs / r0 - to_double(rs_ck(n, k))) < 1e-13);
    }
}
