#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "rsc/conformal.hpp"
#include "testutil.hpp"

using namespace rsc;
using rsctest::make_rng;
using rsctest::rand_int;
using rsctest::rand_rational;

namespace {

using MV = Multivector<Rational>;
using Poly = MPoly<Rational>;

MV sc(int n, const Rational& s) { return MV::scalar(n, s); }
MV ev(int n, int i) { return MV::basis_vector(n, i); }
MV vec(int n, std::vector<Rational> x) {
  x.resize((size_t)n, Rational(0));
  return MV::from_vector(n, x);
}
MV zero(int n) { return MV(n); }

// Unit rotor (3 + 4 e_1 e_2)/5: a rev(a) = (9 + 16)/25 = 1.
MV unit_rotor(int n) {
  MV a = sc(n, rat(3, 5));
  a.add_term((Blade(1) << 0) | (Blade(1) << 1), rat(4, 5));
  return a;
}

// z_j(u) = u_j + u_1 e_1 e_j (1-based j >= 2): degree-1 left-monogenic.
Poly zpoly(int n, int j) {
  Poly p = Poly::variable(n, Space::u, j - 1);
  Poly q = Poly::variable(n, Space::u, 0);
  MV b(n);
  b.add_term((Blade(1) << 0) | (Blade(1) << (j - 1)), Rational(1));
  return p + q.mv_left(b);
}

Poly random_homogeneous_u(std::mt19937_64& rng, int n, int k) {
  if (k == 0) return Poly::constant(n, rand_rational(rng));
  Poly out(n);
  for (int t = 0; t < 4; ++t) {
    Poly m = Poly::constant(n, rand_rational(rng));
    for (int d = 0; d < k; ++d)
      m = m * Poly::variable(n, Space::u, (int)rand_int(rng, 0, n - 1));
    out += m;
  }
  return out;
}

// Random harmonic homogeneous degree-k polynomial in u (top Fischer part).
Poly random_harmonic_u(std::mt19937_64& rng, int n, int k) {
  for (;;) {
    Poly p = random_homogeneous_u(rng, n, k);
    if (p.is_zero()) continue;
    Poly h = harmonic_components(p, Space::u)[0];
    if (!h.is_zero()) return h;
  }
}

// Random left-monogenic homogeneous degree-k polynomial in u.
Poly random_monogenic_u(std::mt19937_64& rng, int n, int k) {
  for (;;) {
    Poly m = projection_Pk(random_harmonic_u(rng, n, k), Space::u);
    if (!m.is_zero()) return m;
  }
}

// Random x-monomial of degree <= 2 to decorate u-polynomials.
Poly random_x_factor(std::mt19937_64& rng, int n) {
  Poly m = Poly::constant(n, Rational(1));
  int d = (int)rand_int(rng, 0, 2);
  for (int i = 0; i < d; ++i)
    m = m * Poly::variable(n, Space::x, (int)rand_int(rng, 0, n - 1));
  return m;
}

std::vector<Rational> rand_point(std::mt19937_64& rng, int n) {
  std::vector<Rational> x;
  for (int i = 0; i < n; ++i) x.push_back(rand_rational(rng, 6, 3));
  return x;
}

// Standard composite matrices with unit-norm c blocks, so |cx+d|^2 is a
// perfect square at the constrained sample points used for jet checks.
std::vector<VahlenMatrix<Rational>> composite_matrices(int n) {
  std::vector<Rational> t((size_t)n, Rational(0));
  t[0] = rat(1, 2);
  t[1] = Rational(-1);
  VahlenMatrix<Rational> T = vahlen_translation(n, t);
  VahlenMatrix<Rational> I = vahlen_inversion(n);
  VahlenMatrix<Rational> D = vahlen_dilation(n, Rational(2));
  VahlenMatrix<Rational> Re = vahlen_orthogonal(n, ev(n, 0));
  VahlenMatrix<Rational> Ro = vahlen_orthogonal(n, unit_rotor(n));
  return {T * I, I * D * T, Re * I * T, Ro * I * T};
}

// x0 with q = c x0 + d of perfect-square norm for the composites above:
// every c block there has |c|^2 in {1, 4} and -c^{-1} d = -t, so
// x0 = -t + rho * vhat with a Pythagorean unit vector vhat works.
std::vector<Rational> constrained_point(const VahlenMatrix<Rational>& M,
                                        const Rational& rho, int which) {
  int n = M.n;
  std::vector<Rational> vhat;
  if (n == 3)
    vhat = which ? std::vector<Rational>{rat(2, 3), rat(2, 3), rat(1, 3)}
                 : std::vector<Rational>{rat(3, 5), rat(4, 5), Rational(0)};
  else
    vhat = which ? std::vector<Rational>{rat(1, 2), rat(1, 2), rat(1, 2),
                                         rat(1, 2)}
                 : std::vector<Rational>{rat(2, 3), rat(2, 3), rat(1, 3),
                                         Rational(0)};
  MV base = M.c.is_zero()
                ? MV(n)
                : MV(n) - M.c.versor_inverse() * M.d;  // pole of phi
  std::vector<Rational> x0 = (base + vec(n, vhat) * rho).to_vector();
  return x0;
}

}  // namespace

TEST_CASE("vahlen constructor accepts the standard families") {
  for (int n : {3, 4}) {
    auto T = vahlen_translation(n, std::vector<Rational>(n, rat(1, 3)));
    CHECK(T.eps == Rational(1));
    auto D = vahlen_dilation(n, Rational(2));
    CHECK(D.eps == Rational(1));
    CHECK(D.a == sc(n, Rational(2)));
    CHECK(D.d == sc(n, rat(1, 2)));
    auto I = vahlen_inversion(n);
    CHECK(I.eps == Rational(-1));
    auto Re = vahlen_orthogonal(n, ev(n, 0));
    CHECK(Re.eps == Rational(1));
    CHECK(Re.d == zero(n) - ev(n, 0));
    auto Ro = vahlen_orthogonal(n, unit_rotor(n));
    CHECK(Ro.eps == Rational(1));
    CHECK(Ro.d == unit_rotor(n));
    for (const auto& M : composite_matrices(n))
      CHECK((M.eps == Rational(1) || M.eps == Rational(-1)));
  }
}

TEST_CASE("vahlen constructor rejects seeded invalid matrices") {
  int n = 3;
  MV one = sc(n, Rational(1));
  MV e1 = ev(n, 0);
  MV e12(n);
  e12.add_term(3u, Rational(1));
  MV parav = one + e1;  // mixed parity, (1+e1)(1+e1)~ = 2 e1 not scalar

  CHECK_THROWS_WITH_AS(make_vahlen(n, parav, zero(n), zero(n), one),
                       "invalid Vahlen matrix: entry a is not a versor or zero",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_vahlen(n, one, e12, zero(n), one),
                       "invalid Vahlen matrix: a rev(b) has grade above 1",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_vahlen(n, one, zero(n), e12, one),
                       "invalid Vahlen matrix: c rev(d) has grade above 1",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_vahlen(n, one, zero(n), zero(n), e1),
                       "invalid Vahlen matrix: a and d have different parities",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      make_vahlen(n, one, one, zero(n), one),
      "invalid Vahlen matrix: diagonal and antidiagonal parities coincide",
      std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_vahlen(n, sc(n, Rational(2)), zero(n), zero(n), one),
                       "invalid Vahlen matrix: pseudo-determinant is not +-1",
                       std::invalid_argument);
  // (1 - e1 e1~) = 2: all four products paravector yet det != +-1.
  CHECK_THROWS_WITH_AS(make_vahlen(n, one, e1, e1, one),
                       "invalid Vahlen matrix: pseudo-determinant is not +-1",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      make_vahlen(n, sc(2, Rational(1)), zero(n), zero(n), one),
      "invalid Vahlen matrix: entry dimension mismatch", std::invalid_argument);
}

TEST_CASE("moebius action matches the closed-form maps") {
  auto rng = make_rng(2026);
  for (int n : {3, 4}) {
    std::vector<Rational> t((size_t)n, rat(-2, 3));
    auto T = vahlen_translation(n, t);
    auto I = vahlen_inversion(n);
    auto D = vahlen_dilation(n, Rational(2));
    auto Ro = vahlen_orthogonal(n, unit_rotor(n));
    for (int rep = 0; rep < 20; ++rep) {
      MV X = rsctest::random_vector_mv(rng, n);
      CHECK(mobius_apply(T, X) == X + vec(n, t));
      CHECK(mobius_apply(D, X) == X * Rational(4));
      MV a = unit_rotor(n);
      CHECK(mobius_apply(Ro, X) == (a * X * a.reversion()).grade_part(1));
      MV inv = X;
      inv.scale(Rational(-1) / X.norm_squared());
      CHECK(mobius_apply(I, X) == inv);
    }
    CHECK_THROWS_AS(mobius_apply(I, zero(n)), std::domain_error);
    CHECK_THROWS_AS(mobius_apply(I, sc(n, Rational(1))),
                    std::invalid_argument);
  }
}

TEST_CASE("iwasawa form agrees with the direct formula at random points") {
  auto rng = make_rng(411);
  for (int n : {3, 4}) {
    std::vector<VahlenMatrix<Rational>> mats = composite_matrices(n);
    mats.push_back(vahlen_inversion(n));
    mats.push_back(vahlen_translation(n, std::vector<Rational>(n, rat(1, 7))));
    mats.push_back(vahlen_dilation(n, rat(3, 2)));
    mats.push_back(vahlen_orthogonal(n, unit_rotor(n)));
    mats.push_back(vahlen_orthogonal(n, ev(n, 1)));
    int done = 0;
    while (done < 100) {
      MV X = rsctest::random_vector_mv(rng, n);
      for (const auto& M : mats) {
        if (vahlen_q(M, X).is_zero()) continue;
        auto F = iwasawa_form(M);
        CHECK(iwasawa_apply(F, X) == mobius_apply(M, X));
      }
      ++done;
    }
  }
}

TEST_CASE("conformal weights match the closed forms") {
  int n = 3;
  auto T = vahlen_translation(n, {rat(1, 2), Rational(0), Rational(3)});
  auto I = vahlen_inversion(n);
  MV X = vec(n, {Rational(0), Rational(0), Rational(2)});
  CHECK(weight_J(T, X, WeightKind::J1) == sc(n, Rational(1)));
  CHECK(weight_J(T, X, WeightKind::Jm1) == sc(n, Rational(1)));
  MV e3q = ev(n, 2);
  e3q.scale(rat(1, 4));
  CHECK(weight_J(I, X, WeightKind::J1) == e3q);
  MV e3q2 = ev(n, 2);
  e3q2.scale(rat(1, 16));
  CHECK(weight_J(I, X, WeightKind::Jm1) == e3q2);
  // Dilation x -> 4x: q = 1/2, J_1 = (1/2)^{1-n} = 4 for n = 3.
  auto D = vahlen_dilation(n, Rational(2));
  CHECK(weight_J(D, X, WeightKind::J1) == sc(n, Rational(4)));
}

TEST_CASE("u_transform preserves norm and matches the substitution examples") {
  auto rng = make_rng(88);
  for (int n : {3, 4}) {
    auto mats = composite_matrices(n);
    mats.push_back(vahlen_inversion(n));
    mats.push_back(vahlen_orthogonal(n, ev(n, 0)));
    mats.push_back(vahlen_orthogonal(n, unit_rotor(n)));
    for (int rep = 0; rep < 12; ++rep) {
      MV X = rsctest::random_vector_mv(rng, n);
      MV W = rsctest::random_vector_mv(rng, n);
      for (const auto& M : mats) {
        if (vahlen_q(M, X).is_zero()) continue;
        for (bool rev : {false, true}) {
          MV out = u_transform(M, X, W, rev);
          CHECK(out.norm_squared() == W.norm_squared());
        }
      }
      // Translation and dilation leave w unchanged.
      auto T = vahlen_translation(n, std::vector<Rational>(n, rat(2, 5)));
      auto D = vahlen_dilation(n, Rational(3));
      CHECK(u_transform(T, X, W) == W);
      CHECK(u_transform(D, X, W) == W);
      // Inversion: w -> x w x / |x|^2.
      MV xwx = X * W * X;
      xwx.scale(Rational(1) / X.norm_squared());
      CHECK(u_transform(vahlen_inversion(n), X, W) == xwx.grade_part(1));
      // Reflection a = e_1 and rotor a: w -> rev(a) w a.
      for (MV a : {ev(n, 0), unit_rotor(n)}) {
        MV awa = (a.reversion() * W * a).grade_part(1);
        CHECK(u_transform(vahlen_orthogonal(n, a), X, W) == awa);
      }
    }
  }
}

TEST_CASE("spinor transport direction is fixed by the projection identity") {
  // With the J_1 prefactor ~ rev(q), P_k commutes only through the
  // conjugation u'(w) = q w rev(q)/|q|^2. The opposite direction must fail
  // on a matrix whose q is a non-self-reversed versor (a rotor).
  int n = 3;
  auto M = vahlen_orthogonal(n, unit_rotor(n));
  std::vector<Rational> x0 = {rat(1, 3), Rational(2), Rational(-1)};
  std::vector<Poly> fs = {
      Poly::variable(n, Space::u, 1),
      Poly::variable(n, Space::u, 2) * Poly::variable(n, Space::x, 0),
      Poly::variable(n, Space::u, 0) * Poly::variable(n, Space::u, 1)};
  bool wrong_direction_detected = false;
  for (const auto& f : fs) {
    CHECK(theorem1_residual(M, f, x0, /*transport_reversed=*/true).is_zero());
    if (!theorem1_residual(M, f, x0, /*transport_reversed=*/false).is_zero())
      wrong_direction_detected = true;
  }
  CHECK(wrong_direction_detected);
}

TEST_CASE("reflection intertwining of P_k is exact (symbolic in x, u)") {
  auto rng = make_rng(7311);
  // Frozen example: a = e_1, f = u_2 x_1.
  {
    int n = 3;
    Poly f = Poly::variable(n, Space::u, 1) * Poly::variable(n, Space::x, 0);
    CHECK(lemma1_residual(f, ev(n, 0)).is_zero());
  }
  for (int n : {3, 4}) {
    std::vector<MV> versors = {ev(n, 0), unit_rotor(n)};
    if (n == 3)
      versors.push_back(vec(n, {rat(3, 5), rat(4, 5), Rational(0)}));
    else
      versors.push_back(
          vec(n, {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)}));
    for (int k = 0; k <= 2; ++k) {
      Poly f = random_harmonic_u(rng, n, k) * random_x_factor(rng, n);
      for (const auto& a : versors) CHECK(lemma1_residual(f, a).is_zero());
    }
  }
}

TEST_CASE("reflection intertwining of R_k carries the parity sign") {
  auto rng = make_rng(9257);
  // Frozen example: a = e_1, f = x_1 z_2(u).
  {
    int n = 3;
    Poly f = zpoly(n, 2) * Poly::variable(n, Space::x, 0);
    CHECK(theorem2_residual(f, ev(n, 0)).is_zero());
  }
  for (int n : {3, 4}) {
    std::vector<MV> versors = {ev(n, 0), unit_rotor(n)};
    if (n == 3)
      versors.push_back(vec(n, {rat(2, 3), rat(2, 3), rat(1, 3)}));
    for (int k = 0; k <= 2; ++k) {
      Poly f = random_monogenic_u(rng, n, k) * random_x_factor(rng, n);
      for (const auto& a : versors) CHECK(theorem2_residual(f, a).is_zero());
    }
  }
}

TEST_CASE("inversion intertwining of P_k is exact") {
  auto rng = make_rng(5150);
  // Frozen example: f = u_2, x-independent.
  CHECK(lemma2_residual(Poly::variable(3, Space::u, 1)).is_zero());
  for (int n : {3, 4})
    for (int k = 0; k <= 2; ++k) {
      Poly f = random_harmonic_u(rng, n, k) * random_x_factor(rng, n);
      CHECK(lemma2_residual(f).is_zero());
    }
}

TEST_CASE("inversion intertwining of R_k is exact") {
  auto rng = make_rng(6180);
  // Frozen example: f = z_2(u), so both sides vanish identically.
  {
    RadialRational<Rational> lhs = apply_Rk(
        inversion_weight_G(3) * inversion_pullback(zpoly(3, 2)), Space::x,
        Space::w, Side::left);
    CHECK(lhs.num().is_zero());
    CHECK(theorem3_residual(zpoly(3, 2)).is_zero());
  }
  // x-dependent solutions exercise the full weight cancellation.
  CHECK(theorem3_residual(zpoly(3, 2) * Poly::variable(3, Space::x, 0))
            .is_zero());
  for (int n : {3, 4})
    for (int k = 0; k <= 2; ++k) {
      Poly f = random_monogenic_u(rng, n, k) * random_x_factor(rng, n);
      CHECK(theorem3_residual(f).is_zero());
    }
}

TEST_CASE("translation and dilation invariance of P_k") {
  auto rng = make_rng(321);
  for (int n : {3, 4})
    for (int k = 0; k <= 2; ++k) {
      Poly f = random_harmonic_u(rng, n, k) * random_x_factor(rng, n);
      std::vector<Rational> t = rand_point(rng, n);
      CHECK(lemma3_residual(f, t).is_zero());
      CHECK(lemma4_residual(f, rat(3, 2)).is_zero());
    }
}

TEST_CASE("general P_k intertwining at rational points") {
  auto rng = make_rng(14142);
  for (int n : {3, 4}) {
    auto mats = composite_matrices(n);
    for (int k = 0; k <= 2; ++k) {
      Poly f = random_harmonic_u(rng, n, k) * random_x_factor(rng, n);
      for (const auto& M : mats) {
        for (int rep = 0; rep < 2; ++rep) {
          std::vector<Rational> x0 = rand_point(rng, n);
          MV X = vec(n, x0);
          if (vahlen_q(M, X).is_zero()) continue;
          CHECK(theorem1_residual(M, f, x0).is_zero());
        }
      }
    }
  }
}

TEST_CASE("dirac operator conformal weight identity via jets") {
  auto rng = make_rng(2718);
  for (int n : {3, 4}) {
    // Translation: any polynomial, any sample.
    {
      auto T = vahlen_translation(n, std::vector<Rational>(n, rat(1, 3)));
      Poly f = Poly::variable(n, Space::x, 0) * Poly::variable(n, Space::x, 1) +
               Poly::variable(n, Space::x, n - 1).mv_left(ev(n, 0));
      CHECK(dirac_conformal_residual(T, f, rand_point(rng, n)).is_zero());
    }
    // Inversion at a perfect-square point; u-only and x-dependent inputs.
    {
      auto I = vahlen_inversion(n);
      std::vector<Rational> x0 =
          n == 3 ? std::vector<Rational>{Rational(1), Rational(2), Rational(2)}
                 : std::vector<Rational>{Rational(1), Rational(2), Rational(2),
                                         Rational(4)};
      Poly pk = Poly::variable(n, Space::u, 1);
      CHECK(dirac_conformal_residual(I, pk, x0).is_zero());
      Poly f = Poly::variable(n, Space::x, 0) * Poly::variable(n, Space::u, 1);
      CHECK(dirac_conformal_residual(I, f, x0).is_zero());
      Poly g = Poly::variable(n, Space::x, 0) * Poly::variable(n, Space::x, 2);
      CHECK(dirac_conformal_residual(I, g, x0).is_zero());
    }
    // Reflection a = e_1.
    {
      auto Re = vahlen_orthogonal(n, ev(n, 0));
      Poly f = Poly::variable(n, Space::x, 0) * Poly::variable(n, Space::x, 1);
      CHECK(dirac_conformal_residual(Re, f, rand_point(rng, n)).is_zero());
    }
    // Composites at constrained sample points.
    for (const auto& M : composite_matrices(n)) {
      Poly f = Poly::variable(n, Space::x, 1) * Poly::variable(n, Space::x, 1) +
               Poly::variable(n, Space::x, 0).mv_left(ev(n, n - 1));
      for (int which : {0, 1}) {
        std::vector<Rational> x0 = constrained_point(M, Rational(2), which);
        CHECK(dirac_conformal_residual(M, f, x0).is_zero());
      }
    }
  }
}

TEST_CASE("R_k conformal invariance via jets") {
  int n = 3;
  auto mats = composite_matrices(n);
  // k = 0: reduces to the Dirac weight identity.
  {
    Poly f = Poly::variable(n, Space::x, 0) * Poly::variable(n, Space::x, 1);
    CHECK(theorem4_residual(mats[0], f, constrained_point(mats[0], Rational(2), 0))
              .is_zero());
  }
  // k = 1, x-independent and x-dependent solutions.
  for (const auto& M : mats) {
    std::vector<Rational> x0 = constrained_point(M, Rational(3), 0);
    CHECK(theorem4_residual(M, zpoly(n, 2), x0).is_zero());
    CHECK(theorem4_residual(M, zpoly(n, 3) * Poly::variable(n, Space::x, 0), x0)
              .is_zero());
  }
  // k = 2 on one composite; n = 4 on one composite.
  {
    auto rng = make_rng(31337);
    Poly f2 = random_monogenic_u(rng, 3, 2);
    CHECK(theorem4_residual(mats[1], f2,
                            constrained_point(mats[1], Rational(2), 1))
              .is_zero());
    auto mats4 = composite_matrices(4);
    CHECK(theorem4_residual(mats4[2], zpoly(4, 3),
                            constrained_point(mats4[2], Rational(2), 0))
              .is_zero());
  }
  // Translation component only: R_k f(x,u) = R_k f(y+a,u) shifted.
  {
    auto T = vahlen_translation(n, {rat(1, 2), Rational(0), Rational(-1)});
    Poly f = zpoly(n, 2) * Poly::variable(n, Space::x, 2);
    CHECK(theorem4_residual(T, f, {Rational(1), rat(1, 3), Rational(0)})
              .is_zero());
  }
}

TEST_CASE("moebius difference identity and differential at rational points") {
  auto rng = make_rng(777);
  for (int n : {3, 4}) {
    auto mats = composite_matrices(n);
    mats.push_back(vahlen_inversion(n));
    mats.push_back(vahlen_orthogonal(n, unit_rotor(n)));
    for (const auto& M : mats) {
      int done = 0;
      while (done < 4) {
        std::vector<Rational> x0 = rand_point(rng, n);
        std::vector<Rational> y0 = rand_point(rng, n);
        MV X = vec(n, x0), Y = vec(n, y0);
        if ((X - Y).is_zero() || vahlen_q(M, X).is_zero() ||
            vahlen_q(M, Y).is_zero())
          continue;
        CHECK(difference_identity_residual(M, x0, y0).is_zero());
        ++done;
      }
      for (int which : {0, 1}) {
        std::vector<Rational> x0 = constrained_point(M, Rational(2), which);
        for (const auto& r : mobius_differential_residual(M, x0))
          CHECK(r.is_zero());
      }
    }
  }
}

TEST_CASE("kernel reflection law is exact (fully symbolic)") {
  // Frozen example: a = e_1, (n,k) = (3,1).
  {
    auto Z = build_Zk<Rational>(3, 1);
    CHECK(kernel_reflection_residual(Z, ev(3, 0)).is_zero());
  }
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 0}, {3, 2}, {4, 1}}) {
    auto Z = build_Zk<Rational>(n, k);
    CHECK(kernel_reflection_residual(Z, ev(n, 1)).is_zero());
    CHECK(kernel_reflection_residual(Z, unit_rotor(n)).is_zero());
  }
  {
    auto Z = build_Zk<Rational>(3, 1);
    CHECK(kernel_reflection_residual(
              Z, vec(3, {rat(3, 5), rat(4, 5), Rational(0)}))
              .is_zero());
  }
}

TEST_CASE("kernel transformation law at rational point pairs") {
  auto rng = make_rng(60221);
  // Frozen example: inversion, (n,k) = (3,1), x = 2 e_1, y = 3 e_2.
  {
    auto Z = build_Zk<Rational>(3, 1);
    auto I = vahlen_inversion(3);
    CHECK(kernel_general_residual(Z, I, {Rational(2), Rational(0), Rational(0)},
                                  {Rational(0), Rational(3), Rational(0)})
              .is_zero());
    // Translation: both sides are the kernel at x - y.
    auto T = vahlen_translation(3, {rat(5, 3), Rational(-2), rat(1, 7)});
    CHECK(kernel_general_residual(Z, T, {Rational(1), rat(1, 2), Rational(0)},
                                  {Rational(0), Rational(2), Rational(-1)})
              .is_zero());
  }
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 0}, {3, 1}, {3, 2},
                                                      {4, 1}}) {
    auto Z = build_Zk<Rational>(n, k);
    for (const auto& M : composite_matrices(n)) {
      int done = 0;
      while (done < 2) {
        std::vector<Rational> x0 = rand_point(rng, n);
        std::vector<Rational> y0 = rand_point(rng, n);
        MV X = vec(n, x0), Y = vec(n, y0);
        if ((X - Y).is_zero() || vahlen_q(M, X).is_zero() ||
            vahlen_q(M, Y).is_zero())
          continue;
        CHECK(kernel_general_residual(Z, M, x0, y0).is_zero());
        ++done;
      }
    }
  }
}

TEST_CASE("vahlen conversion to double tracks the rational action") {
  auto Mq = composite_matrices(3)[1];
  auto Md = Mq.convert<double>();
  std::vector<Rational> x0 = {rat(1, 3), Rational(2), Rational(-1)};
  MV X = vec(3, x0);
  Multivector<double> Xd = X.convert<double>();
  MV yq = mobius_apply(Mq, X);
  Multivector<double> yd = mobius_apply(Md, Xd);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(to_double(yq.to_vector()[(size_t)i]) -
                   yd.to_vector()[(size_t)i]) < 1e-12);
}
