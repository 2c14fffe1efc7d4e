#pragma once

// Conformal transformations as 2x2 Clifford (Vahlen) matrices, the Moebius
// action they induce, the associated weight factors, and exact residual
// computations for every intertwining identity of the projection and
// Rarita-Schwinger operators, including the kernel transformation laws.
//
// Conventions fixed here and verified by the test suite:
//   - phi(x) = (ax+b)(cx+d)^{-1}, entries versors or zero, pseudo-determinant
//     eps = a rev(d) - b rev(c) = +-1.
//   - The four products a rev(b), c rev(d), rev(b) c, rev(d) a may have
//     grade-0 and grade-1 parts only (translation and inversion matrices
//     produce scalars there, so a strict grade-1 test would reject them).
//   - J_1 = rev(cx+d)/|cx+d|^n, J_{-1} = (cx+d)/|cx+d|^{n+2}.
//   - Spinor transport u = rev(cx+d) w (cx+d)/|cx+d|^2 preserves norms.
//   - phi(x)-phi(y) = eps * rev(q_x)^{-1} (x-y) q_y^{-1} with q_x = cx+d.

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsc/jet.hpp"
#include "rsc/monogenic.hpp"
#include "rsc/radial.hpp"
#include "rsc/rarita.hpp"

namespace rsc {

// Grade parity of a nonzero multivector: 0 even, 1 odd, -1 mixed.
template <class S>
int grade_parity(const Multivector<S>& q) {
  int p = -1;
  for (const auto& [b, c] : q.terms()) {
    int g = std::popcount(b) & 1;
    if (p == -1)
      p = g;
    else if (p != g)
      return -1;
  }
  return p;
}

// Versor test adequate for n <= 5: parity-pure with q rev(q) a nonzero
// scalar. Zero passes (Vahlen entries may vanish).
template <class S>
bool is_versor_or_zero(const Multivector<S>& q) {
  if (q.is_zero()) return true;
  if (grade_parity(q) < 0) return false;
  Multivector<S> mu = q * q.reversion();
  return mu.is_grade(0) && !mu.is_zero();
}

template <class S>
S scalar_pow_int(S base, int e) {
  if (e < 0) {
    base = S(1) / base;
    e = -e;
  }
  S out(1);
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

inline Rational norm_sqrt(const Rational& r) { return sqrt_exact(r); }
inline double norm_sqrt(double r) { return std::sqrt(r); }

template <class S>
struct VahlenMatrix {
  int n = 0;
  Multivector<S> a, b, c, d;
  S eps{};  // pseudo-determinant, +1 or -1

  template <class T>
  VahlenMatrix<T> convert() const {
    VahlenMatrix<T> out;
    out.n = n;
    out.a = a.template convert<T>();
    out.b = b.template convert<T>();
    out.c = c.template convert<T>();
    out.d = d.template convert<T>();
    out.eps = scalar_cast<T>(eps);
    return out;
  }
};

// Validating constructor; throws std::invalid_argument naming the violated
// condition. All later operations assume a matrix built here.
inline VahlenMatrix<Rational> make_vahlen(int n, Multivector<Rational> a,
                                          Multivector<Rational> b,
                                          Multivector<Rational> c,
                                          Multivector<Rational> d) {
  auto fail = [](const char* what) {
    throw std::invalid_argument(std::string("invalid Vahlen matrix: ") + what);
  };
  if (a.dim() != n || b.dim() != n || c.dim() != n || d.dim() != n)
    fail("entry dimension mismatch");
  if (!is_versor_or_zero(a)) fail("entry a is not a versor or zero");
  if (!is_versor_or_zero(b)) fail("entry b is not a versor or zero");
  if (!is_versor_or_zero(c)) fail("entry c is not a versor or zero");
  if (!is_versor_or_zero(d)) fail("entry d is not a versor or zero");
  auto paravector = [](const Multivector<Rational>& q) {
    return q.max_grade() <= 1;
  };
  // Row pairs carry the reversion on the second factor, column pairs on the
  // first: this is the variant closed under matrix products (rev(b)c and
  // rev(d)a are NOT invariants: a rotor-translation-inversion-translation
  // composite gives them bivector parts while still being a valid map).
  if (!paravector(a * b.reversion())) fail("a rev(b) has grade above 1");
  if (!paravector(c * d.reversion())) fail("c rev(d) has grade above 1");
  if (!paravector(a.reversion() * c)) fail("rev(a) c has grade above 1");
  if (!paravector(d.reversion() * b)) fail("rev(d) b has grade above 1");
  // Parity coherence: {a,d} share parity, {b,c} share the opposite one.
  int pad = -1, pbc = -1;
  for (const auto* q : {&a, &d})
    if (!q->is_zero()) {
      int g = grade_parity(*q);
      if (pad != -1 && pad != g) fail("a and d have different parities");
      pad = g;
    }
  for (const auto* q : {&b, &c})
    if (!q->is_zero()) {
      int g = grade_parity(*q);
      if (pbc != -1 && pbc != g) fail("b and c have different parities");
      pbc = g;
    }
  if (pad != -1 && pbc != -1 && pad == pbc)
    fail("diagonal and antidiagonal parities coincide");
  Multivector<Rational> det = a * d.reversion() - b * c.reversion();
  if (!det.is_grade(0)) fail("pseudo-determinant is not a scalar");
  Rational eps = det.scalar_part();
  if (!(eps == Rational(1) || eps == Rational(-1)))
    fail("pseudo-determinant is not +-1");
  VahlenMatrix<Rational> M;
  M.n = n;
  M.a = std::move(a);
  M.b = std::move(b);
  M.c = std::move(c);
  M.d = std::move(d);
  M.eps = eps;
  return M;
}

// ---- factories -----------------------------------------------------------

inline VahlenMatrix<Rational> vahlen_translation(int n,
                                                 const std::vector<Rational>& t) {
  auto one = Multivector<Rational>::scalar(n, Rational(1));
  return make_vahlen(n, one, Multivector<Rational>::from_vector(n, t),
                     Multivector<Rational>(n), one);
}

// x -> s^2 x.
inline VahlenMatrix<Rational> vahlen_dilation(int n, const Rational& s) {
  return make_vahlen(n, Multivector<Rational>::scalar(n, s),
                     Multivector<Rational>(n), Multivector<Rational>(n),
                     Multivector<Rational>::scalar(n, Rational(1) / s));
}

inline VahlenMatrix<Rational> vahlen_inversion(int n) {
  auto one = Multivector<Rational>::scalar(n, Rational(1));
  return make_vahlen(n, Multivector<Rational>(n), one, one,
                     Multivector<Rational>(n));
}

// x -> a x rev(a) for a versor a (reflection for a vector, rotation for an
// even versor; a need not be unit, the d entry absorbs the scale).
inline VahlenMatrix<Rational> vahlen_orthogonal(int n,
                                                const Multivector<Rational>& a) {
  return make_vahlen(n, a, Multivector<Rational>(n), Multivector<Rational>(n),
                     a.reversion().versor_inverse());
}

inline VahlenMatrix<Rational> operator*(const VahlenMatrix<Rational>& L,
                                        const VahlenMatrix<Rational>& R) {
  if (L.n != R.n) throw std::invalid_argument("Vahlen product dimension");
  return make_vahlen(L.n, L.a * R.a + L.b * R.c, L.a * R.b + L.b * R.d,
                     L.c * R.a + L.d * R.c, L.c * R.b + L.d * R.d);
}

// ---- Moebius action ------------------------------------------------------

template <class S>
Multivector<S> vahlen_q(const VahlenMatrix<S>& M, const Multivector<S>& x) {
  return M.c * x + M.d;
}

template <class S>
Multivector<S> mobius_apply(const VahlenMatrix<S>& M, const Multivector<S>& x) {
  if (!x.is_grade(1) && !x.is_zero())
    throw std::invalid_argument("mobius_apply expects a grade-1 point");
  Multivector<S> q = vahlen_q(M, x);
  if (q.is_zero()) throw std::domain_error("Moebius map singular at this point");
  Multivector<S> y = (M.a * x + M.b) * q.versor_inverse();
  Multivector<S> y1 = y.grade_part(1);
  if constexpr (std::is_same_v<S, Rational>) {
    if (!(y - y1).is_zero())
      throw std::logic_error("Moebius image is not grade-1");
  }
  return y1;
}

// Cached Iwasawa-style closed form: affine when c = 0, otherwise a shifted
// inversion. Signs involve the pseudo-determinant; bd^{-1} and ac^{-1} are
// the translation parts.
template <class S>
struct IwasawaForm {
  bool affine = false;
  // affine: phi(x) = eps * a x rev(a) + shift, with a taken from the matrix
  // unscaled (its norm carries the dilation factor) and shift = b d^{-1}.
  Multivector<S> rot;    // a
  Multivector<S> shift;  // b d^{-1} (affine) or a c^{-1} (inversion type)
  Multivector<S> cc;     // c, for the q-part c x rev(c) + d rev(c)
  Multivector<S> dc;     // d rev(c)
  S eps{};
};

template <class S>
IwasawaForm<S> iwasawa_form(const VahlenMatrix<S>& M) {
  IwasawaForm<S> f;
  f.eps = M.eps;
  if (M.c.is_zero()) {
    f.affine = true;
    f.rot = M.a;
    f.shift = M.b * M.d.versor_inverse();
  } else {
    f.affine = false;
    f.shift = M.a.is_zero() ? Multivector<S>(M.n)
                            : M.a * M.c.versor_inverse();
    f.cc = M.c;
    f.dc = M.d * M.c.reversion();
  }
  return f;
}

template <class S>
Multivector<S> iwasawa_apply(const IwasawaForm<S>& f, const Multivector<S>& x) {
  if (f.affine) {
    Multivector<S> out = f.rot * x * f.rot.reversion();
    out.scale(f.eps);
    return out + f.shift;
  }
  Multivector<S> q = f.cc * x * f.cc.reversion() + f.dc;
  Multivector<S> inv = q.versor_inverse();
  inv.scale(S(0) - f.eps);
  return (f.shift + inv).grade_part(1);
}

// ---- weights and spinor transport ----------------------------------------

enum class WeightKind { J1, Jm1 };

// J1 = rev(q)/|q|^n, Jm1 = q/|q|^{n+2}, q = cx+d. Note the operator-level
// residual checks use eps q^{-1}/|q|^n (= eps sigma rev(q)/|q|^{n+2}) as
// the outgoing weight; it agrees with Jm1 up to sign whenever q is grade-1,
// which covers every classical special case but not rotor-bearing matrices.
template <class S>
Multivector<S> weight_J(const VahlenMatrix<S>& M, const Multivector<S>& x,
                        WeightKind kind) {
  Multivector<S> q = vahlen_q(M, x);
  if (q.is_zero()) throw std::domain_error("weight singular at this point");
  S s = norm_sqrt(q.norm_squared());
  if (kind == WeightKind::J1) {
    Multivector<S> out = q.reversion();
    out.scale(scalar_pow_int(s, -M.n));
    return out;
  }
  Multivector<S> out = q;
  out.scale(scalar_pow_int(s, -(M.n + 2)));
  return out;
}

// u = rev(q) w q / |q|^2 (reversed=false) or q w rev(q) / |q|^2; exact for
// any rational point, no square roots involved. Preserves norm_squared.
template <class S>
Multivector<S> u_transform(const VahlenMatrix<S>& M, const Multivector<S>& x,
                           const Multivector<S>& w, bool reversed = false) {
  Multivector<S> q = vahlen_q(M, x);
  if (q.is_zero()) throw std::domain_error("transport singular at this point");
  Multivector<S> out =
      reversed ? q * w * q.reversion() : q.reversion() * w * q;
  out.scale(S(1) / q.norm_squared());
  return out.grade_part(1);
}

// Images of the coordinates of sp under s -> A s rev(A), as scalar-coefficient
// polynomials; feed to substitute().
template <class S>
std::vector<MPoly<S>> spinor_conj_images(const Multivector<S>& A, Space sp) {
  int n = A.dim();
  MPoly<S> T = vector_poly<S>(n, sp).mv_left(A).mv_right(A.reversion());
  std::vector<MPoly<S>> images;
  for (int i = 0; i < n; ++i) images.push_back(T.component(i));
  return images;
}

// Images of the u-coordinates as polynomials in ws: rev(q) w q / |q|^2, or
// q w rev(q) / |q|^2 when reversed. The exported u_transform direction is
// the first; the P_k/R_k intertwining theorems need the second, because the
// projection identity collapses only when the scalar prefactor is the
// reversion of the conjugator (J_1 ~ rev(q) forces conjugator q there,
// while the kernel law's inverse weights ~ q force conjugator rev(q)).
template <class S>
std::vector<MPoly<S>> u_transform_images(const Multivector<S>& q, Space ws,
                                         bool reversed = false) {
  std::vector<MPoly<S>> images =
      spinor_conj_images(reversed ? q : q.reversion(), ws);
  S inv = S(1) / q.norm_squared();
  for (auto& p : images) p.scale(inv);
  return images;
}

// ---- intertwining residuals (all exact; zero iff the identity holds) -----

namespace conf_detail {

// Substitute x -> a x rev(a) and u -> a w rev(a) for a unit versor a.
inline MPoly<Rational> reflect_sub(const MPoly<Rational>& f,
                                   const Multivector<Rational>& a) {
  MPoly<Rational> g =
      substitute(f, Space::x, spinor_conj_images(a, Space::x));
  return substitute(g, Space::u, spinor_conj_images(a, Space::w));
}

}  // namespace conf_detail

// P_{k,w}[rev(a) f(a y rev(a), a w rev(a))] - rev(a) (P_{k,u} f)(same args);
// f harmonic homogeneous in u, polynomial in x. Fully symbolic.
inline MPoly<Rational> lemma1_residual(const MPoly<Rational>& f,
                                       const Multivector<Rational>& a) {
  MPoly<Rational> lhs =
      projection_Pk(conf_detail::reflect_sub(f, a).mv_left(a.reversion()),
                    Space::w);
  MPoly<Rational> rhs =
      conf_detail::reflect_sub(projection_Pk(f, Space::u), a)
          .mv_left(a.reversion());
  return lhs - rhs;
}

// R_{k,w}[rev(a) f(a y rev(a), a w rev(a))] - sigma rev(a) (R_k f)(same),
// sigma = +1 for even a, -1 for odd a (the Dirac conjugation picks up
// a rev(a) = sigma for unit versors). f monogenic homogeneous in u.
inline MPoly<Rational> theorem2_residual(const MPoly<Rational>& f,
                                         const Multivector<Rational>& a) {
  int par = grade_parity(a);
  if (par < 0) throw std::invalid_argument("mixed-parity versor");
  Rational sigma = par ? Rational(-1) : Rational(1);
  MPoly<Rational> lhs = apply_Rk(
      conf_detail::reflect_sub(f, a).mv_left(a.reversion()), Space::x,
      Space::w, Side::left);
  MPoly<Rational> rhs =
      conf_detail::reflect_sub(apply_Rk(f, Space::x, Space::u, Side::left), a)
          .mv_left(a.reversion()) *
      sigma;
  return lhs - rhs;
}

// f(y^{-1}, y w y / |y|^2) as a radial-rational function of y (Space::x),
// polynomial in w; f polynomial in (x, u), homogeneous of degree k in u.
inline RadialRational<Rational> inversion_pullback(const MPoly<Rational>& f) {
  int n = f.dim();
  int k = f.degree(Space::u);
  if (!f.is_zero() && !f.is_homogeneous(Space::u, k))
    throw std::invalid_argument("pullback needs u-homogeneous input");
  // u -> components of y w y (the 1/|y|^2 goes into the shared denominator).
  MPoly<Rational> yvec = vector_poly<Rational>(n, Space::x);
  MPoly<Rational> ywy = yvec * vector_poly<Rational>(n, Space::w) * yvec;
  std::vector<MPoly<Rational>> uimg;
  for (int i = 0; i < n; ++i) uimg.push_back(ywy.component(i));
  // x -> -y with denominator |y|^2 per x-degree.
  std::vector<MPoly<Rational>> ximg;
  for (int i = 0; i < n; ++i)
    ximg.push_back(-MPoly<Rational>::variable(n, Space::x, i));
  int D = f.degree(Space::x);
  RadialRational<Rational> out(MPoly<Rational>(n), 0, Space::x);
  for (int dd = 0; dd <= D; ++dd) {
    MPoly<Rational> part = f.homogeneous_part(Space::x, dd);
    if (part.is_zero()) continue;
    MPoly<Rational> num =
        substitute(substitute(part, Space::x, ximg), Space::u, uimg);
    out = out + RadialRational<Rational>(num, 2 * dd + 2 * k, Space::x);
  }
  return out;
}

// G(y) = y/|y|^n (positive sign, the inversion weight; the fundamental
// solution used elsewhere is -G).
inline RadialRational<Rational> inversion_weight_G(int n) {
  return RadialRational<Rational>(vector_poly<Rational>(n, Space::x), n,
                                  Space::x);
}

// P_{k,w}[G(y) f(y^{-1}, ywy/|y|^2)] - G(y) (P_{k,u} f)(y^{-1}, ywy/|y|^2).
inline RadialRational<Rational> lemma2_residual(const MPoly<Rational>& f) {
  RadialRational<Rational> G = inversion_weight_G(f.dim());
  RadialRational<Rational> lhs = detail::project_u(
      G * inversion_pullback(f), Space::w, Side::left);
  RadialRational<Rational> rhs = G * inversion_pullback(projection_Pk(f, Space::u));
  return lhs - rhs;
}

// R_{k,w}[G(y) f(y^{-1}, ywy/|y|^2)] - y/|y|^{n+2} (R_k f)(y^{-1}, ywy/|y|^2).
inline RadialRational<Rational> theorem3_residual(const MPoly<Rational>& f) {
  int n = f.dim();
  RadialRational<Rational> G = inversion_weight_G(n);
  RadialRational<Rational> lhs =
      apply_Rk(G * inversion_pullback(f), Space::x, Space::w, Side::left);
  RadialRational<Rational> Jm1(vector_poly<Rational>(n, Space::x), n + 2,
                               Space::x);
  RadialRational<Rational> rhs =
      Jm1 * inversion_pullback(apply_Rk(f, Space::x, Space::u, Side::left));
  return lhs - rhs;
}

// Translation invariance of P_k: substitution in x commutes with the
// u-projection.
inline MPoly<Rational> lemma3_residual(const MPoly<Rational>& f,
                                       const std::vector<Rational>& t) {
  int n = f.dim();
  std::vector<MPoly<Rational>> img;
  for (int i = 0; i < n; ++i)
    img.push_back(MPoly<Rational>::variable(n, Space::x, i) +
                  MPoly<Rational>::constant(n, t[(size_t)i]));
  MPoly<Rational> lhs = projection_Pk(substitute(f, Space::x, img), Space::u);
  MPoly<Rational> rhs = substitute(projection_Pk(f, Space::u), Space::x, img);
  return lhs - rhs;
}

// Dilation invariance of P_k.
inline MPoly<Rational> lemma4_residual(const MPoly<Rational>& f,
                                       const Rational& lam) {
  int n = f.dim();
  std::vector<MPoly<Rational>> img;
  for (int i = 0; i < n; ++i)
    img.push_back(MPoly<Rational>::variable(n, Space::x, i) * lam);
  MPoly<Rational> lhs = projection_Pk(substitute(f, Space::x, img), Space::u);
  MPoly<Rational> rhs = substitute(projection_Pk(f, Space::u), Space::x, img);
  return lhs - rhs;
}

// General P_k intertwining at one rational point, w symbolic, the common
// factor |q|^{-n/2} cleared from both sides:
//   P_{k,w}[rev(q) f(phi(x0), u'(w))] - rev(q) (P_{k,u} f)(phi(x0), u'(w)),
// u'(w) = q w rev(q)/|q|^2 (see u_transform_images on the direction).
inline MPoly<Rational> theorem1_residual(const VahlenMatrix<Rational>& M,
                                         const MPoly<Rational>& f,
                                         const std::vector<Rational>& x0,
                                         bool transport_reversed = true) {
  int n = M.n;
  Multivector<Rational> X = Multivector<Rational>::from_vector(n, x0);
  Multivector<Rational> q = vahlen_q(M, X);
  if (q.is_zero()) throw std::domain_error("singular sample");
  std::vector<Rational> y0 = mobius_apply(M, X).to_vector();
  MPoly<Rational> fy = evaluate_space(f, Space::x, y0);
  auto imgs = u_transform_images(q, Space::w, transport_reversed);
  MPoly<Rational> lhs = projection_Pk(
      substitute(fy, Space::u, imgs).mv_left(q.reversion()), Space::w);
  MPoly<Rational> rhs = substitute(projection_Pk(fy, Space::u), Space::u, imgs)
                            .mv_left(q.reversion());
  return lhs - rhs;
}

namespace conf_detail {

// Shared jet scaffolding at a base point: q, |q|^2, J_1, phi, and the
// coordinate jets of phi.
struct MobiusJets {
  MVJet X, Q, J1, Phi;
  Jet alpha;
  std::vector<Jet> y;
  std::vector<Rational> yval;
  // eps q^{-1}/|q|^n = eps sigma rev(q)/|q|^{n+2}: the weight that carries
  // (D_y f)(phi(x)) back to the x side. It equals q/|q|^{n+2} up to the
  // parity sign exactly when q is grade-1 (inversion, translation-inversion
  // mixes); for rotor-bearing matrices the reversion matters, and sampling
  // across such matrices singles this form out as the only one that zeroes
  // the residual everywhere.
  Multivector<Rational> Wback;
};

inline MobiusJets mobius_jets(const VahlenMatrix<Rational>& M,
                              const std::vector<Rational>& x0) {
  int n = M.n;
  MobiusJets J;
  J.X = MVJet::point(n, x0);
  J.Q = MVJet::constant(n, M.c) * J.X + MVJet::constant(n, M.d);
  if (J.Q.v.is_zero()) throw std::domain_error("singular sample");
  J.alpha = J.Q.norm_squared();
  J.J1 = scale(J.Q.reversion(), jet_pow_half(J.alpha, -n));
  J.Phi = (MVJet::constant(n, M.a) * J.X + MVJet::constant(n, M.b)) *
          versor_inverse(J.Q);
  for (int i = 0; i < n; ++i) {
    J.y.push_back(J.Phi.coeff(Blade(1u) << i));
    J.yval.push_back(J.y.back().v);
  }
  Rational s = sqrt_exact(J.alpha.v);
  int par = grade_parity(J.Q.v);
  if (par < 0) throw std::logic_error("mixed-parity Vahlen denominator");
  Rational sign = par ? -M.eps : M.eps;
  J.Wback = J.Q.v.reversion();
  J.Wback.scale(sign * rational_pow(Rational(1) / s, n + 2));
  return J;
}

// f(x, u) as a PolyJet: x replaced by the coordinate jets, u either kept
// symbolic (images empty) or replaced by the given PolyJet images.
inline PolyJet compose_poly(const MPoly<Rational>& f,
                            const std::vector<Jet>& y,
                            const std::vector<PolyJet>& uimg) {
  int n = f.dim();
  PolyJet out(n, n);
  for (const auto& [m, coeff] : f.terms()) {
    Monomial base = m.without(Space::x);
    if (!uimg.empty()) base = base.without(Space::u);
    PolyJet t = PolyJet::constant(
        n, MPoly<Rational>::monomial(n, base, coeff));
    for (int i = 0; i < n; ++i) {
      unsigned e = m.get(Space::x, i);
      if (e) t = t * pow(PolyJet::from_jet(n, y[(size_t)i]), e);
    }
    if (!uimg.empty())
      for (int i = 0; i < n; ++i) {
        unsigned e = m.get(Space::u, i);
        if (e) t = t * pow(uimg[(size_t)i], e);
      }
    out = out + t;
  }
  return out;
}

// u'(w) images as PolyJets: q w rev(q) / |q|^2 with q the jet.
inline std::vector<PolyJet> transport_jets(const MobiusJets& J) {
  int n = J.X.v.dim();
  Jet inva = jet_inverse(J.alpha);
  std::vector<PolyJet> img((size_t)n, PolyJet(n, n));
  MVJet qrev = J.Q.reversion();
  for (int m = 0; m < n; ++m) {
    MVJet Bm = J.Q * MVJet::constant(n, Multivector<Rational>::basis_vector(n, m)) * qrev;
    for (int j = 0; j < n; ++j) {
      Jet A = Bm.coeff(Blade(1u) << j) * inva;
      img[(size_t)j] =
          img[(size_t)j] +
          PolyJet::from_jet(n, A) *
              PolyJet::constant(n, MPoly<Rational>::variable(n, Space::w, m));
    }
  }
  return img;
}

}  // namespace conf_detail

// D_x[J_1(phi,x) f(phi(x), u)] - eps q^{-1}/|q|^n (D_y f)(phi(x), u) at a
// rational sample where |q|^2 is a perfect square; u rides along untouched.
inline MPoly<Rational> dirac_conformal_residual(const VahlenMatrix<Rational>& M,
                                                const MPoly<Rational>& f,
                                                const std::vector<Rational>& x0) {
  auto J = conf_detail::mobius_jets(M, x0);
  PolyJet F = conf_detail::compose_poly(f, J.y, {});
  MPoly<Rational> lhs = jet_dirac(PolyJet::from_mvjet(J.J1) * F);
  MPoly<Rational> rhs =
      evaluate_space(dirac(f, Space::x, Side::left), Space::x, J.yval)
          .mv_left(J.Wback);
  return lhs - rhs;
}

// R_{k,x,w}[J_1 psi(phi(x), u'(w))] - eps q^{-1}/|q|^n (R_k psi)(phi(x), u'(w)).
inline MPoly<Rational> theorem4_residual(const VahlenMatrix<Rational>& M,
                                         const MPoly<Rational>& psi,
                                         const std::vector<Rational>& x0) {
  auto J = conf_detail::mobius_jets(M, x0);
  std::vector<PolyJet> uimg = conf_detail::transport_jets(J);
  PolyJet P = conf_detail::compose_poly(psi, J.y, uimg);
  MPoly<Rational> lhs =
      projection_Pk(jet_dirac(PolyJet::from_mvjet(J.J1) * P), Space::w);
  MPoly<Rational> rk = apply_Rk(psi, Space::x, Space::u, Side::left);
  auto imgs_val = u_transform_images(J.Q.v, Space::w, /*reversed=*/true);
  MPoly<Rational> rhs =
      substitute(evaluate_space(rk, Space::x, J.yval), Space::u, imgs_val)
          .mv_left(J.Wback);
  return lhs - rhs;
}

// ---- kernel transformation laws ------------------------------------------

// N(s, u, v) = s Z'_k(s u s, v): the kernel numerator with the argument a
// grade-1-valued polynomial (or constant). N(x, u, v) is the numerator of
// the fundamental solution.
template <class S>
MPoly<S> kernel_N(const KernelZk<S>& Z, const MPoly<S>& svec) {
  int n = Z.poly.dim();
  MPoly<S> sus = svec * vector_poly<S>(n, Space::u) * svec;
  std::vector<MPoly<S>> images;
  for (int i = 0; i < n; ++i) images.push_back(sus.component(i));
  return svec * substitute(Z.poly, Space::u, images);
}

// Reflection law, fully symbolic in (x, u, v) for a unit versor a:
//   N(a s rev(a), u, v) - a N(s, rev(a) u a, rev(a) v a) rev(a);
// the norm factors agree on both sides, so this clears the whole law.
inline MPoly<Rational> kernel_reflection_residual(const KernelZk<Rational>& Z,
                                                  const Multivector<Rational>& a) {
  int n = Z.poly.dim();
  MPoly<Rational> Nsym = kernel_N(Z, vector_poly<Rational>(n, Space::x));
  MPoly<Rational> lhs =
      substitute(Nsym, Space::x, spinor_conj_images(a, Space::x));
  MPoly<Rational> rhs =
      substitute(substitute(Nsym, Space::u,
                            spinor_conj_images(a.reversion(), Space::u)),
                 Space::v, spinor_conj_images(a.reversion(), Space::v))
          .mv_left(a)
          .mv_right(a.reversion());
  return lhs - rhs;
}

// General law at rational (x0, y0), u and v symbolic, all denominators and
// the pseudo-determinant cleared:
//   N(q_x r rev(q_y), u, v) == q_y r Z'_k((r rev(q_y)) u (q_y r), rev(q_x) v q_x) rev(q_x)
// with r = x0 - y0, q_x = c x0 + d, q_y = c y0 + d. Equivalent to
//   E_k(phi(x)-phi(y), u, v) = eps J_1(phi,y)^{-1} E_k(x-y, u', v') rev(J_1)(phi,x)^{-1},
//   u' = rev(q_y) u q_y/|q_y|^2, v' = rev(q_x) v q_x/|q_x|^2.
inline MPoly<Rational> kernel_general_residual(const KernelZk<Rational>& Z,
                                               const VahlenMatrix<Rational>& M,
                                               const std::vector<Rational>& x0,
                                               const std::vector<Rational>& y0) {
  int n = Z.poly.dim();
  Multivector<Rational> X = Multivector<Rational>::from_vector(n, x0);
  Multivector<Rational> Y = Multivector<Rational>::from_vector(n, y0);
  Multivector<Rational> r = X - Y;
  Multivector<Rational> qx = vahlen_q(M, X), qy = vahlen_q(M, Y);
  if (r.is_zero() || qx.is_zero() || qy.is_zero())
    throw std::domain_error("singular sample");
  Multivector<Rational> s0 = qx * r * qy.reversion();
  if (!s0.is_grade(1)) throw std::logic_error("kernel argument not grade-1");
  MPoly<Rational> lhs = kernel_N(Z, MPoly<Rational>::constant(n, s0));
  Multivector<Rational> A = r * qy.reversion();
  MPoly<Rational> rhs =
      substitute(substitute(Z.poly, Space::u, spinor_conj_images(A, Space::u)),
                 Space::v, spinor_conj_images(qx.reversion(), Space::v))
          .mv_left(qy * r)
          .mv_right(qx.reversion());
  return lhs - rhs;
}

// ---- difference identity and differential --------------------------------

// phi(x)-phi(y) - eps rev(q_x)^{-1} (x-y) q_y^{-1}, exact at rational points.
inline Multivector<Rational> difference_identity_residual(
    const VahlenMatrix<Rational>& M, const std::vector<Rational>& x0,
    const std::vector<Rational>& y0) {
  int n = M.n;
  Multivector<Rational> X = Multivector<Rational>::from_vector(n, x0);
  Multivector<Rational> Y = Multivector<Rational>::from_vector(n, y0);
  Multivector<Rational> qx = vahlen_q(M, X), qy = vahlen_q(M, Y);
  Multivector<Rational> rhs =
      qx.reversion().versor_inverse() * (X - Y) * qy.versor_inverse();
  rhs.scale(M.eps);
  return mobius_apply(M, X) - mobius_apply(M, Y) - rhs;
}

// d phi_x(e_i) - eps rev(q_x)^{-1} e_i q_x^{-1} for each i; the measure law
// n(x') dsigma(x') = eps rev(J_1) n(x) J_1 dsigma(x) reduces to this plus
// versor algebra.
inline std::vector<Multivector<Rational>> mobius_differential_residual(
    const VahlenMatrix<Rational>& M, const std::vector<Rational>& x0) {
  auto J = conf_detail::mobius_jets(M, x0);
  Multivector<Rational> qi = J.Q.v.reversion().versor_inverse();
  Multivector<Rational> qinv = J.Q.v.versor_inverse();
  std::vector<Multivector<Rational>> out;
  for (int i = 0; i < M.n; ++i) {
    Multivector<Rational> rhs =
        qi * Multivector<Rational>::basis_vector(M.n, i) * qinv;
    rhs.scale(M.eps);
    out.push_back(J.Phi.d[(size_t)i] - rhs);
  }
  return out;
}

}  // namespace rsc
