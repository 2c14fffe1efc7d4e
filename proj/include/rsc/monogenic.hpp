#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rsc/poly.hpp"
#include "rsc/radial.hpp"

namespace rsc {

// Multi-index (j_2,...,j_n) over the free directions 2..n; |sigma| = k.
using Sigma = std::vector<unsigned>;

inline std::vector<Sigma> enumerate_sigma(int n, int k) {
  std::vector<Sigma> out;
  Sigma cur(n - 1, 0);
  auto rec = [&](auto&& self, int pos, int rest) -> void {
    if (pos == n - 2) {
      cur[pos] = (unsigned)rest;
      out.push_back(cur);
      return;
    }
    for (int j = rest; j >= 0; --j) {
      cur[pos] = (unsigned)j;
      self(self, pos + 1, rest - j);
    }
  };
  if (n < 2) throw std::invalid_argument("need n >= 2");
  rec(rec, 0, k);
  return out;
}

inline unsigned long sigma_count(int n, int k) {
  return binomial((unsigned)(k + n - 2), (unsigned)(n - 2)).get_num().get_ui();
}

template <class S>
bool is_monogenic(const MPoly<S>& p, Space sp, Side side = Side::left) {
  return dirac(p, sp, side).is_zero();
}

template <class S>
bool is_harmonic(const MPoly<S>& p, Space sp) {
  return laplacian(p, sp).is_zero();
}

// Gauss decomposition of a homogeneous p of degree m:
//   p = sum_j r^{2j} h_{m-2j},  h harmonic.
// Returns parts[j] = h_{m-2j}.  Peels from the bottom: Delta^j kills every
// lower-j term, and Delta^j (r^{2j} h_b) = prod_{t=1..j} 2t(n+2b+2t-2) h_b.
template <class S>
std::vector<MPoly<S>> harmonic_components(const MPoly<S>& p, Space sp) {
  if (!p.is_homogeneous(sp))
    throw std::invalid_argument("harmonic_components needs homogeneous input");
  int n = p.dim();
  int m = p.degree(sp);
  int J = m / 2;
  std::vector<MPoly<S>> parts((size_t)J + 1, MPoly<S>(n));
  MPoly<S> work = p;
  MPoly<S> r2 = r2_poly<S>(n, sp);
  for (int j = J; j >= 0; --j) {
    MPoly<S> q = work;
    for (int t = 0; t < j; ++t) q = laplacian(q, sp);
    int b = m - 2 * j;
    Rational c = 1;
    for (int t = 1; t <= j; ++t) c *= Rational(2 * t) * Rational(n + 2 * b + 2 * t - 2);
    MPoly<S> h = q * scalar_cast<S>(Rational(1) / c);
    parts[(size_t)j] = h;
    if (j > 0) {
      MPoly<S> rpow = h;
      for (int t = 0; t < j; ++t) rpow = rpow * r2;
      work -= rpow;
    }
  }
  return parts;
}

namespace detail {
template <class S>
int checked_degree(const MPoly<S>& h, Space sp, const char* who) {
  if (h.is_zero()) return 0;
  if (!h.is_homogeneous(sp))
    throw std::invalid_argument(std::string(who) + ": input not homogeneous");
  if (!laplacian(h, sp).is_zero())
    throw std::invalid_argument(std::string(who) + ": input not harmonic");
  return h.degree(sp);
}
}  // namespace detail

// P_k maps degree-k harmonics onto monogenics: u D_u h/(n+2k-2) + h.
// The right-handed version mirrors every factor.
template <class S>
MPoly<S> projection_Pk(const MPoly<S>& h, Space sp, Side side = Side::left) {
  int k = detail::checked_degree(h, sp, "projection_Pk");
  int n = h.dim();
  MPoly<S> u = vector_poly<S>(n, sp);
  S inv = scalar_cast<S>(rat(1, n + 2 * k - 2));
  if (side == Side::left) return (u * dirac(h, sp, Side::left)) * inv + h;
  return (dirac(h, sp, Side::right) * u) * inv + h;
}

template <class S>
struct HarmonicSplit {
  MPoly<S> p_k;    // monogenic, degree k
  MPoly<S> p_km1;  // monogenic, degree k-1
};

// h_k = p_k + u p_{k-1} with both parts (left-)monogenic; the complement
// projects back through D(u q) = -(n+2k-2) q.
template <class S>
HarmonicSplit<S> almansi_fischer_split(const MPoly<S>& h, Space sp) {
  int k = detail::checked_degree(h, sp, "almansi_fischer_split");
  int n = h.dim();
  MPoly<S> pk = projection_Pk(h, sp, Side::left);
  MPoly<S> pkm1 =
      dirac(h - pk, sp, Side::left) * scalar_cast<S>(rat(-1, n + 2 * k - 2));
  return {pk, pkm1};
}

// h_k = q_k + q_{k-1} u, right-monogenic parts.
template <class S>
HarmonicSplit<S> right_split(const MPoly<S>& h, Space sp) {
  int k = detail::checked_degree(h, sp, "right_split");
  int n = h.dim();
  MPoly<S> qk = projection_Pk(h, sp, Side::right);
  MPoly<S> qkm1 =
      dirac(h - qk, sp, Side::right) * scalar_cast<S>(rat(-1, n + 2 * k - 2));
  return {qk, qkm1};
}

// z_j = u_j - u_1 e_1^{-1} e_j = u_j + u_1 e_1 e_j,  j in 2..n.
template <class S>
MPoly<S> monogenic_factor(int n, int j, Space sp) {
  if (j < 2 || j > n) throw std::invalid_argument("factor index out of range");
  Multivector<S> e1j = Multivector<S>::basis_vector(n, 0) *
                       Multivector<S>::basis_vector(n, j - 1);
  return MPoly<S>::variable(n, sp, j - 1) +
         MPoly<S>::variable(n, sp, 0).mv_left(e1j);
}

// P_sigma = (1/k!) sum of z-products over the distinct orderings of the
// multiset sigma.
template <class S>
MPoly<S> basis_element(int n, const Sigma& sigma, Space sp) {
  if ((int)sigma.size() != n - 1) throw std::invalid_argument("sigma size");
  std::vector<int> seq;
  for (int i = 0; i < n - 1; ++i)
    for (unsigned c = 0; c < sigma[(size_t)i]; ++c) seq.push_back(i + 2);
  int k = (int)seq.size();
  if (k == 0) return MPoly<S>::constant(n, scalar_cast<S>(Rational(1)));
  std::vector<MPoly<S>> z;
  for (int j = 2; j <= n; ++j) z.push_back(monogenic_factor<S>(n, j, sp));
  MPoly<S> acc(n);
  do {
    MPoly<S> prod = z[(size_t)(seq[0] - 2)];
    for (size_t t = 1; t < seq.size(); ++t) prod = prod * z[(size_t)(seq[t] - 2)];
    acc += prod;
  } while (std::next_permutation(seq.begin(), seq.end()));
  return acc * scalar_cast<S>(Rational(1) / factorial((unsigned)k));
}

// Fundamental solution, omega_n-scaled: G'(v) = -v/|v|^n.
template <class S>
RadialRational<S> fundamental_solution(int n, Space sp) {
  return RadialRational<S>(-vector_poly<S>(n, sp), n, sp);
}

// V'_sigma = (-1)^k d^sigma G'.  The sign makes the sigma-sum the k-th
// Taylor term of G'(v-u) and the pairing against u P_mu exactly delta.
template <class S>
RadialRational<S> dual_V(int n, const Sigma& sigma, Space sp) {
  if ((int)sigma.size() != n - 1) throw std::invalid_argument("sigma size");
  RadialRational<S> g = fundamental_solution<S>(n, sp);
  int k = 0;
  for (int i = 0; i < n - 1; ++i)
    for (unsigned c = 0; c < sigma[(size_t)i]; ++c) {
      g = g.derivative(sp, i + 1);
      ++k;
    }
  if (k % 2 != 0) g.scale(scalar_cast<S>(Rational(-1)));
  return g;
}

template <class S>
struct MonogenicBasis {
  int n = 0, k = 0;
  Space space = Space::u;
  std::vector<Sigma> sigmas;
  std::vector<MPoly<S>> elements;       // P_sigma, degree k, left-monogenic
  std::vector<RadialRational<S>> duals; // V'_sigma, in the same space
};

template <class S>
MonogenicBasis<S> basis_P_sigma(int n, int k, Space sp = Space::u,
                                bool with_duals = true) {
  if (n < 2 || k < 0) throw std::invalid_argument("basis_P_sigma range");
  MonogenicBasis<S> b;
  b.n = n;
  b.k = k;
  b.space = sp;
  b.sigmas = enumerate_sigma(n, k);
  for (const auto& s : b.sigmas) {
    b.elements.push_back(basis_element<S>(n, s, sp));
    if (with_duals) b.duals.push_back(dual_V<S>(n, s, sp));
  }
  return b;
}

// Z'_k(u,v): polynomial reproducing kernel, degree k in each slot.
template <class S>
struct KernelZk {
  int n = 0, k = 0;
  MPoly<S> poly;  // in spaces u and v
};

// sum_sigma P_sigma(u) V'_sigma(v) v, lifted by |v|^{n+2k-2}: the shared
// denominator |v|^{n+2k} leaves one r^2 to cancel, and the cancellation is
// exact precisely because the sum times v is divisible by r^2.
template <class S>
KernelZk<S> build_Zk(int n, int k) {
  if (n < 3) throw std::invalid_argument("build_Zk needs n >= 3");
  MPoly<S> vpoly = vector_poly<S>(n, Space::v);
  MPoly<S> total(n);
  for (const auto& s : enumerate_sigma(n, k)) {
    MPoly<S> P = basis_element<S>(n, s, Space::u);
    RadialRational<S> V = dual_V<S>(n, s, Space::v);
    if (V.spow() != n + 2 * k) throw std::logic_error("dual power drift");
    total += P * V.num() * vpoly;
  }
  MPoly<S> Z(n);
  if (!exact_divide_by_r2(total, Space::v, Z))
    throw std::logic_error("kernel reduction failed: sum not divisible by r^2");
  return {n, k, Z};
}

// p(u) = mean_v Z'_k(u,v) p(v): exact reproduction of M_k.
template <class S>
MPoly<S> reproduce(const KernelZk<S>& Z, const MPoly<S>& p, Space sp = Space::u) {
  if (!p.is_zero() && (!p.is_homogeneous(sp) || p.degree(sp) != Z.k))
    throw std::invalid_argument("reproduce: wrong homogeneity degree");
  if (!is_monogenic(p, sp)) throw std::invalid_argument("reproduce: input not monogenic");
  int n = Z.n;
  std::vector<MPoly<S>> images;
  for (int i = 0; i < n; ++i) images.push_back(MPoly<S>::variable(n, Space::v, i));
  MPoly<S> pv = substitute(p, sp, images);
  MPoly<S> prod = Z.poly * pv;
  MPoly<S> out = sphere_mean(prod, Space::v);
  if (sp != Space::u) {
    std::vector<MPoly<S>> back;
    for (int i = 0; i < n; ++i) back.push_back(MPoly<S>::variable(n, sp, i));
    out = substitute(out, Space::u, back);
  }
  return out;
}

}  // namespace rsc
