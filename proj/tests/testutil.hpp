#pragma once

// Shared helpers for the unit suites: seeded RNG, random algebra elements,
// and independent brute-force oracles used to cross-check the fast paths.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "rsc/clifford.hpp"
#include "rsc/rational.hpp"

namespace rsctest {

using rsc::Blade;
using rsc::Multivector;
using rsc::Rational;

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

inline long rand_int(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational rand_rational(std::mt19937_64& rng, long max_num = 9,
                              long max_den = 5) {
  long num = rand_int(rng, -max_num, max_num);
  long den = rand_int(rng, 1, max_den);
  return rsc::rat(num, den);
}

inline Multivector<Rational> random_multivector(std::mt19937_64& rng, int dim,
                                                int max_terms = 6) {
  Multivector<Rational> m(dim);
  int t = (int)rand_int(rng, 1, max_terms);
  for (int i = 0; i < t; ++i) {
    Blade b = (Blade)rand_int(rng, 0, (1 << dim) - 1);
    m.add_term(b, rand_rational(rng));
  }
  return m;
}

inline Multivector<Rational> random_vector_mv(std::mt19937_64& rng, int dim) {
  std::vector<Rational> x(dim);
  bool nonzero = false;
  for (auto& c : x) {
    c = rand_rational(rng);
    if (sgn(c) != 0) nonzero = true;
  }
  if (!nonzero) x[0] = 1;
  return Multivector<Rational>::from_vector(dim, x);
}

// Brute-force product of basis blades by explicit factor-list sorting:
// concatenate the generator index lists, bubble-sort counting transpositions,
// then cancel equal adjacent pairs with e_i^2 = -1. Independent of the
// popcount fast path.
inline std::pair<Blade, int> blade_product_bruteforce(Blade a, Blade b) {
  std::vector<int> idx;
  for (int i = 0; i < 32; ++i)
    if (a & (Blade{1} << i)) idx.push_back(i);
  for (int i = 0; i < 32; ++i)
    if (b & (Blade{1} << i)) idx.push_back(i);
  int sign = 1;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
      if (idx[i] > idx[i + 1]) {
        std::swap(idx[i], idx[i + 1]);
        sign = -sign;
        moved = true;
      } else if (idx[i] == idx[i + 1]) {
        sign = -sign;  // e_i e_i = -1
        idx.erase(idx.begin() + i, idx.begin() + i + 2);
        moved = true;
        break;
      }
    }
  }
  Blade mask = 0;
  for (int i : idx) mask |= Blade{1} << i;
  return {mask, sign};
}

}  // namespace rsctest
