#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rsc {

struct QuadRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1,1]: exact for polynomials of degree <= 2m-1.
// Newton on P_m from the Chebyshev-like initial guesses; nodes come out
// symmetric, so only half are iterated.
inline QuadRule1D gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("need at least one node");
  QuadRule1D rule;
  rule.nodes.resize((size_t)m);
  rule.weights.resize((size_t)m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (m == 1) p1 = x;
      for (int j = 2; j <= m; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double pm = (m == 1) ? x : p1;
      double pm1 = (m == 1) ? 1.0 : p0;
      dp = m * (x * pm - pm1) / (x * x - 1.0);
      double dx = pm / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[(size_t)i] = -x;
    rule.nodes[(size_t)(m - 1 - i)] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[(size_t)i] = w;
    rule.weights[(size_t)(m - 1 - i)] = w;
  }
  return rule;
}

}  // namespace rsc
