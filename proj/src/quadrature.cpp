#include "fracbpx/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracbpx {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = 0.5 * (1.0 - z);
    r.x[n - 1 - i] = 0.5 * (1.0 + z);
    r.w[i] = 0.5 * w;
    r.w[n - 1 - i] = 0.5 * w;
  }
  return r;
}

TriangleRule collapsed_gauss(int n) {
  const Rule1D g = gauss_legendre(n);
  TriangleRule r;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = g.x[i];
      r.x.push_back({u, (1.0 - u) * g.x[j]});
      r.w.push_back(2.0 * g.w[i] * g.w[j] * (1.0 - u));
    }
  }
  return r;
}

TriangleRule triangle_rule_degree2() {
  TriangleRule r;
  r.x = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
  r.w = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return r;
}

TriangleRule triangle_rule_degree4() {
  constexpr double a = 0.44594849091596488632;
  constexpr double wa = 0.22338158967801146570;
  constexpr double b = 0.09157621350977074346;
  constexpr double wb = 0.10995174365532186764;
  TriangleRule r;
  r.x = {{a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a}, {b, b}, {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}};
  r.w = {wa, wa, wa, wb, wb, wb};
  return r;
}

}  // namespace fracbpx
