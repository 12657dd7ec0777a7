#pragma once

#include <array>
#include <vector>

namespace fracbpx {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre rule with n points on [0,1].
Rule1D gauss_legendre(int n);

// Rule on the reference triangle {x1, x2 >= 0, x1 + x2 <= 1}; weights sum to 1.
struct TriangleRule {
  std::vector<std::array<double, 2>> x;
  std::vector<double> w;
};

// n*n Gauss points collapsed onto the triangle (exact for degree 2n-2 polynomials).
TriangleRule collapsed_gauss(int n);
// Symmetric 3-point rule, exact for degree 2.
TriangleRule triangle_rule_degree2();
// Symmetric 6-point rule, exact for degree 4.
TriangleRule triangle_rule_degree4();

}  // namespace fracbpx
