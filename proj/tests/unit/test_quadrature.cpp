#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fracbpx/dense_sym_matrix.hpp"
#include "fracbpx/geometry.hpp"
#include "fracbpx/quadrature.hpp"
#include "fracbpx/sparse.hpp"

using namespace fracbpx;

namespace {

// Mean of x^a y^b over the reference triangle: 2 a! b! / (a+b+2)!.
double triangle_moment(int a, int b) {
  return 2.0 * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

double apply(const TriangleRule& r, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.w.size(); ++i) s += r.w[i] * std::pow(r.x[i][0], a) * std::pow(r.x[i][1], b);
  return s;
}

}  // namespace

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n = 1; n <= 12; ++n) {
    const Rule1D r = gauss_legendre(n);
    ASSERT_EQ(r.x.size(), static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.w[i] * std::pow(r.x[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "n=" << n << " k=" << k;
    }
    for (int i = 0; i < n; ++i) {
      EXPECT_GT(r.x[i], 0.0);
      EXPECT_LT(r.x[i], 1.0);
      EXPECT_GT(r.w[i], 0.0);
      EXPECT_NEAR(r.x[i] + r.x[n - 1 - i], 1.0, 1e-15);
    }
  }
  EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(GaussLegendre, NotExactBeyondDegree) {
  const Rule1D r = gauss_legendre(3);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += r.w[i] * std::pow(r.x[i], 6);
  EXPECT_GT(std::abs(s - 1.0 / 7.0), 1e-6);
}

TEST(TriangleRules, Exactness) {
  struct Case {
    TriangleRule rule;
    int degree;
  };
  const Case cases[] = {{triangle_rule_degree2(), 2}, {triangle_rule_degree4(), 4}, {collapsed_gauss(2), 2},
                        {collapsed_gauss(4), 6}, {collapsed_gauss(6), 10}};
  for (const Case& c : cases) {
    EXPECT_NEAR(std::accumulate(c.rule.w.begin(), c.rule.w.end(), 0.0), 1.0, 1e-14);
    for (int a = 0; a <= c.degree; ++a) {
      for (int b = 0; a + b <= c.degree; ++b) {
        EXPECT_NEAR(apply(c.rule, a, b), triangle_moment(a, b), 1e-14) << "degree " << c.degree;
      }
    }
    for (const auto& x : c.rule.x) {
      EXPECT_GE(x[0], 0.0);
      EXPECT_GE(x[1], 0.0);
      EXPECT_LE(x[0] + x[1], 1.0);
    }
  }
}

TEST(Geometry, SegmentDistance) {
  EXPECT_DOUBLE_EQ(point_segment_distance({0.5, 1.0}, {0.0, 0.0}, {1.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({2.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({-3.0, 4.0}, {0.0, 0.0}, {1.0, 0.0}), 5.0);
  EXPECT_DOUBLE_EQ(signed_area({0, 0}, {1, 0}, {0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(signed_area({0, 0}, {0, 1}, {1, 0}), -0.5);
}

TEST(DenseSymMatrix, PackedStorageAndProducts) {
  Eigen::MatrixXd a(3, 3);
  a << 4, 1, 2, 1, 5, 3, 2, 3, 6;
  const DenseSymMatrix m = DenseSymMatrix::from_dense(a);
  EXPECT_EQ(m.packed_size(), 6u);
  EXPECT_EQ(m(2, 0), 2.0);
  EXPECT_EQ(m(0, 2), 2.0);
  const Eigen::Vector3d x(1.0, -2.0, 0.5);
  EXPECT_LT((m * Eigen::VectorXd(x) - a * x).norm(), 1e-15);
  EXPECT_NEAR(m.frobenius_norm(), a.norm(), 1e-14);
  EXPECT_EQ(m.to_dense(), a);
  EXPECT_EQ(m.diagonal(), Eigen::VectorXd(a.diagonal()));
  EXPECT_THROW(m * Eigen::VectorXd::Ones(2), std::invalid_argument);
}

TEST(DenseSymMatrix, TextRoundTrip) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0 / 3.0, -2e-17, -2e-17, std::exp(1.0);
  const DenseSymMatrix m = DenseSymMatrix::from_dense(a);
  std::stringstream io;
  write_matrix(io, m);
  const DenseSymMatrix r = read_matrix(io);
  EXPECT_EQ(r.to_dense(), a);
  std::stringstream bad("fracbpx-matrix v1\n2\n1\n2\n");
  EXPECT_THROW(read_matrix(bad), std::runtime_error);
}

TEST(Sparse, CanonicalFromTriplets) {
  const std::vector<Triplet> t = {{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 0.0}, {1, 1, 1.0}, {1, 1, -1.0}, {0, 0, 5.0}};
  const SparseMatrix a = sparse_from_triplets(2, 2, t);
  EXPECT_TRUE(is_canonical(a));
  EXPECT_EQ(a.nonZeros(), 2);
  EXPECT_EQ(a.coeff(0, 1), 3.0);
  EXPECT_EQ(a.coeff(0, 0), 5.0);
  SparseMatrix b = a;
  b.coeffRef(1, 1) = 0.0;
  EXPECT_FALSE(is_canonical(b));
}
