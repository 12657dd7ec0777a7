#include <cmath>
#include <future>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "fracbpx/errors.hpp"
#include "fracbpx/precond.hpp"

using namespace fracbpx;

namespace {

std::shared_ptr<const UniformHierarchy> uniform(int levels) {
  return std::make_shared<const UniformHierarchy>(build_uniform_hierarchy(init_square(), levels));
}

struct Graded {
  Mesh t0 = init_square();
  Mesh mesh;
  BisectionHistory history;
  std::shared_ptr<const GradedHierarchy> gh;

  explicit Graded(int stages) {
    mesh = t0;
    for (int k = 0; k < stages; ++k) mesh = graded_stage(mesh, 4.0, 2.0, history);
    gh = std::make_shared<const GradedHierarchy>(build_graded_hierarchy(t0, history, mesh));
  }
};

double symmetry_defect(const Eigen::MatrixXd& a) { return (a - a.transpose()).norm() / a.norm(); }

double min_eigenvalue(const Eigen::MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (a + a.transpose())).eigenvalues()[0];
}

}  // namespace

TEST(BpxUniform, MatchesExplicitSum) {
  const auto h = uniform(3);
  const int n = h->finest().num_dofs();
  for (double s : {0.1, 0.5, 0.9}) {
    for (double g : {0.0, 0.5}) {
      Eigen::MatrixXd expected = std::pow(h->h[3], 2.0 * s - 2.0) * Eigen::MatrixXd::Identity(n, n);
      for (int k = 0; k < 3; ++k) {
        const Eigen::MatrixXd ik = Eigen::MatrixXd(h->to_finest[k]);
        expected += (1.0 - std::pow(g, s)) * std::pow(h->h[k], 2.0 * s - 2.0) * ik * ik.transpose();
      }
      const Eigen::MatrixXd p = to_dense(bpx_uniform(h, s, g));
      EXPECT_LT((p - expected).norm(), 1e-12 * expected.norm()) << "s=" << s << " g=" << g;
    }
  }
}

TEST(BpxUniform, SymmetricPositiveDefinite) {
  const auto h = uniform(3);
  for (double s : {0.01, 0.5, 0.99}) {
    const Eigen::MatrixXd p = to_dense(bpx_uniform(h, s, 0.5));
    EXPECT_LE(symmetry_defect(p), 1e-12);
    EXPECT_GT(min_eigenvalue(p), 0.0);
  }
}

TEST(BpxUniform, SingleLevel) {
  const auto h = uniform(0);
  const Preconditioner p = bpx_uniform(h, 0.3, 0.5);
  Eigen::VectorXd x(1);
  x << 2.0;
  EXPECT_DOUBLE_EQ(p.apply(x)[0], 2.0);
  EXPECT_EQ(p.descriptor().kind, "bpx-uniform");
}

TEST(BpxUniform, CorrectionFactorWeights) {
  const auto h = uniform(2);
  const double s = 0.5;
  const int n = h->finest().num_dofs();
  const Eigen::MatrixXd fine = std::pow(h->h[2], 2.0 * s - 2.0) * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd coarse0 = to_dense(bpx_uniform(h, s, 0.0)) - fine;
  const Eigen::MatrixXd coarse5 = to_dense(bpx_uniform(h, s, 0.5)) - fine;
  EXPECT_LT((coarse5 - (1.0 - std::sqrt(0.5)) * coarse0).norm(), 1e-12 * coarse0.norm());
}

TEST(BpxUniform, ParameterValidation) {
  const auto h = uniform(1);
  EXPECT_THROW(bpx_uniform(h, 0.0, 0.5), std::domain_error);
  EXPECT_THROW(bpx_uniform(h, 1.0, 0.5), std::domain_error);
  EXPECT_THROW(bpx_uniform(h, 0.5, 1.0), std::domain_error);
  EXPECT_THROW(bpx_uniform(h, 0.5, -0.1), std::domain_error);
}

TEST(BpxGraded, MatchesExplicitSum) {
  const Graded g(3);
  const Mesh& fin = g.mesh;
  const int n = fin.num_dofs();
  const double s = 0.7, gt = std::sqrt(0.5);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(n, n);
  const std::vector<double> hp = fine_node_scalings(fin);
  for (int d = 0; d < n; ++d) expected(d, d) = std::pow(hp[fin.interior_node_ids()[d]], 2.0 * s - 2.0);
  for (int j = 0; j <= static_cast<int>(g.history.size()); ++j) {
    for (const TripletColumn& c : triplet_columns(g.t0, g.history, fin, j)) {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
      for (const auto& [d, v] : c.values) col[d] = v;
      expected += (1.0 - std::pow(gt, s)) * std::pow(c.scale, 2.0 * s - 2.0) * col * col.transpose();
    }
  }
  const Eigen::MatrixXd p = to_dense(bpx_graded(g.gh, s, gt));
  EXPECT_LT((p - expected).norm(), 1e-12 * expected.norm());
  EXPECT_LE(symmetry_defect(p), 1e-12);
  EXPECT_GT(min_eigenvalue(p), 0.0);
}

TEST(BpxGraded, ApplyIsPureAcrossThreads) {
  const Graded g(3);
  const Preconditioner p = bpx_graded(g.gh, 0.5, std::sqrt(0.5));
  std::mt19937 rng(5);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(p.size());
  for (int i = 0; i < x.size(); ++i) x[i] = normal(rng);
  const Eigen::VectorXd ref = p.apply(x);
  auto a = std::async(std::launch::async, [&] { return Eigen::VectorXd(p.apply(x)); });
  auto b = std::async(std::launch::async, [&] { return Eigen::VectorXd(p.apply(x)); });
  EXPECT_EQ(a.get(), ref);
  EXPECT_EQ(b.get(), ref);
}

TEST(DiagScaling, InvertsDiagonal) {
  Eigen::MatrixXd a(2, 2);
  a << 4.0, 1.0, 1.0, 2.0;
  const Preconditioner p = diag_scaling(DenseSymMatrix::from_dense(a));
  Eigen::VectorXd x(2);
  x << 1.0, 1.0;
  const Eigen::VectorXd y = p.apply(x);
  EXPECT_DOUBLE_EQ(y[0], 0.25);
  EXPECT_DOUBLE_EQ(y[1], 0.5);
  a(1, 1) = 0.0;
  EXPECT_THROW(diag_scaling(DenseSymMatrix::from_dense(a)), InvalidMatrixError);
}

TEST(Scaled, MultipliesByConstant) {
  const auto h = uniform(2);
  const Preconditioner p = bpx_uniform(h, 0.5, 0.5);
  const Preconditioner q = scaled(p, 3.0);
  const Eigen::MatrixXd dp = to_dense(p), dq = to_dense(q);
  EXPECT_LT((dq - 3.0 * dp).norm(), 1e-12 * dq.norm());
  EXPECT_THROW(scaled(p, 0.0), std::domain_error);
}
