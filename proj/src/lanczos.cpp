#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fracbpx/errors.hpp"
#include "fracbpx/solvers.hpp"

namespace fracbpx {

namespace {

// Basis vectors y_i (P^{-1}-orthonormal) together with t_i = P^{-1} y_i.
struct Basis {
  std::vector<Eigen::VectorXd> y, t;

  // Removes the components of u (a P^{-1}-companion) along the basis, twice.
  void orthogonalize(Eigen::VectorXd& u) const {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < y.size(); ++i) u -= u.dot(y[i]) * t[i];
    }
  }
};

}  // namespace

CondEstimate lanczos_cond(const MatVec& k, const Preconditioner* p, int n, const LanczosOptions& opt) {
  if (n <= 0) throw std::invalid_argument("lanczos_cond: empty operator");
  if (p != nullptr && p->size() != n) throw std::invalid_argument("lanczos_cond: preconditioner has the wrong size");
  const int max_steps = std::min(opt.max_steps, n);
  if (max_steps < 1) throw std::invalid_argument("lanczos_cond: need at least one step");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto apply_p = [p](const Eigen::VectorXd& u, Eigen::VectorXd& w) {
    if (p) {
      p->apply(u, w);
    } else {
      w = u;
    }
  };

  Basis basis;
  std::vector<double> alpha, beta;  // beta[i] couples steps i and i+1
  Eigen::VectorXd u(n), w(n), ky(n);
  int restarts = 0;

  // Starts a new block from a random companion vector; false on failure.
  auto start_block = [&]() {
    for (int attempt = 0; attempt < 3; ++attempt) {
      for (int i = 0; i < n; ++i) u[i] = normal(rng);
      basis.orthogonalize(u);
      apply_p(u, w);
      const double nrm2 = u.dot(w);
      if (nrm2 > 1e-24 * u.squaredNorm()) {
        const double nrm = std::sqrt(nrm2);
        basis.t.push_back(u / nrm);
        basis.y.push_back(w / nrm);
        return true;
      }
      if (!(nrm2 >= 0.0)) throw InvalidMatrixError("lanczos_cond: preconditioner is not positive definite");
    }
    return false;
  };
  if (!start_block()) throw InvalidMatrixError("lanczos_cond: could not build a starting vector");

  double lmin = 0.0, lmax = 0.0;
  int steps = 0;
  while (true) {
    const int j = static_cast<int>(basis.y.size()) - 1;
    k(basis.y[j], ky);
    const double a = basis.y[j].dot(ky);
    alpha.push_back(a);
    ++steps;
    u = ky;
    basis.orthogonalize(u);
    apply_p(u, w);
    const double b2 = u.dot(w);
    const double b = b2 > 0.0 ? std::sqrt(b2) : 0.0;

    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max(m - 1, 0));
    for (int i = 0; i + 1 < m; ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd& theta = tri.eigenvalues();
    lmin = theta[0];
    lmax = theta[m - 1];
    const double scale = std::max(std::abs(lmax), std::abs(lmin));
    const double res_min = b * std::abs(tri.eigenvectors()(m - 1, 0));
    const double res_max = b * std::abs(tri.eigenvectors()(m - 1, m - 1));
    const bool converged = res_min <= opt.tol * std::abs(lmin) && res_max <= opt.tol * scale;
    if (m >= max_steps || (converged && m >= 2) || m == n) break;

    if (b <= 1e-12 * scale) {
      // Invariant subspace found; continue with a fresh block.
      if (restarts >= opt.max_restarts || !start_block()) break;
      ++restarts;
      beta.push_back(0.0);
      continue;
    }
    beta.push_back(b);
    basis.t.push_back(u / b);
    basis.y.push_back(w / b);
  }
  if (!(lmin > 0.0)) throw InvalidMatrixError("lanczos_cond: operator is not positive definite");
  return {lmin, lmax, lmax / lmin, steps};
}

CondEstimate lanczos_cond(const DenseSymMatrix& k, const Preconditioner* p, const LanczosOptions& opt) {
  return lanczos_cond(matvec_of(k), p, k.size(), opt);
}

}  // namespace fracbpx
