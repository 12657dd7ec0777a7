#pragma once

#include <functional>

#include <Eigen/Dense>

#include "fracbpx/dense_sym_matrix.hpp"
#include "fracbpx/precond.hpp"

namespace fracbpx {

using MatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

MatVec matvec_of(const DenseSymMatrix& k);

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - K x|| / ||b|| of the returned iterate
  bool converged = false;
  double wall_time = 0.0;  // seconds
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveReport report;
};

struct SolverOptions {
  double tol = 1e-6;
  int max_iter = -1;  // -1: 10 n for Gauss-Seidel, n for the Krylov methods
};

// Forward Gauss-Seidel sweeps from x = 0.
SolveResult gauss_seidel(const DenseSymMatrix& k, const Eigen::VectorXd& b, const SolverOptions& opt = {});

// Conjugate gradients from x = 0.
SolveResult cg(const MatVec& k, const Eigen::VectorXd& b, const SolverOptions& opt = {});
SolveResult cg(const DenseSymMatrix& k, const Eigen::VectorXd& b, const SolverOptions& opt = {});

// Preconditioned conjugate gradients from x = 0.
SolveResult pcg(const MatVec& k, const Preconditioner& p, const Eigen::VectorXd& b, const SolverOptions& opt = {});
SolveResult pcg(const DenseSymMatrix& k, const Preconditioner& p, const Eigen::VectorXd& b,
                const SolverOptions& opt = {});

struct CondEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double cond = 0.0;
  int steps = 0;
};

struct LanczosOptions {
  int max_steps = 300;
  double tol = 1e-8;  // relative Ritz residual for both extreme eigenvalues
  unsigned long long seed = 20240601ULL;
  int max_restarts = 3;
};

// Extreme eigenvalues of P K (P = identity when p is null), using Lanczos in
// the P^{-1} inner product with full reorthogonalisation.
CondEstimate lanczos_cond(const MatVec& k, const Preconditioner* p, int n, const LanczosOptions& opt = {});
CondEstimate lanczos_cond(const DenseSymMatrix& k, const Preconditioner* p, const LanczosOptions& opt = {});

}  // namespace fracbpx
