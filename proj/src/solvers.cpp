#include "fracbpx/solvers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fracbpx/errors.hpp"

namespace fracbpx {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_rhs(int n, const Eigen::VectorXd& b) {
  if (b.size() != n) throw std::invalid_argument("solver: right-hand side has the wrong size");
  if (!b.allFinite()) throw std::invalid_argument("solver: right-hand side is not finite");
}

int resolve_max_iter(const SolverOptions& opt, int fallback) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solver: tolerance must be positive");
  return opt.max_iter < 0 ? fallback : opt.max_iter;
}

}  // namespace

MatVec matvec_of(const DenseSymMatrix& k) {
  return [&k](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.resize(k.size());
    k.multiply(x.data(), y.data());
  };
}

SolveResult gauss_seidel(const DenseSymMatrix& k, const Eigen::VectorXd& b, const SolverOptions& opt) {
  const auto t0 = Clock::now();
  const int n = k.size();
  check_rhs(n, b);
  const int max_iter = resolve_max_iter(opt, 10 * n);
  for (int i = 0; i < n; ++i) {
    if (!(k(i, i) > 0.0)) throw InvalidMatrixError("gauss_seidel: non-positive diagonal entry");
  }
  SolveResult res;
  res.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.report = {0, 0.0, true, seconds_since(t0)};
    return res;
  }

  // s_i holds sum_{j>i} a_ij x_j with x from before the sweep. The residual of
  // iterate m is r_i = s_i^(m) - s_i^(m+1), so it is available during sweep m+1.
  Eigen::VectorXd upper_prev = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd upper(n), lower(n), previous(n);
  double* x = res.x.data();
  int done = 0;
  double rel = 1.0;
  for (int sweep = 1; sweep <= max_iter + 1; ++sweep) {
    previous = res.x;
    lower.setZero();
    for (int i = 0; i < n; ++i) {
      const double* a = k.row_upper(i);
      const int len = n - i;
      double s = 0.0;
      for (int q = 1; q < len; ++q) s += a[q] * x[i + q];
      upper[i] = s;
      const double xi = (b[i] - lower[i] - s) / a[0];
      x[i] = xi;
      double* lo = lower.data() + i;
      for (int q = 1; q < len; ++q) lo[q] += a[q] * xi;
    }
    if (sweep > 1) {
      rel = (upper_prev - upper).norm() / bnorm;
      if (rel <= opt.tol || sweep == max_iter + 1) {
        res.x = previous;
        done = sweep - 1;
        break;
      }
    }
    upper_prev = upper;
    if (max_iter == 0) {
      res.x.setZero();
      break;
    }
  }
  res.report = {done, rel, rel <= opt.tol, seconds_since(t0)};
  return res;
}

SolveResult pcg(const MatVec& k, const Preconditioner& p, const Eigen::VectorXd& b, const SolverOptions& opt) {
  const auto t0 = Clock::now();
  const int n = static_cast<int>(b.size());
  if (p.size() != n) throw std::invalid_argument("pcg: preconditioner has the wrong size");
  check_rhs(n, b);
  const int max_iter = resolve_max_iter(opt, n);
  SolveResult res;
  res.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.report = {0, 0.0, true, seconds_since(t0)};
    return res;
  }
  Eigen::VectorXd r = b, z(n), q(n), kx(n);
  p.apply(r, z);
  Eigen::VectorXd d = z;
  double rz = r.dot(z);
  double rel = 1.0;
  int it = 0;
  while (it < max_iter) {
    if (!(rz > 0.0)) throw InvalidMatrixError("pcg: preconditioner is not positive definite");
    k(d, q);
    const double dq = d.dot(q);
    if (!(dq > 0.0)) throw InvalidMatrixError("pcg: matrix is not positive definite");
    const double alpha = rz / dq;
    res.x += alpha * d;
    r -= alpha * q;
    ++it;
    rel = r.norm() / bnorm;
    if (rel <= opt.tol) {
      // Confirm with the true residual; continue from it if the recursion drifted.
      k(res.x, kx);
      r = b - kx;
      rel = r.norm() / bnorm;
      if (rel <= opt.tol) break;
    }
    p.apply(r, z);
    const double rz_new = r.dot(z);
    d = z + (rz_new / rz) * d;
    rz = rz_new;
  }
  if (it == max_iter) {
    k(res.x, kx);
    rel = (b - kx).norm() / bnorm;
  }
  res.report = {it, rel, rel <= opt.tol, seconds_since(t0)};
  return res;
}

SolveResult pcg(const DenseSymMatrix& k, const Preconditioner& p, const Eigen::VectorXd& b, const SolverOptions& opt) {
  check_rhs(k.size(), b);
  return pcg(matvec_of(k), p, b, opt);
}

SolveResult cg(const MatVec& k, const Eigen::VectorXd& b, const SolverOptions& opt) {
  return pcg(k, identity_preconditioner(static_cast<int>(b.size())), b, opt);
}

SolveResult cg(const DenseSymMatrix& k, const Eigen::VectorXd& b, const SolverOptions& opt) {
  check_rhs(k.size(), b);
  return cg(matvec_of(k), b, opt);
}

}  // namespace fracbpx
