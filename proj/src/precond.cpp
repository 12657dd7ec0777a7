#include "fracbpx/precond.hpp"

#include <cmath>
#include <stdexcept>

#include "fracbpx/errors.hpp"

namespace fracbpx {

namespace {

void check_parameters(double s, double gamma_tilde) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("preconditioner: s must lie in (0,1)");
  if (!(gamma_tilde >= 0.0 && gamma_tilde < 1.0)) throw std::domain_error("preconditioner: gamma_tilde must lie in [0,1)");
}

}  // namespace

Preconditioner bpx_uniform(std::shared_ptr<const UniformHierarchy> hier, double s, double gamma_tilde) {
  check_parameters(s, gamma_tilde);
  const int jbar = hier->levels();
  const int n = hier->finest().num_dofs();
  const double fine_weight = std::pow(hier->h[jbar], 2.0 * s - 2.0);
  const double correction = 1.0 - std::pow(gamma_tilde, s);
  std::vector<double> weights(jbar);
  for (int k = 0; k < jbar; ++k) weights[k] = correction * std::pow(hier->h[k], 2.0 * s - 2.0);

  auto fn = [hier, jbar, fine_weight, weights](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y = fine_weight * x;
    if (jbar == 0) return;
    // r_k = I_k^T x by successive restriction.
    std::vector<Eigen::VectorXd> r(jbar);
    Eigen::VectorXd cur = x;
    for (int k = jbar - 1; k >= 0; --k) {
      r[k] = hier->prolongations[k].transpose() * cur;
      cur = r[k];
    }
    Eigen::VectorXd acc = weights[0] * r[0];
    for (int k = 1; k < jbar; ++k) acc = hier->prolongations[k - 1] * acc + weights[k] * r[k];
    y += hier->prolongations[jbar - 1] * acc;
  };
  return Preconditioner(n, std::move(fn), {"bpx-uniform", s, gamma_tilde, jbar});
}

Preconditioner bpx_graded(std::shared_ptr<const GradedHierarchy> gh, double s, double gamma_tilde) {
  check_parameters(s, gamma_tilde);
  const int n = gh->final_mesh.num_dofs();
  const double correction = 1.0 - std::pow(gamma_tilde, s);
  Eigen::VectorXd fine_weight(n);
  for (int d = 0; d < n; ++d) fine_weight[d] = std::pow(gh->fine_scale[d], 2.0 * s - 2.0);
  std::vector<double> col_weight(gh->num_columns());
  for (int c = 0; c < gh->num_columns(); ++c) col_weight[c] = correction * std::pow(gh->col_scale[c], 2.0 * s - 2.0);

  auto fn = [gh, fine_weight, col_weight](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y = fine_weight.cwiseProduct(x);
    const int* dofs = gh->col_dofs.data();
    const double* vals = gh->col_values.data();
    for (std::size_t c = 0; c < col_weight.size(); ++c) {
      const int b = gh->col_offsets[c];
      const int e = gh->col_offsets[c + 1];
      double dot = 0.0;
      for (int i = b; i < e; ++i) dot += vals[i] * x[dofs[i]];
      dot *= col_weight[c];
      for (int i = b; i < e; ++i) y[dofs[i]] += dot * vals[i];
    }
  };
  return Preconditioner(n, std::move(fn), {"bpx-graded", s, gamma_tilde, static_cast<int>(gh->history.size())});
}

Preconditioner diag_scaling(const DenseSymMatrix& k) {
  const Eigen::VectorXd d = k.diagonal();
  for (int i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw InvalidMatrixError("diag_scaling: non-positive diagonal entry");
  }
  const Eigen::VectorXd inv = d.cwiseInverse();
  return Preconditioner(
      static_cast<int>(d.size()), [inv](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = inv.cwiseProduct(x); },
      {"diag", 0.0, 0.0, 0});
}

Preconditioner identity_preconditioner(int n) {
  return Preconditioner(n, [](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = x; }, {"none", 0.0, 0.0, 0});
}

Preconditioner scaled(const Preconditioner& p, double c) {
  if (!(c > 0.0)) throw std::domain_error("scaled: factor must be positive");
  return Preconditioner(
      p.size(),
      [p, c](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
        p.apply(x, y);
        y *= c;
      },
      p.descriptor());
}

Eigen::MatrixXd to_dense(const Preconditioner& p) {
  const int n = p.size();
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), y(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    p.apply(e, y);
    a.col(j) = y;
    e[j] = 0.0;
  }
  return a;
}

}  // namespace fracbpx
