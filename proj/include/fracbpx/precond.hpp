#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "fracbpx/dense_sym_matrix.hpp"
#include "fracbpx/hierarchy.hpp"

namespace fracbpx {

struct PrecondDescriptor {
  std::string kind;  // "none", "diag", "bpx-uniform", "bpx-graded", "dense"
  double s = 0.0;
  double gamma_tilde = 0.0;
  int levels = 0;
};

// Matrix-free SPD operator y = P x. Immutable; apply may be called concurrently.
class Preconditioner {
 public:
  using ApplyFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

  Preconditioner(int n, ApplyFn fn, PrecondDescriptor descriptor)
      : n_(n), fn_(std::move(fn)), descriptor_(std::move(descriptor)) {}

  int size() const { return n_; }
  const PrecondDescriptor& descriptor() const { return descriptor_; }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const { fn_(x, y); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(n_);
    fn_(x, y);
    return y;
  }

 private:
  int n_;
  ApplyFn fn_;
  PrecondDescriptor descriptor_;
};

// P x = h_J^{2s-2} x + (1 - gt^s) sum_{k<J} h_k^{2s-2} I_k I_k^T x
Preconditioner bpx_uniform(std::shared_ptr<const UniformHierarchy> hier, double s, double gamma_tilde);

// P x = sum_p h_p^{2s-2} x_p e_p + (1 - gt^s) sum_{j,q} h_{j,q}^{2s-2} (c_{j,q}^T x) c_{j,q}
Preconditioner bpx_graded(std::shared_ptr<const GradedHierarchy> gh, double s, double gamma_tilde);

Preconditioner diag_scaling(const DenseSymMatrix& k);
Preconditioner identity_preconditioner(int n);
Preconditioner scaled(const Preconditioner& p, double c);

// Explicit matrix of a preconditioner, column by column (small n only).
Eigen::MatrixXd to_dense(const Preconditioner& p);

}  // namespace fracbpx
