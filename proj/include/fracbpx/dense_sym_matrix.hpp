#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fracbpx {

// Symmetric matrix stored as its packed upper triangle, row-major.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(int n);

  int size() const { return n_; }
  std::size_t packed_size() const { return data_.size(); }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& at(int i, int j) { return data_[index(i, j)]; }
  void add(int i, int j, double v) { data_[index(i, j)] += v; }

  // Pointer to entries (i,i), (i,i+1), ..., (i,n-1).
  const double* row_upper(int i) const { return data_.data() + offset_[i]; }
  double* row_upper(int i) { return data_.data() + offset_[i]; }

  void multiply(const double* x, double* y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diagonal() const;
  double frobenius_norm() const;
  Eigen::MatrixXd to_dense() const;
  static DenseSymMatrix from_dense(const Eigen::MatrixXd& a);

 private:
  std::size_t index(int i, int j) const {
    return i <= j ? offset_[i] + static_cast<std::size_t>(j - i) : offset_[j] + static_cast<std::size_t>(i - j);
  }

  int n_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<double> data_;
};

// "fracbpx-matrix v1", n, then the upper triangle row by row at 17 digits.
void write_matrix(std::ostream& out, const DenseSymMatrix& a);
void write_matrix(const std::string& path, const DenseSymMatrix& a);
DenseSymMatrix read_matrix(std::istream& in);

}  // namespace fracbpx
