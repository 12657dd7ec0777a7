#include "fracbpx/dense_sym_matrix.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fracbpx {

DenseSymMatrix::DenseSymMatrix(int n) : n_(n), offset_(n + 1, 0) {
  if (n < 0) throw std::invalid_argument("DenseSymMatrix: negative size");
  for (int i = 0; i < n; ++i) offset_[i + 1] = offset_[i] + static_cast<std::size_t>(n - i);
  data_.assign(offset_[n], 0.0);
}

void DenseSymMatrix::multiply(const double* x, double* y) const {
  for (int i = 0; i < n_; ++i) y[i] = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double* a = row_upper(i);
    const double xi = x[i];
    double acc = a[0] * xi;
    const int len = n_ - i;
    const double* xr = x + i;
    double* yr = y + i;
    for (int k = 1; k < len; ++k) {
      acc += a[k] * xr[k];
      yr[k] += a[k] * xi;
    }
    y[i] += acc;
  }
}

Eigen::VectorXd DenseSymMatrix::operator*(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw std::invalid_argument("DenseSymMatrix: dimension mismatch");
  Eigen::VectorXd y(n_);
  multiply(x.data(), y.data());
  return y;
}

Eigen::VectorXd DenseSymMatrix::diagonal() const {
  Eigen::VectorXd d(n_);
  for (int i = 0; i < n_; ++i) d[i] = row_upper(i)[0];
  return d;
}

double DenseSymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double* a = row_upper(i);
    s += a[0] * a[0];
    for (int k = 1; k < n_ - i; ++k) s += 2.0 * a[k] * a[k];
  }
  return std::sqrt(s);
}

Eigen::MatrixXd DenseSymMatrix::to_dense() const {
  Eigen::MatrixXd a(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) a(i, j) = a(j, i) = (*this)(i, j);
  }
  return a;
}

DenseSymMatrix DenseSymMatrix::from_dense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("from_dense: matrix not square");
  DenseSymMatrix m(static_cast<int>(a.rows()));
  for (int i = 0; i < m.n_; ++i) {
    for (int j = i; j < m.n_; ++j) m.at(i, j) = 0.5 * (a(i, j) + a(j, i));
  }
  return m;
}

void write_matrix(std::ostream& out, const DenseSymMatrix& a) {
  out << "fracbpx-matrix v1\n" << a.size() << '\n' << std::setprecision(17);
  for (int i = 0; i < a.size(); ++i) {
    for (int j = i; j < a.size(); ++j) out << a(i, j) << '\n';
  }
}

void write_matrix(const std::string& path, const DenseSymMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_matrix(out, a);
}

DenseSymMatrix read_matrix(std::istream& in) {
  std::string magic, version;
  int n = 0;
  in >> magic >> version >> n;
  if (!in || magic != "fracbpx-matrix" || version != "v1" || n < 0) throw std::runtime_error("malformed matrix header");
  DenseSymMatrix a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) in >> a.at(i, j);
  }
  if (!in) throw std::runtime_error("truncated matrix data");
  return a;
}

}  // namespace fracbpx
