#include "fracbpx/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracbpx/special_functions.hpp"

namespace fracbpx {

double disk_solution_constant(int d, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("disk_solution_constant: s must lie in (0,1)");
  if (d < 1 || d > 3) throw std::domain_error("disk_solution_constant: d must be 1, 2 or 3");
  const double h = 0.5 * d;
  return gamma_fn(h) / (std::pow(4.0, s) * gamma_fn(1.0 + s) * gamma_fn(h + s));
}

double disk_exact_solution(Point x, double s) {
  const double r2 = dot(x, x);
  if (r2 >= 1.0) return 0.0;
  return disk_solution_constant(2, s) * std::pow(1.0 - r2, s);
}

double disk_exact_energy_squared(double s) {
  // int_0^1 (1 - r^2)^s 2 pi r dr = pi / (s + 1)
  return disk_solution_constant(2, s) * std::numbers::pi / (s + 1.0);
}

double galerkin_energy_error(double exact_energy_squared, const Eigen::VectorXd& load, const Eigen::VectorXd& uh) {
  if (load.size() != uh.size()) throw std::invalid_argument("galerkin_energy_error: size mismatch");
  return std::sqrt(std::max(0.0, exact_energy_squared - load.dot(uh)));
}

}  // namespace fracbpx
