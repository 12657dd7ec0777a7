#pragma once

#include <Eigen/Dense>

#include "fracbpx/geometry.hpp"

namespace fracbpx {

// u(x) = c (1 - |x|^2)_+^s solves (-Delta)^s u = 1 on the unit ball of R^d,
// with c = Gamma(d/2) / (4^s Gamma(1+s) Gamma(d/2+s)).
double disk_solution_constant(int d, double s);
double disk_exact_solution(Point x, double s);

// |u|_s^2 = int u for f = 1 on the unit disk.
double disk_exact_energy_squared(double s);

// |u - u_h|_s from the Galerkin identity |u|^2 - b^T u_h; clamped at zero.
double galerkin_energy_error(double exact_energy_squared, const Eigen::VectorXd& load, const Eigen::VectorXd& uh);

}  // namespace fracbpx
