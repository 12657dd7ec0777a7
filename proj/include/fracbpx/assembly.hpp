#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fracbpx/dense_sym_matrix.hpp"
#include "fracbpx/geometry.hpp"
#include "fracbpx/mesh.hpp"
#include "fracbpx/sparse.hpp"

namespace fracbpx {

enum class OperatorMode { Integral, Censored };

struct QuadratureSpec {
  int gauss_order = 4;      // collapsed Gauss points per direction for near element pairs
  int singular_order = 5;   // points per direction for touching pairs
  double close_ratio = 1.0; // below: near pairs use gauss_order + 2
  double near_ratio = 2.5;  // below: collapsed Gauss; above: 6-point rule
  double far_ratio = 6.0;   // above: 3-point rule
};

struct AssemblyOptions {
  std::size_t max_dofs = 4100;
};

DenseSymMatrix assemble_fractional_stiffness(const Mesh& mesh, double s, const QuadratureSpec& quad = {},
                                             OperatorMode mode = OperatorMode::Integral,
                                             const AssemblyOptions& options = {});

// Restricted to interior DOFs.
SparseMatrix assemble_mass(const Mesh& mesh);
SparseMatrix assemble_h1_stiffness(const Mesh& mesh);
Eigen::VectorXd assemble_load(const Mesh& mesh, double f);

// Over all vertices, boundary included.
SparseMatrix assemble_mass_all_vertices(const Mesh& mesh);
Eigen::VectorXd assemble_load_all_vertices(const Mesh& mesh, double f);

// psi(x) = int over the complement of the convex polygon of |x-y|^{-2-2s} dy.
double complement_kernel_integral(const std::vector<Point>& polygon, Point x, double s);

// Local pair integrals
//   J_kl = int_{T1} int_{T2} (phi_k(x)-phi_k(y)) (phi_l(x)-phi_l(y)) |x-y|^{-2-2s} dy dx
// over the union of the vertices of T1 and T2 (no constant factor applied).

// T = (a, b, c); local order a, b, c.
std::array<std::array<double, 3>, 3> identical_pair_integral(Point a, Point b, Point c, double s, int order);
// T1 = (p, q, r1), T2 = (p, q, r2); local order p, q, r1, r2.
std::array<std::array<double, 4>, 4> edge_pair_integral(Point p, Point q, Point r1, Point r2, double s, int order);
// T1 = (p, e1, e2), T2 = (p, f1, f2); local order p, e1, e2, f1, f2.
std::array<std::array<double, 5>, 5> vertex_pair_integral(Point p, Point e1, Point e2, Point f1, Point f2, double s,
                                                          int order);

}  // namespace fracbpx
