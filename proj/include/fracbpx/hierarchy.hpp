#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fracbpx/mesh.hpp"
#include "fracbpx/sparse.hpp"

namespace fracbpx {

struct UniformHierarchy {
  std::vector<Mesh> meshes;                // levels 0..J
  std::vector<SparseMatrix> prolongations; // level k -> k+1, k = 0..J-1
  std::vector<SparseMatrix> to_finest;     // level k -> J; to_finest[J] is the identity
  std::vector<double> h;                   // h_k = h_0 2^{-k}

  int levels() const { return static_cast<int>(meshes.size()) - 1; }
  const Mesh& finest() const { return meshes.back(); }
};

UniformHierarchy build_uniform_hierarchy(const Mesh& t0, int jbar, double h0 = 1.0, std::size_t max_dofs = 20000);

// Sparse fine-DOF vector: (dof, value) pairs sorted by dof.
using SparseColumn = std::vector<std::pair<int, double>>;

struct TripletColumn {
  int step = 0;  // j; 0 denotes the interior hats of the initial mesh
  int vertex = -1;
  double scale = 0.0;  // h_{j,q}
  SparseColumn values;
};

// Columns of the graded hierarchy stored column-compressed.
struct GradedHierarchy {
  Mesh final_mesh;
  BisectionHistory history;
  int initial_vertices = 0;
  std::vector<int> col_offsets;  // size = columns + 1
  std::vector<int> col_dofs;
  std::vector<double> col_values;
  std::vector<int> col_step;
  std::vector<int> col_vertex;
  std::vector<double> col_scale;
  Eigen::VectorXd fine_scale;  // h_p per fine DOF

  int num_columns() const { return static_cast<int>(col_step.size()); }
};

// history must describe final_mesh as a refinement of t0 (vertex ids persist).
GradedHierarchy build_graded_hierarchy(const Mesh& t0, const BisectionHistory& history, const Mesh& final_mesh);

// Columns phi_{j,q} for the interior q of the triplet of step j (1 <= j <= J),
// or for the interior vertices of the initial mesh when j = 0.
std::vector<TripletColumn> triplet_columns(const Mesh& t0, const BisectionHistory& history, const Mesh& final_mesh,
                                           int j);

// h_p = (|omega_p| / #R_p)^{1/2}, indexed by vertex id; 0 on the boundary.
std::vector<double> fine_node_scalings(const Mesh& mesh);

// Slices (Q_k - Q_{k-1}) v, k = 0..J, as finest-level vectors.
std::vector<Eigen::VectorXd> l2_projection_chain(const UniformHierarchy& hier, const SparseMatrix& m_fine,
                                                 const Eigen::VectorXd& v);

}  // namespace fracbpx
