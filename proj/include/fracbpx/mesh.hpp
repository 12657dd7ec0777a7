#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "fracbpx/geometry.hpp"

namespace fracbpx {

enum class DomainShape {
  Polygon,  // Omega is the polygon bounded by the mesh boundary
  Disk,     // unit disk; boundary midpoints are projected onto the circle
};

struct Vertex {
  double x = 0.0;
  double y = 0.0;
  bool on_boundary = false;
};

// Vertices are counter-clockwise; the refinement edge is (v[1], v[2]).
struct Element {
  std::array<int, 3> v{};
  int generation = 0;
};

class Mesh {
 public:
  Mesh() = default;
  // Boundary flags are recomputed from topology. Throws InvalidMeshError on
  // non-positive area, non-manifold edges or a boundary that is not one loop.
  Mesh(std::vector<Vertex> vertices, std::vector<Element> elements, DomainShape shape);

  DomainShape shape() const { return shape_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_dofs() const { return static_cast<int>(interior_.size()); }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Vertex& vertex(int id) const { return vertices_[id]; }
  const Element& element(int id) const { return elements_[id]; }
  Point point(int id) const { return {vertices_[id].x, vertices_[id].y}; }

  // DOF numbering: interior vertices in increasing id order.
  const std::vector<int>& interior_node_ids() const { return interior_; }
  int dof_of_vertex(int id) const { return dof_of_vertex_[id]; }

  // Element across the edge opposite local vertex k, or -1 on the boundary.
  int neighbor(int e, int k) const { return neighbors_[e][k]; }
  std::span<const int> vertex_ring(int v) const;

  double area(int e) const;
  double diameter(int e) const;
  Point barycenter(int e) const;
  double patch_area(int v) const;
  // (|omega_v| / #R_v)^{1/2}
  double local_scaling(int v) const;

  // Counter-clockwise boundary vertex loop with collinear vertices removed.
  const std::vector<int>& boundary_corners() const { return corners_; }
  double distance_to_boundary(Point p) const;
  double domain_area() const;

 private:
  void build_topology();

  DomainShape shape_ = DomainShape::Polygon;
  std::vector<Vertex> vertices_;
  std::vector<Element> elements_;
  std::vector<int> interior_;
  std::vector<int> dof_of_vertex_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<int> ring_offsets_;
  std::vector<int> ring_elements_;
  std::vector<int> corners_;
};

struct BisectionStep {
  int index = 0;  // 1-based position in the history
  int p_minus = -1;
  int p_plus = -1;
  int midpoint = -1;
  int generation = 0;
  // Children created by this step (the ring of the new midpoint), as vertex triples.
  std::vector<std::array<int, 3>> ring;
  double local_size = 0.0;
  // (q, h_{j,q}) for the interior vertices of the triplet, measured right after the step.
  std::vector<std::pair<int, double>> local_scalings;

  std::array<int, 3> triplet() const { return {midpoint, p_plus, p_minus}; }
};

using BisectionHistory = std::vector<BisectionStep>;

struct BisectionResult {
  Mesh mesh;
  std::vector<BisectionStep> steps;
};

struct MidpointRecord {
  int midpoint = -1;
  int a = -1;
  int b = -1;
};

struct UniformRefinement {
  Mesh mesh;
  std::vector<MidpointRecord> midpoints;
};

struct MeshStats {
  double h_min = 0.0;
  double h_max = 0.0;
  double shape_regularity = 0.0;
  int k_star = 0;
  double min_angle = 0.0;
};

Mesh init_square();
Mesh init_disk(double target_h);
Mesh init_hexagon_disk();

Mesh uniform_refine(const Mesh& mesh);
UniformRefinement uniform_refine_detailed(const Mesh& mesh);

// Newest-vertex bisection with recursive completion. Step indices are 1-based
// within the returned list; append_history renumbers them globally.
BisectionResult bisect_marked(const Mesh& mesh, std::span<const int> marked);
void append_history(BisectionHistory& history, std::vector<BisectionStep> steps);

std::vector<int> graded_mark(const Mesh& mesh, double theta, double mu);

std::vector<int> compute_levels(const Mesh& mesh);
MeshStats mesh_stats(const Mesh& mesh);

// One stage: bisect every element once, then repeat graded_mark/bisect_marked
// until nothing is marked. Steps are appended to history.
Mesh graded_stage(const Mesh& mesh, double theta, double mu, BisectionHistory& history);

}  // namespace fracbpx
