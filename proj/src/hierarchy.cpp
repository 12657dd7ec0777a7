#include "fracbpx/hierarchy.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

#include "fracbpx/assembly.hpp"
#include "fracbpx/errors.hpp"

namespace fracbpx {

UniformHierarchy build_uniform_hierarchy(const Mesh& t0, int jbar, double h0, std::size_t max_dofs) {
  if (jbar < 0) throw std::invalid_argument("build_uniform_hierarchy: negative level count");
  UniformHierarchy hier;
  hier.meshes.push_back(t0);
  hier.h.push_back(h0);
  for (int k = 0; k < jbar; ++k) {
    const Mesh& coarse = hier.meshes.back();
    UniformRefinement ref = uniform_refine_detailed(coarse);
    const Mesh& fine = ref.mesh;
    if (static_cast<std::size_t>(fine.num_dofs()) > max_dofs) {
      throw ResourceError("build_uniform_hierarchy: " + std::to_string(fine.num_dofs()) + " DOFs exceed the budget");
    }
    std::vector<Triplet> t;
    for (int v = 0; v < coarse.num_vertices(); ++v) {
      const int dc = coarse.dof_of_vertex(v);
      if (dc >= 0) t.emplace_back(fine.dof_of_vertex(v), dc, 1.0);
    }
    for (const MidpointRecord& r : ref.midpoints) {
      const int df = fine.dof_of_vertex(r.midpoint);
      if (df < 0) continue;
      for (int end : {r.a, r.b}) {
        const int dc = coarse.dof_of_vertex(end);
        if (dc >= 0) t.emplace_back(df, dc, 0.5);
      }
    }
    hier.prolongations.push_back(sparse_from_triplets(fine.num_dofs(), coarse.num_dofs(), t));
    hier.meshes.push_back(std::move(ref.mesh));
    hier.h.push_back(0.5 * hier.h.back());
  }
  const int nf = hier.finest().num_dofs();
  hier.to_finest.resize(jbar + 1);
  SparseMatrix id(nf, nf);
  id.setIdentity();
  id.makeCompressed();
  hier.to_finest[jbar] = id;
  for (int k = jbar - 1; k >= 0; --k) {
    SparseMatrix p = hier.to_finest[k + 1] * hier.prolongations[k];
    p.prune(0.0, 0.0);
    p.makeCompressed();
    hier.to_finest[k] = std::move(p);
  }
  return hier;
}

namespace {

class ColumnPropagator {
 public:
  ColumnPropagator(const BisectionHistory& history, int num_vertices)
      : history_(history), steps_of_(num_vertices), value_(num_vertices, 0.0) {
    for (const BisectionStep& st : history) {
      if (st.p_minus >= num_vertices || st.p_plus >= num_vertices || st.midpoint >= num_vertices) {
        throw std::invalid_argument("bisection history refers to vertices outside the final mesh");
      }
      steps_of_[st.p_minus].push_back(st.index);
      steps_of_[st.p_plus].push_back(st.index);
    }
  }

  // Nodal values on the final mesh of the hat at q on the mesh after step j.
  std::vector<std::pair<int, double>> propagate(int j, int q) {
    std::priority_queue<int, std::vector<int>, std::greater<int>> pending;
    std::vector<int> touched = {q};
    value_[q] = 1.0;
    auto enqueue = [&](int v) {
      for (int k : steps_of_[v]) {
        if (k > j) pending.push(k);
      }
    };
    enqueue(q);
    int last = -1;
    while (!pending.empty()) {
      const int k = pending.top();
      pending.pop();
      if (k == last) continue;
      last = k;
      const BisectionStep& st = history_[k - 1];
      const double v = 0.5 * (value_[st.p_minus] + value_[st.p_plus]);
      if (v == 0.0) continue;
      value_[st.midpoint] = v;
      touched.push_back(st.midpoint);
      enqueue(st.midpoint);
    }
    std::vector<std::pair<int, double>> out;
    out.reserve(touched.size());
    for (int v : touched) {
      out.emplace_back(v, value_[v]);
      value_[v] = 0.0;
    }
    return out;
  }

 private:
  const BisectionHistory& history_;
  std::vector<std::vector<int>> steps_of_;
  std::vector<double> value_;
};

SparseColumn to_dofs(const Mesh& final_mesh, const std::vector<std::pair<int, double>>& nodal) {
  SparseColumn col;
  for (const auto& [v, val] : nodal) {
    const int d = final_mesh.dof_of_vertex(v);
    if (d >= 0) col.emplace_back(d, val);
  }
  std::sort(col.begin(), col.end());
  return col;
}

void check_history(const Mesh& t0, const BisectionHistory& history, const Mesh& final_mesh) {
  if (t0.num_vertices() + static_cast<int>(history.size()) != final_mesh.num_vertices()) {
    throw std::invalid_argument("bisection history does not connect the initial and final meshes");
  }
}

std::vector<TripletColumn> columns_for_step(const Mesh& t0, const BisectionHistory& history, const Mesh& final_mesh,
                                            int j, ColumnPropagator& prop) {
  std::vector<TripletColumn> out;
  if (j == 0) {
    for (int q : t0.interior_node_ids()) {
      out.push_back({0, q, t0.local_scaling(q), to_dofs(final_mesh, prop.propagate(0, q))});
    }
    return out;
  }
  const BisectionStep& st = history[j - 1];
  for (const auto& [q, h] : st.local_scalings) {
    out.push_back({j, q, h, to_dofs(final_mesh, prop.propagate(j, q))});
  }
  return out;
}

}  // namespace

std::vector<TripletColumn> triplet_columns(const Mesh& t0, const BisectionHistory& history, const Mesh& final_mesh,
                                           int j) {
  check_history(t0, history, final_mesh);
  if (j < 0 || j > static_cast<int>(history.size())) throw std::out_of_range("triplet_columns: step out of range");
  ColumnPropagator prop(history, final_mesh.num_vertices());
  return columns_for_step(t0, history, final_mesh, j, prop);
}

GradedHierarchy build_graded_hierarchy(const Mesh& t0, const BisectionHistory& history, const Mesh& final_mesh) {
  check_history(t0, history, final_mesh);
  GradedHierarchy gh;
  gh.final_mesh = final_mesh;
  gh.history = history;
  gh.initial_vertices = t0.num_vertices();
  gh.col_offsets.push_back(0);
  ColumnPropagator prop(history, final_mesh.num_vertices());
  for (int j = 0; j <= static_cast<int>(history.size()); ++j) {
    for (TripletColumn& c : columns_for_step(t0, history, final_mesh, j, prop)) {
      for (const auto& [d, v] : c.values) {
        gh.col_dofs.push_back(d);
        gh.col_values.push_back(v);
      }
      gh.col_offsets.push_back(static_cast<int>(gh.col_dofs.size()));
      gh.col_step.push_back(c.step);
      gh.col_vertex.push_back(c.vertex);
      gh.col_scale.push_back(c.scale);
    }
  }
  const std::vector<double> hp = fine_node_scalings(final_mesh);
  gh.fine_scale.resize(final_mesh.num_dofs());
  for (int d = 0; d < final_mesh.num_dofs(); ++d) gh.fine_scale[d] = hp[final_mesh.interior_node_ids()[d]];
  return gh;
}

std::vector<double> fine_node_scalings(const Mesh& mesh) {
  std::vector<double> h(mesh.num_vertices(), 0.0);
  for (int p : mesh.interior_node_ids()) h[p] = mesh.local_scaling(p);
  return h;
}

std::vector<Eigen::VectorXd> l2_projection_chain(const UniformHierarchy& hier, const SparseMatrix& m_fine,
                                                 const Eigen::VectorXd& v) {
  const Eigen::VectorXd mv = m_fine * v;
  std::vector<Eigen::VectorXd> slices;
  Eigen::VectorXd previous = Eigen::VectorXd::Zero(v.size());
  for (int k = 0; k <= hier.levels(); ++k) {
    const SparseMatrix& ik = hier.to_finest[k];
    const Eigen::SparseMatrix<double> mk = assemble_mass(hier.meshes[k]);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(mk);
    if (chol.info() != Eigen::Success) throw std::runtime_error("l2_projection_chain: singular level mass matrix");
    const Eigen::VectorXd rhs = ik.transpose() * mv;
    const Eigen::VectorXd qk = ik * chol.solve(rhs);
    slices.push_back(qk - previous);
    previous = qk;
  }
  return slices;
}

}  // namespace fracbpx
