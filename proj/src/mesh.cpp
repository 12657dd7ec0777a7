#include "fracbpx/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "fracbpx/errors.hpp"

namespace fracbpx {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

constexpr std::size_t kMaxElements = 20'000'000;

}  // namespace

Mesh::Mesh(std::vector<Vertex> vertices, std::vector<Element> elements, DomainShape shape)
    : shape_(shape), vertices_(std::move(vertices)), elements_(std::move(elements)) {
  build_topology();
}

void Mesh::build_topology() {
  const int nv = num_vertices();
  const int ne = num_elements();
  if (ne == 0) throw InvalidMeshError("mesh has no elements");
  for (const Vertex& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidMeshError("non-finite vertex coordinate");
  }
  for (int e = 0; e < ne; ++e) {
    const Element& el = elements_[e];
    for (int id : el.v) {
      if (id < 0 || id >= nv) throw InvalidMeshError("element " + std::to_string(e) + " references a missing vertex");
    }
    if (el.generation < 0) throw InvalidMeshError("negative generation");
    if (!(area(e) > 0.0)) throw InvalidMeshError("element " + std::to_string(e) + " has non-positive signed area");
  }

  neighbors_.assign(ne, {-1, -1, -1});
  std::unordered_map<std::uint64_t, int> open_edges;
  open_edges.reserve(static_cast<std::size_t>(ne) * 2);
  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k < 3; ++k) {
      const int a = elements_[e].v[(k + 1) % 3];
      const int b = elements_[e].v[(k + 2) % 3];
      const std::uint64_t key = edge_key(a, b);
      auto it = open_edges.find(key);
      if (it == open_edges.end()) {
        open_edges.emplace(key, 3 * e + k);
        continue;
      }
      if (it->second < 0) throw InvalidMeshError("edge shared by more than two elements");
      const int other = it->second / 3;
      const int other_k = it->second % 3;
      neighbors_[e][k] = other;
      neighbors_[other][other_k] = e;
      it->second = -1;
    }
  }

  std::vector<int> next(nv, -1);
  int boundary_edges = 0;
  for (auto& v : vertices_) v.on_boundary = false;
  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k < 3; ++k) {
      if (neighbors_[e][k] >= 0) continue;
      const int a = elements_[e].v[(k + 1) % 3];
      const int b = elements_[e].v[(k + 2) % 3];
      if (next[a] >= 0) throw InvalidMeshError("boundary is not a simple closed curve");
      next[a] = b;
      vertices_[a].on_boundary = true;
      vertices_[b].on_boundary = true;
      ++boundary_edges;
    }
  }
  int start = -1;
  for (int v = 0; v < nv; ++v) {
    if (next[v] >= 0) {
      start = v;
      break;
    }
  }
  if (start < 0) throw InvalidMeshError("mesh has no boundary");
  std::vector<int> loop;
  for (int v = start;;) {
    loop.push_back(v);
    v = next[v];
    if (v < 0) throw InvalidMeshError("open boundary curve");
    if (v == start) break;
    if (static_cast<int>(loop.size()) > boundary_edges) throw InvalidMeshError("boundary curve does not close");
  }
  if (static_cast<int>(loop.size()) != boundary_edges) {
    throw InvalidMeshError("boundary consists of several loops (hanging node or hole)");
  }
  corners_.clear();
  const int nl = static_cast<int>(loop.size());
  for (int i = 0; i < nl; ++i) {
    const Point prev = point(loop[(i + nl - 1) % nl]);
    const Point cur = point(loop[i]);
    const Point nxt = point(loop[(i + 1) % nl]);
    const Point u = cur - prev;
    const Point w = nxt - cur;
    if (std::abs(cross(u, w)) > 1e-12 * norm(u) * norm(w)) corners_.push_back(loop[i]);
  }

  ring_offsets_.assign(nv + 1, 0);
  for (const Element& el : elements_) {
    for (int id : el.v) ++ring_offsets_[id + 1];
  }
  for (int v = 0; v < nv; ++v) ring_offsets_[v + 1] += ring_offsets_[v];
  ring_elements_.assign(ring_offsets_[nv], 0);
  std::vector<int> fill(ring_offsets_.begin(), ring_offsets_.end() - 1);
  for (int e = 0; e < ne; ++e) {
    for (int id : elements_[e].v) ring_elements_[fill[id]++] = e;
  }

  interior_.clear();
  dof_of_vertex_.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (ring_offsets_[v + 1] == ring_offsets_[v]) throw InvalidMeshError("unused vertex " + std::to_string(v));
    if (!vertices_[v].on_boundary) {
      dof_of_vertex_[v] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }
  }
}

std::span<const int> Mesh::vertex_ring(int v) const {
  return {ring_elements_.data() + ring_offsets_[v], static_cast<std::size_t>(ring_offsets_[v + 1] - ring_offsets_[v])};
}

double Mesh::area(int e) const {
  const auto& v = elements_[e].v;
  return signed_area(point(v[0]), point(v[1]), point(v[2]));
}

double Mesh::diameter(int e) const {
  const auto& v = elements_[e].v;
  return std::max({distance(point(v[0]), point(v[1])), distance(point(v[1]), point(v[2])),
                   distance(point(v[2]), point(v[0]))});
}

Point Mesh::barycenter(int e) const {
  const auto& v = elements_[e].v;
  const Point s = point(v[0]) + point(v[1]) + point(v[2]);
  return (1.0 / 3.0) * s;
}

double Mesh::patch_area(int v) const {
  double a = 0.0;
  for (int e : vertex_ring(v)) a += area(e);
  return a;
}

double Mesh::local_scaling(int v) const {
  return std::sqrt(patch_area(v) / static_cast<double>(vertex_ring(v).size()));
}

double Mesh::distance_to_boundary(Point p) const {
  if (shape_ == DomainShape::Disk) return std::max(0.0, 1.0 - norm(p));
  double d = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(corners_.size());
  for (int i = 0; i < n; ++i) {
    d = std::min(d, point_segment_distance(p, point(corners_[i]), point(corners_[(i + 1) % n])));
  }
  return d;
}

double Mesh::domain_area() const {
  if (shape_ == DomainShape::Disk) return std::numbers::pi;
  double a = 0.0;
  const int n = static_cast<int>(corners_.size());
  for (int i = 0; i < n; ++i) a += 0.5 * cross(point(corners_[i]), point(corners_[(i + 1) % n]));
  return a;
}

Mesh init_square() {
  std::vector<Vertex> vertices;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) vertices.push_back({-1.0 + i, -1.0 + j, false});
  }
  // Each cell is split along the diagonal from its lower-left corner. Vertex 0
  // of each triangle is its right-angle vertex, so the refinement edge is the
  // hypotenuse.
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const int a = 3 * j + i;
      tris.push_back({a + 1, a + 4, a});
      tris.push_back({a + 3, a, a + 4});
    }
  }
  std::vector<Element> elements;
  for (const auto& t : tris) elements.push_back({t, 0});
  return Mesh(std::move(vertices), std::move(elements), DomainShape::Polygon);
}

Mesh init_hexagon_disk() {
  std::vector<Vertex> vertices = {{0.0, 0.0, false}};
  for (int k = 0; k < 6; ++k) {
    const double t = k * std::numbers::pi / 3.0;
    vertices.push_back({std::cos(t), std::sin(t), true});
  }
  std::vector<Element> elements;
  for (int k = 0; k < 6; ++k) elements.push_back({{0, 1 + k, 1 + (k + 1) % 6}, 0});
  return Mesh(std::move(vertices), std::move(elements), DomainShape::Disk);
}

Mesh init_disk(double target_h) {
  if (!(target_h > 0.0)) throw std::domain_error("init_disk: target_h must be positive");
  Mesh mesh = init_hexagon_disk();
  while (mesh_stats(mesh).h_max > target_h) {
    if (static_cast<std::size_t>(mesh.num_elements()) * 4 > kMaxElements) {
      throw ResourceError("init_disk: target_h too small for the element budget");
    }
    mesh = uniform_refine(mesh);
  }
  return mesh;
}

UniformRefinement uniform_refine_detailed(const Mesh& mesh) {
  if (static_cast<std::size_t>(mesh.num_elements()) * 4 > kMaxElements) {
    throw ResourceError("uniform_refine: element budget exceeded");
  }
  std::vector<Vertex> vertices = mesh.vertices();
  std::vector<MidpointRecord> records;
  std::unordered_map<std::uint64_t, int> mid;
  mid.reserve(static_cast<std::size_t>(mesh.num_elements()) * 2);

  auto midpoint_of = [&](int e, int k) {
    const int a = mesh.element(e).v[(k + 1) % 3];
    const int b = mesh.element(e).v[(k + 2) % 3];
    const std::uint64_t key = edge_key(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    Point p = midpoint(mesh.point(a), mesh.point(b));
    const bool boundary = mesh.neighbor(e, k) < 0;
    if (boundary && mesh.shape() == DomainShape::Disk) p = (1.0 / norm(p)) * p;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back({p.x, p.y, boundary});
    records.push_back({id, std::min(a, b), std::max(a, b)});
    mid.emplace(key, id);
    return id;
  };

  std::vector<Element> elements;
  elements.reserve(static_cast<std::size_t>(mesh.num_elements()) * 4);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto [v0, v1, v2] = mesh.element(e).v;
    const int g = mesh.element(e).generation + 1;
    const int m12 = midpoint_of(e, 0);
    const int m20 = midpoint_of(e, 1);
    const int m01 = midpoint_of(e, 2);
    elements.push_back({{v0, m01, m20}, g});
    elements.push_back({{m01, v1, m12}, g});
    elements.push_back({{m20, m12, v2}, g});
    elements.push_back({{m12, m20, m01}, g});
  }
  return {Mesh(std::move(vertices), std::move(elements), mesh.shape()), std::move(records)};
}

Mesh uniform_refine(const Mesh& mesh) { return uniform_refine_detailed(mesh).mesh; }

namespace {

class BisectionWorkspace {
 public:
  explicit BisectionWorkspace(const Mesh& mesh)
      : shape_(mesh.shape()), vertices_(mesh.vertices()), elements_(mesh.elements()),
        original_(mesh.num_elements(), 1), rings_(mesh.num_vertices()) {
    for (int e = 0; e < static_cast<int>(elements_.size()); ++e) attach(e);
  }

  void refine(int e) {
    if (e < 0 || e >= static_cast<int>(original_.size())) {
      throw std::out_of_range("bisect_marked: element id out of range");
    }
    if (original_[e]) bisect(e, 0);
  }

  BisectionResult finish() {
    return {Mesh(std::move(vertices_), std::move(elements_), shape_), std::move(steps_)};
  }

 private:
  static constexpr int kMaxDepth = 200;

  int other_element(int a, int b, int e) const {
    const auto it = edges_.find(edge_key(a, b));
    if (it == edges_.end()) throw InvalidMeshError("missing edge during bisection");
    return it->second[0] == e ? it->second[1] : it->second[0];
  }

  bool has_refinement_edge(int e, int a, int b) const {
    const auto& v = elements_[e].v;
    return (v[1] == a && v[2] == b) || (v[1] == b && v[2] == a);
  }

  void attach(int e) {
    const auto& v = elements_[e].v;
    for (int k = 0; k < 3; ++k) {
      auto [it, inserted] = edges_.try_emplace(edge_key(v[(k + 1) % 3], v[(k + 2) % 3]), std::array<int, 2>{e, -1});
      if (!inserted) {
        if (it->second[1] != -1 && it->second[0] != -1) throw InvalidMeshError("edge shared by more than two elements");
        (it->second[0] == -1 ? it->second[0] : it->second[1]) = e;
      }
      rings_[v[k]].push_back(e);
    }
  }

  void detach(int e) {
    const auto& v = elements_[e].v;
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t key = edge_key(v[(k + 1) % 3], v[(k + 2) % 3]);
      auto it = edges_.find(key);
      if (it->second[0] == e) it->second[0] = -1;
      if (it->second[1] == e) it->second[1] = -1;
      if (it->second[0] == -1 && it->second[1] == -1) edges_.erase(it);
      auto& ring = rings_[v[k]];
      ring.erase(std::find(ring.begin(), ring.end(), e));
    }
  }

  void bisect(int t, int depth) {
    if (depth > kMaxDepth) throw InvalidMeshError("bisection closure does not terminate: incompatible refinement labels");
    const int a = elements_[t].v[1];
    const int b = elements_[t].v[2];
    int nb = other_element(a, b, t);
    if (nb >= 0 && !has_refinement_edge(nb, a, b)) {
      bisect(nb, depth + 1);
      if (!has_refinement_edge(t, a, b)) throw InvalidMeshError("bisection closure modified its origin element");
      nb = other_element(a, b, t);
      if (nb < 0 || !has_refinement_edge(nb, a, b)) throw InvalidMeshError("neighbour label not compatible after closure");
    }
    compatible_bisect(t, nb, a, b);
  }

  void compatible_bisect(int t, int nb, int a, int b) {
    const int g = elements_[t].generation;
    if (nb >= 0 && elements_[nb].generation != g) {
      throw InvalidMeshError("compatible bisection across elements of different generation");
    }
    Point p = midpoint({vertices_[a].x, vertices_[a].y}, {vertices_[b].x, vertices_[b].y});
    const bool boundary = nb < 0;
    if (boundary && shape_ == DomainShape::Disk) p = (1.0 / norm(p)) * p;
    const int m = static_cast<int>(vertices_.size());
    vertices_.push_back({p.x, p.y, boundary});
    rings_.emplace_back();

    BisectionStep step;
    step.index = static_cast<int>(steps_.size()) + 1;
    step.p_minus = a;
    step.p_plus = b;
    step.midpoint = m;
    step.generation = g + 1;

    for (int e : {t, nb}) {
      if (e < 0) continue;
      const auto [v0, v1, v2] = elements_[e].v;
      detach(e);
      const Element c1{{m, v0, v1}, g + 1};
      const Element c2{{m, v2, v0}, g + 1};
      elements_[e] = c1;
      if (e < static_cast<int>(original_.size())) original_[e] = 0;
      const int e2 = static_cast<int>(elements_.size());
      elements_.push_back(c2);
      attach(e);
      attach(e2);
      step.ring.push_back(c1.v);
      step.ring.push_back(c2.v);
    }

    double diam = 0.0;
    for (const auto& c1 : step.ring) {
      for (const auto& c2 : step.ring) {
        for (int i : c1) {
          for (int j : c2) diam = std::max(diam, std::hypot(vertices_[i].x - vertices_[j].x, vertices_[i].y - vertices_[j].y));
        }
      }
    }
    step.local_size = diam;
    for (int q : step.triplet()) {
      if (vertices_[q].on_boundary) continue;
      double area = 0.0;
      for (int e : rings_[q]) {
        const auto& v = elements_[e].v;
        area += signed_area({vertices_[v[0]].x, vertices_[v[0]].y}, {vertices_[v[1]].x, vertices_[v[1]].y},
                            {vertices_[v[2]].x, vertices_[v[2]].y});
      }
      step.local_scalings.emplace_back(q, std::sqrt(area / static_cast<double>(rings_[q].size())));
    }
    steps_.push_back(std::move(step));
    if (elements_.size() > kMaxElements) throw ResourceError("bisect_marked: element budget exceeded");
  }

  DomainShape shape_;
  std::vector<Vertex> vertices_;
  std::vector<Element> elements_;
  std::vector<char> original_;
  std::vector<std::vector<int>> rings_;
  std::unordered_map<std::uint64_t, std::array<int, 2>> edges_;
  std::vector<BisectionStep> steps_;
};

}  // namespace

BisectionResult bisect_marked(const Mesh& mesh, std::span<const int> marked) {
  if (marked.empty()) return {mesh, {}};
  BisectionWorkspace ws(mesh);
  for (int e : marked) ws.refine(e);
  return ws.finish();
}

void append_history(BisectionHistory& history, std::vector<BisectionStep> steps) {
  for (auto& step : steps) {
    step.index = static_cast<int>(history.size()) + 1;
    history.push_back(std::move(step));
  }
}

std::vector<int> graded_mark(const Mesh& mesh, double theta, double mu) {
  if (!(theta > 1.0)) throw std::domain_error("graded_mark: theta must exceed 1");
  if (!(mu >= 1.0)) throw std::domain_error("graded_mark: mu must be at least 1");
  const int n = mesh.num_dofs();
  if (n < 2) throw std::domain_error("graded_mark: need at least 2 interior DOFs (log N > 0)");
  const double scale = theta * std::log(static_cast<double>(n)) / static_cast<double>(n);
  const double exponent = 2.0 * (mu - 1.0) / mu;
  std::vector<int> marked;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double d = mesh.distance_to_boundary(mesh.barycenter(e));
    if (mesh.area(e) > scale * std::pow(d, exponent)) marked.push_back(e);
  }
  return marked;
}

std::vector<int> compute_levels(const Mesh& mesh) {
  std::vector<int> level(mesh.num_vertices(), 0);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    for (int e : mesh.vertex_ring(v)) level[v] = std::max(level[v], mesh.element(e).generation);
  }
  return level;
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats st;
  st.h_min = std::numeric_limits<double>::infinity();
  st.min_angle = std::numbers::pi;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.element(e).v;
    const Point p[3] = {mesh.point(v[0]), mesh.point(v[1]), mesh.point(v[2])};
    const double h = mesh.diameter(e);
    st.h_min = std::min(st.h_min, h);
    st.h_max = std::max(st.h_max, h);
    const double perimeter = distance(p[0], p[1]) + distance(p[1], p[2]) + distance(p[2], p[0]);
    const double inradius = 2.0 * mesh.area(e) / perimeter;
    st.shape_regularity = std::max(st.shape_regularity, h / inradius);
    for (int k = 0; k < 3; ++k) {
      const Point u = p[(k + 1) % 3] - p[k];
      const Point w = p[(k + 2) % 3] - p[k];
      st.min_angle = std::min(st.min_angle, std::atan2(std::abs(cross(u, w)), dot(u, w)));
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    int gmin = std::numeric_limits<int>::max();
    int gmax = 0;
    const auto ring = mesh.vertex_ring(v);
    for (int e : ring) {
      gmin = std::min(gmin, mesh.element(e).generation);
      gmax = std::max(gmax, mesh.element(e).generation);
    }
    st.k_star = std::max({st.k_star, gmax - gmin, static_cast<int>(ring.size())});
  }
  return st;
}

Mesh graded_stage(const Mesh& mesh, double theta, double mu, BisectionHistory& history) {
  std::vector<int> all(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) all[e] = e;
  BisectionResult r = bisect_marked(mesh, all);
  append_history(history, std::move(r.steps));
  Mesh cur = std::move(r.mesh);
  for (;;) {
    std::vector<int> marked;
    if (cur.num_dofs() < 2) {
      // log N vanishes, so every element is marked.
      marked.resize(cur.num_elements());
      for (int e = 0; e < cur.num_elements(); ++e) marked[e] = e;
    } else {
      marked = graded_mark(cur, theta, mu);
    }
    if (marked.empty()) break;
    r = bisect_marked(cur, marked);
    append_history(history, std::move(r.steps));
    cur = std::move(r.mesh);
  }
  return cur;
}

}  // namespace fracbpx
