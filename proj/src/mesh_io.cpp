#include "fracbpx/mesh_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "fracbpx/errors.hpp"

namespace fracbpx {

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "fracbpx-mesh v1\n";
  out << "vertices " << mesh.num_vertices() << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const Vertex& v = mesh.vertex(i);
    out << i << ' ' << v.x << ' ' << v.y << ' ' << (v.on_boundary ? 1 : 0) << '\n';
  }
  out << "elements " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    out << e << ' ' << el.v[0] << ' ' << el.v[1] << ' ' << el.v[2] << ' ' << el.generation << '\n';
  }
}

void write_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_mesh(out, mesh);
}

Mesh read_mesh(std::istream& in) {
  std::string magic, version, word;
  in >> magic >> version;
  if (magic != "fracbpx-mesh" || version != "v1") throw InvalidMeshError("unrecognised mesh header");
  int nv = 0;
  in >> word >> nv;
  if (!in || word != "vertices" || nv < 0) throw InvalidMeshError("malformed vertices section");
  std::vector<Vertex> vertices(nv);
  for (int i = 0; i < nv; ++i) {
    int id = 0, boundary = 0;
    in >> id >> vertices[i].x >> vertices[i].y >> boundary;
    if (!in || id != i) throw InvalidMeshError("malformed vertex line " + std::to_string(i));
    vertices[i].on_boundary = boundary != 0;
  }
  int ne = 0;
  in >> word >> ne;
  if (!in || word != "elements" || ne < 0) throw InvalidMeshError("malformed elements section");
  std::vector<Element> elements(ne);
  for (int e = 0; e < ne; ++e) {
    int id = 0;
    Element& el = elements[e];
    in >> id >> el.v[0] >> el.v[1] >> el.v[2] >> el.generation;
    if (!in || id != e) throw InvalidMeshError("malformed element line " + std::to_string(e));
  }
  const std::vector<Vertex> declared = vertices;
  Mesh probe(std::move(vertices), std::move(elements), DomainShape::Polygon);
  bool on_circle = true;
  for (int i = 0; i < nv; ++i) {
    if (declared[i].on_boundary != probe.vertex(i).on_boundary) {
      throw InvalidMeshError("boundary flag of vertex " + std::to_string(i) + " disagrees with topology");
    }
    if (probe.vertex(i).on_boundary && std::abs(std::hypot(declared[i].x, declared[i].y) - 1.0) > 1e-12) on_circle = false;
  }
  if (!on_circle) return probe;
  return Mesh(probe.vertices(), probe.elements(), DomainShape::Disk);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mesh(in);
}

}  // namespace fracbpx
