#include "autocorrelation_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracbpx/special_functions.hpp"

namespace fracbpx::oracle {

namespace {

struct Affine {
  // value(x) = c0 + cx * x + cy * y
  double c0 = 0.0, cx = 0.0, cy = 0.0;
  double operator()(Point p) const { return c0 + cx * p.x + cy * p.y; }
};

struct Piece {
  Point p[3];
  Affine f;  // restriction of the hat to this triangle
};

Affine hat_on_triangle(Point a, Point b, Point c) {
  // hat equal to 1 at a and 0 at b, c
  const double det = cross(b - a, c - a);
  const Point n{-(c.y - b.y), c.x - b.x};  // normal to bc, scaled
  Affine f;
  f.cx = n.x / det;
  f.cy = n.y / det;
  f.c0 = -(f.cx * b.x + f.cy * b.y);
  return f;
}

std::vector<Piece> pieces_of(const Mesh& mesh, int dof) {
  const int v = mesh.interior_node_ids()[dof];
  std::vector<Piece> out;
  for (int e : mesh.vertex_ring(v)) {
    const auto& el = mesh.element(e).v;
    int k = 0;
    while (el[k] != v) ++k;
    Piece pc;
    for (int a = 0; a < 3; ++a) pc.p[a] = mesh.point(el[a]);
    pc.f = hat_on_triangle(mesh.point(el[k]), mesh.point(el[(k + 1) % 3]), mesh.point(el[(k + 2) % 3]));
    out.push_back(pc);
  }
  return out;
}

std::vector<Point> clip(const std::vector<Point>& poly, Point a, Point b) {
  // keep the left side of the directed line a->b
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = poly[i];
    const Point q = poly[(i + 1) % n];
    const double sp = cross(b - a, p - a);
    const double sq = cross(b - a, q - a);
    if (sp >= 0.0) out.push_back(p);
    if ((sp >= 0.0) != (sq >= 0.0)) {
      const double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

double overlap_integral(const Piece& pi, const Piece& pj, Point h) {
  // int over T_i cap (T_j - h) of f_i(x) f_j(x + h)
  std::vector<Point> poly = {pi.p[0], pi.p[1], pi.p[2]};
  if (cross(poly[1] - poly[0], poly[2] - poly[0]) < 0.0) std::swap(poly[1], poly[2]);
  Point q[3] = {pj.p[0] - h, pj.p[1] - h, pj.p[2] - h};
  if (cross(q[1] - q[0], q[2] - q[0]) < 0.0) std::swap(q[1], q[2]);
  for (int k = 0; k < 3 && poly.size() >= 3; ++k) poly = clip(poly, q[k], q[(k + 1) % 3]);
  if (poly.size() < 3) return 0.0;
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const Point a = poly[0], b = poly[k], c = poly[k + 1];
    const double area = 0.5 * cross(b - a, c - a);
    const Point mids[3] = {midpoint(a, b), midpoint(b, c), midpoint(c, a)};
    double sum = 0.0;
    for (const Point& m : mids) sum += pi.f(m) * pj.f(m + h);
    total += area * sum / 3.0;
  }
  return total;
}

double correlate(const std::vector<Piece>& a, const std::vector<Piece>& b, Point h) {
  double total = 0.0;
  for (const Piece& pi : a) {
    for (const Piece& pj : b) total += overlap_integral(pi, pj, h);
  }
  return total;
}

}  // namespace

double autocorrelation(const Mesh& mesh, int dof_i, int dof_j, double hx, double hy) {
  return correlate(pieces_of(mesh, dof_i), pieces_of(mesh, dof_j), {hx, hy});
}

double stiffness_entry(const Mesh& mesh, int dof_i, int dof_j, double s, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const auto pi = pieces_of(mesh, dof_i);
  const auto pj = pieces_of(mesh, dof_j);
  const double m = correlate(pi, pj, {0.0, 0.0});
  double rho_max = 0.0;
  double h_min = std::numeric_limits<double>::infinity();
  for (const Piece& a : pi) {
    for (int k = 0; k < 3; ++k) h_min = std::min(h_min, distance(a.p[k], a.p[(k + 1) % 3]));
    for (const Piece& b : pj) {
      for (const Point& x : a.p) {
        for (const Point& y : b.p) rho_max = std::max(rho_max, distance(x, y));
      }
    }
  }
  // Below rho0 no shifted vertex crosses an edge, so M - R_sym is a polynomial
  // c2 rho^2 + ... + c5 rho^5; it is fitted and integrated in closed form to
  // avoid cancellation.
  const double rho0 = 1e-2 * h_min;
  auto radial = [&](double theta) {
    const Point e{std::cos(theta), std::sin(theta)};
    auto defect = [&](double rho) {
      return m - 0.5 * (correlate(pi, pj, rho * e) + correlate(pi, pj, (-rho) * e));
    };
    Eigen::Matrix4d v;
    Eigen::Vector4d rhs;
    for (int r = 0; r < 4; ++r) {
      const double t = (r + 1) / 4.0;
      for (int k = 0; k < 4; ++k) v(r, k) = std::pow(t, k + 2);
      rhs[r] = defect(rho0 * t);
    }
    const Eigen::Vector4d c = v.fullPivLu().solve(rhs);
    double head = 0.0;
    for (int k = 0; k < 4; ++k) head += c[k] * std::pow(rho0, -2.0 * s) / (k + 2 - 2.0 * s);
    // rho = rho0 (rho_max/rho0)^t
    const double log_ratio = std::log(rho_max / rho0);
    auto g = [&](double t) {
      const double rho = rho0 * std::exp(t * log_ratio);
      return std::pow(rho, -2.0 * s) * defect(rho) * log_ratio;
    };
    return head + gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, 15, tol);
  };
  const double angular = gauss_kronrod<double, 15>::integrate(radial, 0.0, std::numbers::pi, 12, tol);
  const double tail = m * std::pow(rho_max, -2.0 * s) / (2.0 * s) * 2.0 * std::numbers::pi;
  return constant_Cds(2, s) * (2.0 * angular + tail);
}

}  // namespace fracbpx::oracle
