#include "fracbpx/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "fracbpx/errors.hpp"
#include "fracbpx/quadrature.hpp"
#include "fracbpx/special_functions.hpp"

namespace fracbpx {

namespace {

constexpr double kPi = std::numbers::pi;

// r2^expo for r2 > 0.
inline double power_of_square(double r2, double expo) { return std::exp(expo * std::log(r2)); }

// int_0^phi cos^{2s}(t) dt for |phi| < pi/2.
double cos_power_primitive(double phi, double s) {
  const double sn = std::sin(phi);
  const double v = 0.5 * boost::math::beta(0.5, s + 0.5, sn * sn);
  return phi < 0.0 ? -v : v;
}

double cos_power_integral(double phi_a, double phi_b, double s) {
  static const Rule1D gauss3 = gauss_legendre(3);
  if (phi_b - phi_a < 0.1 && std::max(std::abs(phi_a), std::abs(phi_b)) < 1.2) {
    double sum = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double c = std::cos(phi_a + (phi_b - phi_a) * gauss3.x[q]);
      sum += gauss3.w[q] * std::exp(s * std::log(c * c));
    }
    return sum * (phi_b - phi_a);
  }
  return cos_power_primitive(phi_b, s) - cos_power_primitive(phi_a, s);
}

void check_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("fractional order s must lie in (0,1)");
}

std::array<double, 3> barycentric_basis(double x1, double x2) { return {1.0 - x1 - x2, x1, x2}; }

template <std::size_t N>
void scatter(DenseSymMatrix& k, const std::array<int, N>& dofs, const std::array<std::array<double, N>, N>& local,
             double factor) {
  for (std::size_t a = 0; a < N; ++a) {
    if (dofs[a] < 0) continue;
    for (std::size_t b = 0; b < N; ++b) {
      if (dofs[b] < 0 || dofs[a] > dofs[b]) continue;
      k.add(dofs[a], dofs[b], factor * local[a][b]);
    }
  }
}

// Quadrature points of one rule mapped onto every element.
struct ElementRuleData {
  int np = 0;
  std::vector<double> px, py, w;  // w includes the element area
  std::vector<double> phi;        // 3 basis values per point
  std::vector<double> wphi;       // w * phi
  std::vector<double> sum_kernel; // accumulated int over far elements of k(x_a, y) dy

  void build(const Mesh& mesh, const TriangleRule& rule) {
    const int ne = mesh.num_elements();
    np = static_cast<int>(rule.w.size());
    const std::size_t total = static_cast<std::size_t>(ne) * np;
    px.resize(total);
    py.resize(total);
    w.resize(total);
    phi.resize(3 * total);
    wphi.resize(3 * total);
    sum_kernel.assign(total, 0.0);
    for (int e = 0; e < ne; ++e) {
      const auto& v = mesh.element(e).v;
      const Point a = mesh.point(v[0]);
      const Point b = mesh.point(v[1]);
      const Point c = mesh.point(v[2]);
      const double area = mesh.area(e);
      for (int q = 0; q < np; ++q) {
        const std::size_t i = static_cast<std::size_t>(e) * np + q;
        const auto lam = barycentric_basis(rule.x[q][0], rule.x[q][1]);
        px[i] = lam[0] * a.x + lam[1] * b.x + lam[2] * c.x;
        py[i] = lam[0] * a.y + lam[1] * b.y + lam[2] * c.y;
        w[i] = rule.w[q] * area;
        for (int k = 0; k < 3; ++k) {
          phi[3 * i + k] = lam[k];
          wphi[3 * i + k] = w[i] * lam[k];
        }
      }
    }
  }
};

// Accumulates far-field cross terms row by row, then flushes into the packed matrix.
class RowBuffer {
 public:
  RowBuffer(DenseSymMatrix& k, int capacity) : k_(k), n_(k.size()), capacity_(capacity), slot_of_(k.size(), -1) {
    data_.assign(static_cast<std::size_t>(capacity) * n_, 0.0);
  }

  double* row(int dof) {
    int slot = slot_of_[dof];
    if (slot < 0) {
      slot = static_cast<int>(dofs_.size());
      slot_of_[dof] = slot;
      dofs_.push_back(dof);
    }
    return data_.data() + static_cast<std::size_t>(slot) * n_;
  }

  void reserve(int count) {
    if (static_cast<int>(dofs_.size()) + count > capacity_) flush();
  }

  void flush() {
    for (std::size_t slot = 0; slot < dofs_.size(); ++slot) {
      const int d = dofs_[slot];
      double* r = data_.data() + slot * n_;
      double* upper = k_.row_upper(d);
      for (int j = d; j < n_; ++j) upper[j - d] += r[j];
      for (int j = 0; j < d; ++j) {
        if (r[j] != 0.0) k_.add(j, d, r[j]);
      }
      std::fill(r, r + n_, 0.0);
      slot_of_[d] = -1;
    }
    dofs_.clear();
  }

 private:
  DenseSymMatrix& k_;
  int n_;
  int capacity_;
  std::vector<int> slot_of_;
  std::vector<int> dofs_;
  std::vector<double> data_;
};

std::vector<Point> convex_boundary(const Mesh& mesh) {
  std::vector<Point> poly;
  for (int v : mesh.boundary_corners()) poly.push_back(mesh.point(v));
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(poly[(i + 1) % n] - poly[i], poly[(i + 2) % n] - poly[(i + 1) % n]) <= 0.0) {
      throw std::domain_error("integral-mode assembly requires a convex domain");
    }
  }
  return poly;
}

// int_T phi_k phi_l psi over one element. Elements touching the boundary use
// a rule graded toward the boundary vertex or edge, where psi blows up.
std::array<std::array<double, 3>, 3> complement_term(const Mesh& mesh, int e, const std::vector<Point>& polygon,
                                                     double s, int order) {
  std::array<std::array<double, 3>, 3> out{};
  const auto& v = mesh.element(e).v;
  const Point p[3] = {mesh.point(v[0]), mesh.point(v[1]), mesh.point(v[2])};
  const double area = mesh.area(e);

  int edge = -1;
  int corner = -1;
  for (int k = 0; k < 3; ++k) {
    if (mesh.neighbor(e, k) < 0) edge = k;
    if (mesh.vertex(v[k]).on_boundary && corner < 0) corner = k;
  }
  if (edge < 0 && corner < 0) {
    const TriangleRule rule = collapsed_gauss(order);
    for (std::size_t q = 0; q < rule.w.size(); ++q) {
      const auto lam = barycentric_basis(rule.x[q][0], rule.x[q][1]);
      const Point x = lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
      const double f = rule.w[q] * area * complement_kernel_integral(polygon, x, s);
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) out[k][l] += f * lam[k] * lam[l];
      }
    }
    return out;
  }

  // x = apex + rho ((1-sigma)(A - apex) + sigma (B - apex)); grade rho toward
  // the boundary edge (rho = 1) or the boundary vertex (rho = 0).
  const bool toward_edge = edge >= 0;
  const int apex = toward_edge ? edge : corner;
  const int ia = (apex + 1) % 3;
  const int ib = (apex + 2) % 3;
  const Rule1D g = gauss_legendre(order + 2);
  constexpr double grading = 3.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double u = g.x[i];
    double rho = 0.0;
    double drho = 0.0;
    if (toward_edge) {
      rho = 1.0 - std::pow(u, grading);
      drho = grading * std::pow(u, grading - 1.0);
    } else {
      rho = std::pow(u, grading);
      drho = grading * std::pow(u, grading - 1.0);
    }
    for (std::size_t j = 0; j < g.x.size(); ++j) {
      const double sigma = g.x[j];
      std::array<double, 3> lam{};
      lam[apex] = 1.0 - rho;
      lam[ia] = rho * (1.0 - sigma);
      lam[ib] = rho * sigma;
      const Point x = lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
      const double f = g.w[i] * g.w[j] * drho * rho * 2.0 * area * complement_kernel_integral(polygon, x, s);
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) out[k][l] += f * lam[k] * lam[l];
      }
    }
  }
  return out;
}

}  // namespace

double complement_kernel_integral(const std::vector<Point>& polygon, Point x, double s) {
  check_s(s);
  const std::size_t n = polygon.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    Point t = b - a;
    t = (1.0 / norm(t)) * t;
    const double d = cross(t, x - a);
    if (!(d > 0.0)) throw std::domain_error("complement_kernel_integral: point not inside the polygon");
    const double phi_a = std::atan2(dot(a - x, t), d);
    const double phi_b = std::atan2(dot(b - x, t), d);
    total += std::pow(d, -2.0 * s) * cos_power_integral(phi_a, phi_b, s);
  }
  return total / (2.0 * s);
}

std::array<std::array<double, 3>, 3> identical_pair_integral(Point a, Point b, Point c, double s, int order) {
  check_s(s);
  const Point j1 = b - a;
  const Point j2 = c - a;
  const double area = 0.5 * std::abs(cross(j1, j2));
  constexpr double g[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  const Rule1D rule = gauss_legendre(2 * order);
  const double arcs[4] = {0.0, 0.5 * kPi, 0.75 * kPi, kPi};
  std::array<std::array<double, 3>, 3> out{};
  for (int arc = 0; arc < 3; ++arc) {
    const double lo = arcs[arc];
    const double len = arcs[arc + 1] - lo;
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      const double th = lo + len * rule.x[q];
      const double e1 = std::cos(th);
      const double e2 = std::sin(th);
      const double nu = 0.5 * (std::abs(e1) + std::abs(e2) + std::abs(e1 + e2));
      const Point je = e1 * j1 + e2 * j2;
      const double f = len * rule.w[q] * power_of_square(dot(je, je), -1.0 - s) * std::pow(nu, 2.0 * s - 2.0);
      double ge[3];
      for (int k = 0; k < 3; ++k) ge[k] = g[k][0] * e1 + g[k][1] * e2;
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) out[k][l] += f * ge[k] * ge[l];
      }
    }
  }
  // The angular integrand is pi-periodic.
  const double scale = 2.0 * 4.0 * area * area / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s) * (4.0 - 2.0 * s));
  for (auto& row : out) {
    for (double& x : row) x *= scale;
  }
  return out;
}

std::array<std::array<double, 4>, 4> edge_pair_integral(Point p, Point q, Point r1, Point r2, double s, int order) {
  check_s(s);
  const double area1 = 0.5 * std::abs(cross(q - p, r1 - p));
  const double area2 = 0.5 * std::abs(cross(q - p, r2 - p));
  const Point u = q - p;
  const Point v1 = r1 - q;
  const Point v2 = r2 - q;
  // Coefficients of phi_k(x) - phi_k(y) in (z1, x2, y2).
  constexpr double c[4][3] = {{-1.0, 0.0, 0.0}, {1.0, -1.0, 1.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, -1.0}};
  const Rule1D g = gauss_legendre(order);
  std::array<std::array<double, 4>, 4> out{};
  for (int sign : {1, -1}) {
    for (int piece = 0; piece < 2; ++piece) {
      const double lo = 0.5 * piece;
      for (std::size_t iu = 0; iu < g.x.size(); ++iu) {
        const double main = lo + 0.5 * g.x[iu];
        for (std::size_t it = 0; it < g.x.size(); ++it) {
          const double other = (1.0 - main) * g.x[it];
          const double jac = 0.5 * (1.0 - main) * g.w[iu] * g.w[it];
          const double s2 = sign > 0 ? main : other;
          const double s3 = sign > 0 ? other : main;
          const double nu = std::max(main, 1.0 - main);
          const double s1 = sign * (1.0 - s2 - s3);
          const Point x = s1 * u + s2 * v1 - s3 * v2;
          const double f = jac * power_of_square(dot(x, x), -1.0 - s) * std::pow(nu, 2.0 * s - 3.0);
          double d[4];
          for (int k = 0; k < 4; ++k) d[k] = c[k][0] * s1 + c[k][1] * s2 + c[k][2] * s3;
          for (int k = 0; k < 4; ++k) {
            for (int l = 0; l < 4; ++l) out[k][l] += f * d[k] * d[l];
          }
        }
      }
    }
  }
  const double scale = 4.0 * area1 * area2 / ((3.0 - 2.0 * s) * (4.0 - 2.0 * s));
  for (auto& row : out) {
    for (double& x : row) x *= scale;
  }
  return out;
}

std::array<std::array<double, 5>, 5> vertex_pair_integral(Point p, Point e1, Point e2, Point f1, Point f2, double s,
                                                          int order) {
  check_s(s);
  const double area1 = 0.5 * std::abs(cross(e1 - p, e2 - p));
  const double area2 = 0.5 * std::abs(cross(f1 - p, f2 - p));
  const Rule1D g = gauss_legendre(order);
  std::array<std::array<double, 5>, 5> out{};
  for (std::size_t ia = 0; ia < g.x.size(); ++ia) {
    const double al = g.x[ia];
    const Point a = (1.0 - al) * (e1 - p) + al * (e2 - p);
    const double c[5] = {-1.0, 1.0 - al, al, 0.0, 0.0};
    for (std::size_t ib = 0; ib < g.x.size(); ++ib) {
      const double be = g.x[ib];
      const Point b = (1.0 - be) * (f1 - p) + be * (f2 - p);
      const double d[5] = {-1.0, 0.0, 0.0, 1.0 - be, be};
      for (std::size_t iw = 0; iw < g.x.size(); ++iw) {
        const double w = g.x[iw];
        const double wt = g.w[ia] * g.w[ib] * g.w[iw] * w;
        const Point x1 = a - w * b;
        const Point x2 = w * a - b;
        const double f1w = wt * power_of_square(dot(x1, x1), -1.0 - s);
        const double f2w = wt * power_of_square(dot(x2, x2), -1.0 - s);
        double d1[5], d2[5];
        for (int k = 0; k < 5; ++k) {
          d1[k] = c[k] - w * d[k];
          d2[k] = w * c[k] - d[k];
        }
        for (int k = 0; k < 5; ++k) {
          for (int l = 0; l < 5; ++l) out[k][l] += f1w * d1[k] * d1[l] + f2w * d2[k] * d2[l];
        }
      }
    }
  }
  const double scale = 4.0 * area1 * area2 / (4.0 - 2.0 * s);
  for (auto& row : out) {
    for (double& x : row) x *= scale;
  }
  return out;
}

DenseSymMatrix assemble_fractional_stiffness(const Mesh& mesh, double s, const QuadratureSpec& quad,
                                             OperatorMode mode, const AssemblyOptions& options) {
  check_s(s);
  if (quad.gauss_order < 1 || quad.singular_order < 1) throw std::invalid_argument("quadrature orders must be >= 1");
  const int n = mesh.num_dofs();
  if (static_cast<std::size_t>(n) > options.max_dofs) {
    throw ResourceError("dense stiffness with " + std::to_string(n) + " DOFs exceeds the budget of " +
                        std::to_string(options.max_dofs));
  }
  DenseSymMatrix k(n);
  if (n == 0) return k;
  const double cds = constant_Cds(2, s);
  const double expo = -1.0 - s;
  const int ne = mesh.num_elements();

  std::vector<std::array<int, 3>> dofs(ne);
  std::vector<double> cx(ne), cy(ne), diam(ne);
  std::vector<char> has_dof(ne, 0);
  for (int e = 0; e < ne; ++e) {
    for (int a = 0; a < 3; ++a) {
      dofs[e][a] = mesh.dof_of_vertex(mesh.element(e).v[a]);
      if (dofs[e][a] >= 0) has_dof[e] = 1;
    }
    const Point c = mesh.barycenter(e);
    cx[e] = c.x;
    cy[e] = c.y;
    diam[e] = mesh.diameter(e);
  }

  constexpr int kClasses = 4;
  ElementRuleData rules[kClasses];
  rules[0].build(mesh, collapsed_gauss(quad.gauss_order + 2));
  rules[1].build(mesh, collapsed_gauss(quad.gauss_order));
  rules[2].build(mesh, triangle_rule_degree4());
  rules[3].build(mesh, triangle_rule_degree2());

  RowBuffer buffer(k, 192);
  std::vector<int> touch_stamp(ne, -1);
  std::vector<double> col_sum;
  for (int e1 = 0; e1 < ne; ++e1) {
    for (int vid : mesh.element(e1).v) {
      for (int e2 : mesh.vertex_ring(vid)) touch_stamp[e2] = e1;
    }
    buffer.reserve(3);
    double* rows[3] = {nullptr, nullptr, nullptr};
    for (int a = 0; a < 3; ++a) {
      if (dofs[e1][a] >= 0) rows[a] = buffer.row(dofs[e1][a]);
    }
    for (int e2 = e1 + 1; e2 < ne; ++e2) {
      if (touch_stamp[e2] == e1) continue;
      if (!has_dof[e1] && !has_dof[e2]) continue;
      const double dist = std::hypot(cx[e1] - cx[e2], cy[e1] - cy[e2]);
      // Lattice meshes put ratios exactly on the thresholds; the margin keeps
      // the class independent of rounding in the coordinates.
      const double ratio = dist / std::max(diam[e1], diam[e2]) * (1.0 + 1e-9);
      const int cls = ratio < quad.close_ratio ? 0 : ratio < quad.near_ratio ? 1 : ratio < quad.far_ratio ? 2 : 3;
      ElementRuleData& r = rules[cls];
      const int np = r.np;
      const std::size_t o1 = static_cast<std::size_t>(e1) * np;
      const std::size_t o2 = static_cast<std::size_t>(e2) * np;
      const double* x2 = r.px.data() + o2;
      const double* y2 = r.py.data() + o2;
      const double* wp2 = r.wphi.data() + 3 * o2;
      col_sum.assign(np, 0.0);
      double cross_term[3][3] = {};
      for (int a = 0; a < np; ++a) {
        const double xa = r.px[o1 + a];
        const double ya = r.py[o1 + a];
        const double wa = r.w[o1 + a];
        double t0 = 0.0, t1 = 0.0, t2 = 0.0;
        for (int b = 0; b < np; ++b) {
          const double dx = xa - x2[b];
          const double dy = ya - y2[b];
          const double kv = power_of_square(dx * dx + dy * dy, expo);
          t0 += kv * wp2[3 * b];
          t1 += kv * wp2[3 * b + 1];
          t2 += kv * wp2[3 * b + 2];
          col_sum[b] += wa * kv;
        }
        r.sum_kernel[o1 + a] += t0 + t1 + t2;
        const double* wp1 = r.wphi.data() + 3 * (o1 + a);
        for (int i = 0; i < 3; ++i) {
          cross_term[i][0] += wp1[i] * t0;
          cross_term[i][1] += wp1[i] * t1;
          cross_term[i][2] += wp1[i] * t2;
        }
      }
      for (int b = 0; b < np; ++b) r.sum_kernel[o2 + b] += col_sum[b];
      for (int i = 0; i < 3; ++i) {
        if (!rows[i]) continue;
        for (int j = 0; j < 3; ++j) {
          const int dj = dofs[e2][j];
          if (dj >= 0) rows[i][dj] -= cds * cross_term[i][j];
        }
      }
    }
  }
  buffer.flush();

  for (int e = 0; e < ne; ++e) {
    if (!has_dof[e]) continue;
    std::array<std::array<double, 3>, 3> local{};
    for (auto& r : rules) {
      for (int a = 0; a < r.np; ++a) {
        const std::size_t i = static_cast<std::size_t>(e) * r.np + a;
        const double f = r.w[i] * r.sum_kernel[i];
        for (int p = 0; p < 3; ++p) {
          for (int q = 0; q < 3; ++q) local[p][q] += f * r.phi[3 * i + p] * r.phi[3 * i + q];
        }
      }
    }
    scatter(k, dofs[e], local, cds);
  }

  if (mode == OperatorMode::Integral) {
    const std::vector<Point> polygon = convex_boundary(mesh);
    for (int e = 0; e < ne; ++e) {
      if (!has_dof[e]) continue;
      scatter(k, dofs[e], complement_term(mesh, e, polygon, s, quad.gauss_order + 2), cds);
    }
  }

  // Touching pairs.
  std::fill(touch_stamp.begin(), touch_stamp.end(), -1);
  for (int e1 = 0; e1 < ne; ++e1) {
    const auto& v1 = mesh.element(e1).v;
    if (has_dof[e1]) {
      scatter(k, dofs[e1],
              identical_pair_integral(mesh.point(v1[0]), mesh.point(v1[1]), mesh.point(v1[2]), s, quad.singular_order),
              0.5 * cds);
    }
    for (int vid : v1) {
      for (int e2 : mesh.vertex_ring(vid)) {
        if (e2 <= e1 || touch_stamp[e2] == e1) continue;
        touch_stamp[e2] = e1;
        if (!has_dof[e1] && !has_dof[e2]) continue;
        const auto& v2 = mesh.element(e2).v;
        std::array<bool, 3> shared1{}, shared2{};
        int count = 0;
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) {
            if (v1[a] == v2[b]) {
              shared1[a] = shared2[b] = true;
              ++count;
            }
          }
        }
        if (count == 2) {
          int r1 = 0, r2 = 0;
          while (shared1[r1]) ++r1;
          while (shared2[r2]) ++r2;
          const int p = v1[(r1 + 1) % 3];
          const int q = v1[(r1 + 2) % 3];
          const std::array<int, 4> ids = {p, q, v1[r1], v2[r2]};
          std::array<int, 4> d{};
          for (int a = 0; a < 4; ++a) d[a] = mesh.dof_of_vertex(ids[a]);
          scatter(k, d,
                  edge_pair_integral(mesh.point(p), mesh.point(q), mesh.point(v1[r1]), mesh.point(v2[r2]), s,
                                     quad.singular_order),
                  cds);
        } else if (count == 1) {
          int a0 = 0, b0 = 0;
          while (!shared1[a0]) ++a0;
          while (!shared2[b0]) ++b0;
          const std::array<int, 5> ids = {v1[a0], v1[(a0 + 1) % 3], v1[(a0 + 2) % 3], v2[(b0 + 1) % 3],
                                          v2[(b0 + 2) % 3]};
          std::array<int, 5> d{};
          for (int a = 0; a < 5; ++a) d[a] = mesh.dof_of_vertex(ids[a]);
          scatter(k, d,
                  vertex_pair_integral(mesh.point(ids[0]), mesh.point(ids[1]), mesh.point(ids[2]),
                                       mesh.point(ids[3]), mesh.point(ids[4]), s, quad.singular_order),
                  cds);
        } else {
          throw InvalidMeshError("duplicate elements");
        }
      }
    }
  }
  return k;
}

namespace {

std::vector<Triplet> mass_triplets(const Mesh& mesh, bool interior_only) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(mesh.num_elements()) * 9);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double area = mesh.area(e);
    const auto& v = mesh.element(e).v;
    for (int a = 0; a < 3; ++a) {
      const int i = interior_only ? mesh.dof_of_vertex(v[a]) : v[a];
      if (i < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int j = interior_only ? mesh.dof_of_vertex(v[b]) : v[b];
        if (j < 0) continue;
        t.emplace_back(i, j, area * (a == b ? 2.0 : 1.0) / 12.0);
      }
    }
  }
  return t;
}

}  // namespace

SparseMatrix assemble_mass(const Mesh& mesh) {
  return sparse_from_triplets(mesh.num_dofs(), mesh.num_dofs(), mass_triplets(mesh, true));
}

SparseMatrix assemble_mass_all_vertices(const Mesh& mesh) {
  return sparse_from_triplets(mesh.num_vertices(), mesh.num_vertices(), mass_triplets(mesh, false));
}

SparseMatrix assemble_h1_stiffness(const Mesh& mesh) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(mesh.num_elements()) * 9);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.element(e).v;
    const double area = mesh.area(e);
    // grad phi_a = rot90(p_{a+2} - p_{a+1}) / (2|T|)
    Point g[3];
    for (int a = 0; a < 3; ++a) {
      const Point edge = mesh.point(v[(a + 2) % 3]) - mesh.point(v[(a + 1) % 3]);
      g[a] = (0.5 / area) * Point{-edge.y, edge.x};
    }
    for (int a = 0; a < 3; ++a) {
      const int i = mesh.dof_of_vertex(v[a]);
      if (i < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int j = mesh.dof_of_vertex(v[b]);
        if (j >= 0) t.emplace_back(i, j, area * dot(g[a], g[b]));
      }
    }
  }
  return sparse_from_triplets(mesh.num_dofs(), mesh.num_dofs(), t);
}

Eigen::VectorXd assemble_load(const Mesh& mesh, double f) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_dofs());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double share = f * mesh.area(e) / 3.0;
    for (int vid : mesh.element(e).v) {
      const int i = mesh.dof_of_vertex(vid);
      if (i >= 0) b[i] += share;
    }
  }
  return b;
}

Eigen::VectorXd assemble_load_all_vertices(const Mesh& mesh, double f) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int vid : mesh.element(e).v) b[vid] += f * mesh.area(e) / 3.0;
  }
  return b;
}

}  // namespace fracbpx
