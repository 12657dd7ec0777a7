#include "fracbpx/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "fracbpx/errors.hpp"
#include "fracbpx/exact.hpp"
#include "fracbpx/hierarchy.hpp"
#include "fracbpx/precond.hpp"
#include "fracbpx/solvers.hpp"

namespace fracbpx {

namespace {

constexpr double kUniformGammaTilde = 0.5;
const double kGradedGammaTilde = std::numbers::sqrt2 / 2.0;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Mesh initial_mesh(const std::string& domain) {
  if (domain == "square") return init_square();
  if (domain == "disk") return init_hexagon_disk();
  throw std::invalid_argument("unknown domain: " + domain);
}

struct Problem {
  int stage = 0;
  std::shared_ptr<const UniformHierarchy> uniform;
  std::shared_ptr<const GradedHierarchy> graded;
  const Mesh* mesh = nullptr;
  DenseSymMatrix k;
  Eigen::VectorXd b;
  double s = 0.0;
};

Problem uniform_problem(const Mesh& t0, int level, double s, const ExperimentSpec& spec) {
  Problem p;
  p.stage = level;
  p.s = s;
  p.uniform = std::make_shared<const UniformHierarchy>(build_uniform_hierarchy(t0, level, 1.0, spec.max_dofs));
  p.mesh = &p.uniform->finest();
  p.k = assemble_fractional_stiffness(*p.mesh, s, spec.quad, OperatorMode::Integral, {spec.max_dofs});
  p.b = assemble_load(*p.mesh, 1.0);
  return p;
}

Problem graded_problem(const Mesh& t0, const GradedFamilyStage& st, int stage, double s, const ExperimentSpec& spec) {
  Problem p;
  p.stage = stage;
  p.s = s;
  if (static_cast<std::size_t>(st.mesh.num_dofs()) > spec.max_dofs) {
    throw ResourceError("graded stage " + std::to_string(stage) + " has " + std::to_string(st.mesh.num_dofs()) +
                        " DOFs, above the budget");
  }
  p.graded = std::make_shared<const GradedHierarchy>(build_graded_hierarchy(t0, st.history, st.mesh));
  p.mesh = &p.graded->final_mesh;
  p.k = assemble_fractional_stiffness(*p.mesh, s, spec.quad, OperatorMode::Integral, {spec.max_dofs});
  p.b = assemble_load(*p.mesh, 1.0);
  return p;
}

double default_gamma(const Problem& p, const ExperimentSpec& spec) {
  if (spec.gamma_tilde) return *spec.gamma_tilde;
  return p.graded ? kGradedGammaTilde : kUniformGammaTilde;
}

Preconditioner make_preconditioner(const Problem& p, const std::string& kind, double gamma_tilde) {
  if (kind == "none") return identity_preconditioner(p.k.size());
  if (kind == "diag") return diag_scaling(p.k);
  if (kind == "bpx") {
    return p.graded ? bpx_graded(p.graded, p.s, gamma_tilde) : bpx_uniform(p.uniform, p.s, gamma_tilde);
  }
  throw std::invalid_argument("unknown preconditioner: " + kind);
}

LanczosOptions lanczos_options(const ExperimentSpec& spec) {
  LanczosOptions o;
  o.seed = spec.seed;
  o.tol = 1e-6;
  return o;
}

// GS/CG/PCG rows for one assembled problem.
void solve_rows(const std::string& experiment, const Problem& p, const ExperimentSpec& spec, const RowSink& sink) {
  SolverOptions opt;
  opt.tol = spec.tol;
  auto base = [&](const std::string& solver) {
    ResultRow r;
    r.experiment = experiment;
    r.stage = p.stage;
    r.dofs = p.k.size();
    r.s = p.s;
    r.solver = solver;
    return r;
  };
  auto fill = [&](ResultRow& r, const SolveReport& rep) {
    r.iterations = rep.iterations;
    r.residual = rep.relative_residual;
    if (spec.timing) r.wall_time = rep.wall_time;
  };
  for (const std::string& solver : spec.solvers) {
    if (solver == "gs") {
      ResultRow r = base("gs");
      r.precond = "none";
      fill(r, gauss_seidel(p.k, p.b, opt).report);
      sink(r);
    } else if (solver == "cg") {
      ResultRow r = base("cg");
      r.precond = "none";
      fill(r, cg(p.k, p.b, opt).report);
      if (spec.cond) r.cond = lanczos_cond(p.k, nullptr, lanczos_options(spec)).cond;
      sink(r);
    } else if (solver == "pcg") {
      std::vector<double> gammas = {default_gamma(p, spec)};
      if (spec.compare_uncorrected && spec.precond == "bpx" && gammas[0] != 0.0) gammas.push_back(0.0);
      for (double g : gammas) {
        const Preconditioner pc = make_preconditioner(p, spec.precond, g);
        ResultRow r = base("pcg");
        r.precond = pc.descriptor().kind;
        if (spec.precond == "bpx") r.gamma_tilde = g;
        fill(r, pcg(p.k, pc, p.b, opt).report);
        if (spec.cond) r.cond = lanczos_cond(p.k, &pc, lanczos_options(spec)).cond;
        sink(r);
      }
    } else {
      throw std::invalid_argument("unknown solver: " + solver);
    }
  }
}

std::vector<std::vector<int>> element_patches(const Mesh& mesh) {
  std::vector<std::vector<int>> patches(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    std::set<int> patch;
    for (int v : mesh.element(e).v) {
      for (int t : mesh.vertex_ring(v)) patch.insert(t);
    }
    patches[e].assign(patch.begin(), patch.end());
  }
  return patches;
}

// sum over elements of h_tau^{-2s} ||v||^2 on the element patch.
double patch_weighted_l2(const Mesh& mesh, const std::vector<std::vector<int>>& patches, const Eigen::VectorXd& v,
                         double s) {
  std::vector<double> local(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double vals[3];
    for (int k = 0; k < 3; ++k) {
      const int d = mesh.dof_of_vertex(mesh.element(e).v[k]);
      vals[k] = d >= 0 ? v[d] : 0.0;
    }
    const double sum = vals[0] + vals[1] + vals[2];
    const double sq = vals[0] * vals[0] + vals[1] * vals[1] + vals[2] * vals[2];
    local[e] = mesh.area(e) / 12.0 * (sq + sum * sum);
  }
  double total = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double patch = 0.0;
    for (int t : patches[e]) patch += local[t];
    total += std::pow(mesh.diameter(e), -2.0 * s) * patch;
  }
  return total;
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

ResultRow metric_row(const Problem& p, const std::string& metric, double value) {
  ResultRow r;
  r.experiment = "verify";
  r.stage = p.stage;
  r.dofs = p.k.size();
  r.s = p.s;
  r.metric = metric;
  r.value = value;
  return r;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::TableUniform: return "table-uniform";
    case ExperimentKind::TableGraded: return "table-graded";
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::Verify: return "verify";
    case ExperimentKind::Solve: return "solve";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (ExperimentKind k : {ExperimentKind::TableUniform, ExperimentKind::TableGraded, ExperimentKind::Convergence,
                           ExperimentKind::Verify, ExperimentKind::Solve}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment: " + name);
}

void validate(const ExperimentSpec& spec) {
  if (spec.s_values.empty()) throw std::invalid_argument("at least one value of s is required");
  for (double s : spec.s_values) {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("s must lie in (0,1)");
  }
  if (spec.gamma_tilde && !(*spec.gamma_tilde >= 0.0 && *spec.gamma_tilde < 1.0)) {
    throw std::domain_error("gamma_tilde must lie in [0,1)");
  }
  if (spec.min_level < 0 || spec.levels < spec.min_level) throw std::invalid_argument("invalid level range");
  if (!(spec.theta > 1.0) || !(spec.mu >= 1.0)) throw std::domain_error("grading needs theta > 1 and mu >= 1");
  if (spec.quad.gauss_order < 1 || spec.quad.singular_order < 1) throw std::invalid_argument("invalid quadrature");
  if (!(spec.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (spec.graded_levels < 0) throw std::invalid_argument("invalid graded level count");
  if (spec.samples < 1) throw std::invalid_argument("need at least one sample");
  for (const std::string& s : spec.solvers) {
    if (s != "gs" && s != "cg" && s != "pcg") throw std::invalid_argument("unknown solver: " + s);
  }
  if (spec.precond != "none" && spec.precond != "diag" && spec.precond != "bpx") {
    throw std::invalid_argument("unknown preconditioner: " + spec.precond);
  }
  if (spec.domain != "square" && spec.domain != "disk") throw std::invalid_argument("unknown domain: " + spec.domain);
}

std::vector<GradedFamilyStage> graded_family(const Mesh& t0, int stages, double theta, double mu) {
  std::vector<GradedFamilyStage> out;
  Mesh cur = t0;
  BisectionHistory history;
  for (int k = 1; k <= stages; ++k) {
    cur = graded_stage(cur, theta, mu, history);
    out.push_back({cur, history});
  }
  return out;
}

void run_table_uniform(const ExperimentSpec& spec, const RowSink& sink) {
  validate(spec);
  const Mesh t0 = init_square();
  for (int level = spec.min_level; level <= spec.levels; ++level) {
    for (double s : spec.s_values) solve_rows("table-uniform", uniform_problem(t0, level, s, spec), spec, sink);
  }
}

void run_table_graded(const ExperimentSpec& spec, const RowSink& sink) {
  validate(spec);
  const Mesh t0 = init_square();
  const std::vector<GradedFamilyStage> family = graded_family(t0, spec.levels, spec.theta, spec.mu);
  for (int stage = spec.min_level; stage <= spec.levels; ++stage) {
    if (stage == 0) continue;
    for (double s : spec.s_values) {
      solve_rows("table-graded", graded_problem(t0, family[stage - 1], stage, s, spec), spec, sink);
    }
  }
}

void run_convergence(const ExperimentSpec& spec, const RowSink& sink) {
  validate(spec);
  const Mesh t0 = init_hexagon_disk();
  SolverOptions opt;
  opt.tol = std::min(spec.tol, 1e-10);
  for (double s : spec.s_values) {
    const double exact = disk_exact_energy_squared(s);
    const int graded_levels = spec.graded_levels > 0 ? spec.graded_levels : spec.levels;
    const std::vector<GradedFamilyStage> family = graded_family(t0, graded_levels, spec.theta, spec.mu);
    for (int graded = 0; graded < 2; ++graded) {
      const std::string name = graded ? "convergence-graded" : "convergence-uniform";
      const int last = graded ? graded_levels : spec.levels;
      std::vector<double> hs, errs;
      for (int level = std::max(spec.min_level, 1); level <= last; ++level) {
        const Problem p = graded ? graded_problem(t0, family[level - 1], level, s, spec)
                                 : uniform_problem(t0, level, s, spec);
        const Preconditioner pc = make_preconditioner(p, "bpx", default_gamma(p, spec));
        const SolveResult res = pcg(p.k, pc, p.b, opt);
        ResultRow r;
        r.experiment = name;
        r.stage = level;
        r.dofs = p.k.size();
        r.s = s;
        r.gamma_tilde = default_gamma(p, spec);
        r.solver = "pcg";
        r.precond = pc.descriptor().kind;
        r.iterations = res.report.iterations;
        r.residual = res.report.relative_residual;
        r.energy_error = galerkin_energy_error(exact, p.b, res.x);
        if (spec.timing) r.wall_time = res.report.wall_time;
        sink(r);
        hs.push_back(1.0 / std::sqrt(static_cast<double>(p.k.size())));
        errs.push_back(*r.energy_error);
      }
      if (hs.size() >= 2) {
        ResultRow r;
        r.experiment = name;
        r.stage = last;
        r.dofs = 0;
        r.s = s;
        r.metric = "rate";
        r.value = loglog_slope(hs, errs);
        sink(r);
        if (hs.size() >= 3) {
          // Small meshes are pre-asymptotic; fit the last three stages alone.
          r.metric = "rate-last3";
          r.value = loglog_slope({hs.end() - 3, hs.end()}, {errs.end() - 3, errs.end()});
          sink(r);
        }
      }
    }
  }
}

void run_verify(const ExperimentSpec& spec, const RowSink& sink) {
  validate(spec);
  const Mesh t0 = init_square();
  const double gamma = 0.5;  // mesh-size ratio of uniform refinement
  for (int level = std::max(spec.min_level, 1); level <= spec.levels; ++level) {
    for (double s : spec.s_values) {
      const Problem p = uniform_problem(t0, level, s, spec);
      const UniformHierarchy& hier = *p.uniform;
      const int n = p.k.size();
      std::mt19937_64 rng(spec.seed + 1000003ULL * level);

      // Norm equivalence: sum_k h_k^{-2s} ||(Q_k - Q_{k-1}) v||^2 / |v|_s^2.
      const SparseMatrix m = assemble_mass(*p.mesh);
      std::vector<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> chol(level + 1);
      for (int k = 0; k <= level; ++k) chol[k].compute(Eigen::SparseMatrix<double>(assemble_mass(hier.meshes[k])));
      double ne_min = INFINITY, ne_max = 0.0;
      for (int i = 0; i < spec.samples; ++i) {
        // Cycle through the levels so smooth as well as oscillatory v are sampled.
        const int from = i % (level + 1);
        const Eigen::VectorXd v = hier.to_finest[from] * random_vector(rng, hier.meshes[from].num_dofs());
        const Eigen::VectorXd mv = m * v;
        Eigen::VectorXd previous = Eigen::VectorXd::Zero(n);
        double sum = 0.0;
        for (int k = 0; k <= level; ++k) {
          const Eigen::VectorXd qk = hier.to_finest[k] * chol[k].solve(Eigen::VectorXd(hier.to_finest[k].transpose() * mv));
          const Eigen::VectorXd slice = qk - previous;
          sum += std::pow(hier.h[k], -2.0 * s) * slice.dot(m * slice);
          previous = qk;
        }
        const double ratio = sum / v.dot(p.k * v);
        ne_min = std::min(ne_min, ratio);
        ne_max = std::max(ne_max, ratio);
      }
      sink(metric_row(p, "norm-equivalence-min", ne_min));
      sink(metric_row(p, "norm-equivalence-max", ne_max));

      // Local inverse inequality.
      const std::vector<std::vector<int>> patches = element_patches(*p.mesh);
      double inv_max = 0.0;
      for (int i = 0; i < spec.samples; ++i) {
        const Eigen::VectorXd v = random_vector(rng, n);
        inv_max = std::max(inv_max, std::sqrt(v.dot(p.k * v) / patch_weighted_l2(*p.mesh, patches, v, s)));
      }
      sink(metric_row(p, "inverse-inequality-max", inv_max));

      // Strengthened Cauchy-Schwarz between levels k <= l.
      double scs_max = 0.0;
      for (int i = 0; i < spec.samples; ++i) {
        for (int k = 0; k <= level; ++k) {
          for (int l = k; l <= level; ++l) {
            const Eigen::VectorXd vk = hier.to_finest[k] * random_vector(rng, hier.meshes[k].num_dofs());
            const Eigen::VectorXd vl = hier.to_finest[l] * random_vector(rng, hier.meshes[l].num_dofs());
            const Eigen::VectorXd kvl = p.k * vl;
            const double denom = std::pow(gamma, s * (l - k)) * std::pow(hier.h[l], -s) *
                                 std::sqrt(vk.dot(p.k * vk)) * std::sqrt(vl.dot(m * vl));
            scs_max = std::max(scs_max, std::abs(vk.dot(kvl)) / denom);
          }
        }
      }
      sink(metric_row(p, "scs-max", scs_max));

      // Galerkin consistency of the coarser level.
      {
        const SparseMatrix& ik = hier.to_finest[level - 1];
        const Eigen::MatrixXd kf = p.k.to_dense();
        const Eigen::MatrixXd galerkin = Eigen::MatrixXd(ik.transpose()) * kf * Eigen::MatrixXd(ik);
        const DenseSymMatrix direct = assemble_fractional_stiffness(hier.meshes[level - 1], s, spec.quad,
                                                                    OperatorMode::Integral, {spec.max_dofs});
        const Eigen::MatrixXd kd = direct.to_dense();
        sink(metric_row(p, "galerkin-consistency", (galerkin - kd).norm() / kd.norm()));
      }

      // Spectral fractional Laplacian against the same preconditioner.
      if (n <= 1000) {
        const Eigen::MatrixXd k1 = Eigen::MatrixXd(assemble_h1_stiffness(*p.mesh));
        const Eigen::MatrixXd md = Eigen::MatrixXd(m);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(k1, md);
        if (ges.info() != Eigen::Success) {
          sink(metric_row(p, "spectral-eigensolver-failed", 1.0));
        } else {
          const Eigen::MatrixXd mphi = md * ges.eigenvectors();
          const Eigen::VectorXd lam = ges.eigenvalues().array().pow(s);
          const Eigen::MatrixXd aspec = mphi * lam.asDiagonal() * mphi.transpose();
          const Preconditioner pc = make_preconditioner(p, "bpx", default_gamma(p, spec));
          const MatVec op = [&aspec](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = aspec * x; };
          sink(metric_row(p, "cond-spectral-pa", lanczos_cond(op, &pc, n, lanczos_options(spec)).cond));
          sink(metric_row(p, "cond-pk", lanczos_cond(p.k, &pc, lanczos_options(spec)).cond));
        }
      }
    }
  }
}

void run_solve(const ExperimentSpec& spec, const RowSink& sink) {
  validate(spec);
  const Mesh t0 = initial_mesh(spec.domain);
  for (double s : spec.s_values) {
    Problem p;
    if (spec.graded) {
      const std::vector<GradedFamilyStage> family = graded_family(t0, spec.levels, spec.theta, spec.mu);
      p = graded_problem(t0, family.back(), spec.levels, s, spec);
    } else {
      p = uniform_problem(t0, spec.levels, s, spec);
    }
    std::vector<ResultRow> rows;
    solve_rows("solve", p, spec, [&](const ResultRow& r) { rows.push_back(r); });
    for (ResultRow& r : rows) {
      if (spec.domain == "disk") {
        // Re-solve tightly for the energy error of the discrete solution.
        const Preconditioner pc = make_preconditioner(p, "bpx", default_gamma(p, spec));
        SolverOptions opt;
        opt.tol = 1e-10;
        r.energy_error = galerkin_energy_error(disk_exact_energy_squared(s), p.b, pcg(p.k, pc, p.b, opt).x);
      }
      sink(r);
    }
  }
}

void run_experiment(const ExperimentSpec& spec, const RowSink& sink) {
  switch (spec.kind) {
    case ExperimentKind::TableUniform: return run_table_uniform(spec, sink);
    case ExperimentKind::TableGraded: return run_table_graded(spec, sink);
    case ExperimentKind::Convergence: return run_convergence(spec, sink);
    case ExperimentKind::Verify: return run_verify(spec, sink);
    case ExperimentKind::Solve: return run_solve(spec, sink);
  }
}

std::string csv_header() {
  return "experiment,stage,dofs,s,gamma_tilde,solver,precond,iterations,residual,cond,energy_error,wall_time,metric,"
         "value";
}

std::string format_row(const ResultRow& r, bool timing) {
  std::ostringstream o;
  auto opt = [&](const std::optional<double>& v) {
    if (v) o << fmt(*v);
  };
  o << r.experiment << ',' << r.stage << ',' << r.dofs << ',' << fmt(r.s) << ',';
  opt(r.gamma_tilde);
  o << ',' << r.solver << ',' << r.precond << ',';
  if (r.iterations) o << *r.iterations;
  o << ',';
  opt(r.residual);
  o << ',';
  opt(r.cond);
  o << ',';
  opt(r.energy_error);
  o << ',';
  if (timing) opt(r.wall_time);
  o << ',' << r.metric << ',';
  opt(r.value);
  return o.str();
}

CsvWriter::CsvWriter(std::ostream& out, const ExperimentSpec& spec) : out_(out), timing_(spec.timing) {
  std::string s_list;
  for (std::size_t i = 0; i < spec.s_values.size(); ++i) s_list += (i ? ";" : "") + fmt(spec.s_values[i]);
  std::string solvers;
  for (std::size_t i = 0; i < spec.solvers.size(); ++i) solvers += (i ? ";" : "") + spec.solvers[i];
  out_ << "# experiment=" << to_string(spec.kind) << '\n'
       << "# s=" << s_list << '\n'
       << "# gamma_tilde=" << (spec.gamma_tilde ? fmt(*spec.gamma_tilde) : std::string("default")) << '\n'
       << "# levels=" << spec.min_level << ".." << spec.levels << '\n'
       << "# theta=" << fmt(spec.theta) << '\n'
       << "# mu=" << fmt(spec.mu) << '\n'
       << "# quad=" << spec.quad.gauss_order << ',' << spec.quad.singular_order << '\n'
       << "# solvers=" << solvers << '\n'
       << "# precond=" << spec.precond << '\n'
       << "# tol=" << fmt(spec.tol) << '\n'
       << "# seed=" << spec.seed << '\n'
       << "# max_dofs=" << spec.max_dofs << '\n'
       << csv_header() << '\n';
  out_.flush();
}

void CsvWriter::write(const ResultRow& row) {
  out_ << format_row(row, timing_) << '\n';
  out_.flush();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::domain_error("loglog_slope: values must be positive");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::domain_error("loglog_slope: x values coincide");
  return sxy / sxx;
}

}  // namespace fracbpx
