#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "fracbpx/bench.hpp"
#include "fracbpx/exact.hpp"

using namespace fracbpx;

namespace {

std::vector<ResultRow> collect(const ExperimentSpec& spec) {
  std::vector<ResultRow> rows;
  run_experiment(spec, [&](const ResultRow& r) { rows.push_back(r); });
  return rows;
}

std::string csv_of(const ExperimentSpec& spec) {
  std::ostringstream out;
  CsvWriter w(out, spec);
  run_experiment(spec, [&](const ResultRow& r) { w.write(r); });
  return out.str();
}

ExperimentSpec small_uniform() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::TableUniform;
  spec.s_values = {0.5};
  spec.min_level = 1;
  spec.levels = 2;
  return spec;
}

}  // namespace

TEST(ExactSolution, ConstantFromGammaFunction) {
  for (double s : {0.1, 0.25, 0.5, 0.9}) {
    for (int d : {1, 2, 3}) {
      const double ref = std::tgamma(d / 2.0) / (std::pow(4.0, s) * std::tgamma(1.0 + s) * std::tgamma(d / 2.0 + s));
      EXPECT_NEAR(disk_solution_constant(d, s), ref, 1e-14 * ref);
    }
  }
  EXPECT_NEAR(disk_exact_solution({0.0, 0.0}, 0.5), 2.0 / std::numbers::pi, 4e-15);
  EXPECT_NEAR(disk_exact_solution({0.6, 0.0}, 0.5), 2.0 / std::numbers::pi * 0.8, 4e-15);
  EXPECT_EQ(disk_exact_solution({1.0, 0.5}, 0.5), 0.0);
}

TEST(ExactSolution, EnergyEqualsIntegralOfSolution) {
  for (double s : {0.1, 0.5, 0.9}) {
    auto f = [s](double r) { return 2.0 * std::numbers::pi * r * disk_exact_solution({r, 0.0}, s); };
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double ref = integrator.integrate(f, 0.0, 1.0);
    EXPECT_NEAR(disk_exact_energy_squared(s), ref, 1e-10) << "s=" << s;
  }
}

TEST(ExactSolution, GalerkinErrorClamps) {
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(2, 1.0);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(2, 0.5);
  EXPECT_NEAR(galerkin_energy_error(2.0, b, u), 1.0, 1e-15);
  EXPECT_EQ(galerkin_energy_error(0.5, b, u), 0.0);
}

TEST(Bench, LoglogSlope) {
  std::vector<double> x, y;
  for (int k = 1; k <= 5; ++k) {
    x.push_back(std::pow(2.0, k));
    y.push_back(3.0 * std::pow(2.0, -0.75 * k));
  }
  EXPECT_NEAR(loglog_slope(x, y), -0.75, 1e-14);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), std::invalid_argument);
}

TEST(Bench, ValidateRejectsBadSpecs) {
  ExperimentSpec ok = small_uniform();
  EXPECT_NO_THROW(validate(ok));
  auto bad = [&](auto mutate) {
    ExperimentSpec s = ok;
    mutate(s);
    return s;
  };
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.s_values = {}; })), std::invalid_argument);
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.s_values = {1.0}; })), std::domain_error);
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.gamma_tilde = 1.0; })), std::domain_error);
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.levels = 0; })), std::invalid_argument);
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.theta = 1.0; })), std::domain_error);
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.solvers = {"jacobi"}; })), std::invalid_argument);
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.precond = "ilu"; })), std::invalid_argument);
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.domain = "annulus"; })), std::invalid_argument);
  EXPECT_THROW(validate(bad([](ExperimentSpec& s) { s.tol = 0.0; })), std::invalid_argument);
  EXPECT_EQ(parse_experiment_kind(to_string(ExperimentKind::Verify)), ExperimentKind::Verify);
  EXPECT_THROW(parse_experiment_kind("table-9"), std::invalid_argument);
}

TEST(Bench, UniformTableRows) {
  const std::vector<ResultRow> rows = collect(small_uniform());
  ASSERT_EQ(rows.size(), 6u);
  std::map<std::string, int> first;
  for (const ResultRow& r : rows) {
    EXPECT_EQ(r.s, 0.5);
    ASSERT_TRUE(r.iterations.has_value());
    ASSERT_TRUE(r.residual.has_value());
    EXPECT_LE(*r.residual, 1e-6);
    EXPECT_FALSE(r.wall_time.has_value());
    if (r.stage == 1) first[r.solver] = *r.iterations;
    EXPECT_EQ(r.dofs, r.stage == 1 ? 9 : 49);
    EXPECT_EQ(r.precond, r.solver == "pcg" ? "bpx-uniform" : "none");
  }
  EXPECT_EQ(first["gs"], 8);
  EXPECT_EQ(first["cg"], 4);
  EXPECT_EQ(first["pcg"], 4);
}

TEST(Bench, CsvIsDeterministic) {
  ExperimentSpec spec = small_uniform();
  spec.cond = true;
  spec.compare_uncorrected = true;
  const std::string a = csv_of(spec);
  const std::string b = csv_of(spec);
  EXPECT_EQ(a, b);
  const std::string header_line = csv_header();
  const auto columns = std::count(header_line.begin(), header_line.end(), ',');
  std::istringstream in(a);
  std::string line;
  int comments = 0, data = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      ++comments;
      EXPECT_NE(line.find('='), std::string::npos);
    } else if (!header) {
      EXPECT_EQ(line, header_line);
      header = true;
    } else {
      ++data;
      EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns);
    }
  }
  EXPECT_GE(comments, 10);
  EXPECT_EQ(data, 8);
  EXPECT_NE(a.find("# seed=1"), std::string::npos);
}

TEST(Bench, GradedFamilySizes) {
  const std::vector<GradedFamilyStage> fam = graded_family(init_square(), 3, 4.0, 2.0);
  ASSERT_EQ(fam.size(), 3u);
  const int expected[] = {5, 21, 73};
  for (std::size_t k = 0; k < fam.size(); ++k) {
    EXPECT_EQ(fam[k].mesh.num_dofs(), expected[k]);
    EXPECT_EQ(fam[k].mesh.num_vertices(), 9 + static_cast<int>(fam[k].history.size()));
  }
}

TEST(Bench, ConvergenceErrorsDecrease) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Convergence;
  spec.s_values = {0.5};
  spec.min_level = 1;
  spec.levels = 3;
  spec.graded_levels = 3;
  std::vector<double> uniform;
  int rates = 0;
  for (const ResultRow& r : collect(spec)) {
    if (r.metric == "rate-last3") {
      ASSERT_TRUE(r.value.has_value());
    } else if (r.metric == "rate") {
      ++rates;
      ASSERT_TRUE(r.value.has_value());
      EXPECT_GT(*r.value, 0.2);
    } else if (r.experiment == "convergence-uniform") {
      ASSERT_TRUE(r.energy_error.has_value());
      uniform.push_back(*r.energy_error);
    }
  }
  EXPECT_EQ(rates, 2);
  ASSERT_EQ(uniform.size(), 3u);
  EXPECT_GT(uniform[0], uniform[1]);
  EXPECT_GT(uniform[1], uniform[2]);
}

TEST(Bench, VerifyReportsAllMetrics) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Verify;
  spec.s_values = {0.5};
  spec.min_level = 2;
  spec.levels = 2;
  spec.samples = 4;
  std::map<std::string, double> m;
  for (const ResultRow& r : collect(spec)) m[r.metric] = r.value.value();
  for (const char* name : {"norm-equivalence-min", "norm-equivalence-max", "inverse-inequality-max", "scs-max",
                           "galerkin-consistency", "cond-spectral-pa", "cond-pk"}) {
    EXPECT_TRUE(m.count(name)) << name;
  }
  EXPECT_LE(m["norm-equivalence-min"], m["norm-equivalence-max"]);
  EXPECT_LT(m["galerkin-consistency"], 5e-3);
  EXPECT_GT(m["cond-spectral-pa"], 1.0);
}
