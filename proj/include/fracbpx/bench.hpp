#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracbpx/assembly.hpp"

namespace fracbpx {

enum class ExperimentKind { TableUniform, TableGraded, Convergence, Verify, Solve };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::TableUniform;
  std::vector<double> s_values = {0.1, 0.5, 0.9};
  std::optional<double> gamma_tilde;  // unset: 0.5 on uniform grids, sqrt(2)/2 on bisection grids
  int min_level = 1;
  int levels = 5;  // last uniform level or last graded stage
  int graded_levels = 0;  // last graded stage of a convergence run; 0 means levels
  bool compare_uncorrected = false;  // extra PCG row with gamma_tilde = 0
  double theta = 4.0;
  double mu = 2.0;
  QuadratureSpec quad;
  std::vector<std::string> solvers = {"gs", "cg", "pcg"};
  std::string precond = "bpx";  // none | diag | bpx
  double tol = 1e-6;
  std::uint64_t seed = 1;
  std::size_t max_dofs = 4100;
  bool cond = false;    // Lanczos estimates on CG (K) and PCG (P K) rows
  bool timing = false;  // fill the wall_time column
  std::string domain = "square";  // square | disk, for solve
  bool graded = false;            // graded family, for solve
  int samples = 20;               // random vectors per verify check
};

void validate(const ExperimentSpec& spec);

struct ResultRow {
  std::string experiment;
  int stage = 0;
  int dofs = 0;
  double s = 0.0;
  std::optional<double> gamma_tilde;
  std::string solver;
  std::string precond;
  std::optional<int> iterations;
  std::optional<double> residual;
  std::optional<double> cond;
  std::optional<double> energy_error;
  std::optional<double> wall_time;
  std::string metric;  // verify and rate rows
  std::optional<double> value;
};

using RowSink = std::function<void(const ResultRow&)>;

// Each runner streams rows as soon as they are available, so a resource
// error leaves the rows produced so far with the sink.
void run_table_uniform(const ExperimentSpec& spec, const RowSink& sink);
void run_table_graded(const ExperimentSpec& spec, const RowSink& sink);
void run_convergence(const ExperimentSpec& spec, const RowSink& sink);
void run_verify(const ExperimentSpec& spec, const RowSink& sink);
void run_solve(const ExperimentSpec& spec, const RowSink& sink);
void run_experiment(const ExperimentSpec& spec, const RowSink& sink);

// Writes "# key=value" provenance lines and the header on construction.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const ExperimentSpec& spec);
  void write(const ResultRow& row);

 private:
  std::ostream& out_;
  bool timing_;
};

std::string csv_header();
std::string format_row(const ResultRow& row, bool timing);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Graded square family: stage k applies graded_stage k times to init_square().
struct GradedFamilyStage {
  Mesh mesh;
  BisectionHistory history;
};
std::vector<GradedFamilyStage> graded_family(const Mesh& t0, int stages, double theta, double mu);

}  // namespace fracbpx
