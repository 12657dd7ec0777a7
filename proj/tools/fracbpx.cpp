// Command-line front end: fracbpx <subcommand> [options], CSV on stdout or --out.
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fracbpx/bench.hpp"
#include "fracbpx/errors.hpp"

namespace {

using fracbpx::ExperimentKind;
using fracbpx::ExperimentSpec;

struct Command {
  ExperimentSpec spec;
  std::string quad = "4,5";
  std::string out;
  double gamma_tilde = -1.0;
  CLI::App* app = nullptr;
};

void add_options(CLI::App* sub, Command& c) {
  sub->add_option("--s", c.spec.s_values, "fractional orders, comma separated")->delimiter(',');
  sub->add_option("--levels", c.spec.levels, "last uniform level or graded stage");
  sub->add_option("--min-level", c.spec.min_level, "first level or stage");
  sub->add_option("--graded-levels", c.spec.graded_levels, "last graded stage (convergence)");
  sub->add_option("--gamma-tilde", c.gamma_tilde, "correction parameter in [0,1)");
  sub->add_flag("--compare-uncorrected", c.spec.compare_uncorrected, "also run PCG with gamma_tilde = 0");
  sub->add_option("--theta", c.spec.theta, "grading parameter theta > 1");
  sub->add_option("--mu", c.spec.mu, "grading exponent mu >= 1");
  sub->add_option("--solver", c.spec.solvers, "gs, cg, pcg (comma separated)")->delimiter(',');
  sub->add_option("--precond", c.spec.precond, "none, diag or bpx")->check(CLI::IsMember({"none", "diag", "bpx"}));
  sub->add_option("--tol", c.spec.tol, "relative residual tolerance");
  sub->add_option("--quad", c.quad, "gauss_order,singular_order");
  sub->add_option("--seed", c.spec.seed, "random seed");
  sub->add_option("--out", c.out, "output CSV path (stdout when omitted)");
  sub->add_option("--max-dofs", c.spec.max_dofs, "DOF budget for dense assembly");
  sub->add_option("--samples", c.spec.samples, "random vectors per verify check");
  sub->add_option("--domain", c.spec.domain, "square or disk (solve)")->check(CLI::IsMember({"square", "disk"}));
  sub->add_flag("--graded", c.spec.graded, "use the graded family (solve)");
  sub->add_flag("--cond", c.spec.cond, "Lanczos condition estimates");
  sub->add_flag("--timing", c.spec.timing, "fill the wall_time column");
}

void parse_quad(const std::string& text, fracbpx::QuadratureSpec& q) {
  std::istringstream in(text);
  char comma = 0;
  if (!(in >> q.gauss_order >> comma >> q.singular_order) || comma != ',') {
    throw std::invalid_argument("--quad expects <gauss>,<singular>");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Laplacian FEM with BPX preconditioning"};
  app.require_subcommand(1);

  std::map<ExperimentKind, Command> commands;
  auto add = [&](ExperimentKind kind, const std::string& help) -> Command& {
    Command& c = commands[kind];
    c.spec.kind = kind;
    c.app = app.add_subcommand(fracbpx::to_string(kind), help);
    return c;
  };

  add(ExperimentKind::TableUniform, "iteration counts on uniform grids of (-1,1)^2");
  add(ExperimentKind::TableGraded, "iteration counts on graded bisection grids of (-1,1)^2");
  Command& conv = add(ExperimentKind::Convergence, "energy errors on the unit disk with f = 1");
  conv.spec.s_values = {0.5};
  conv.spec.graded_levels = 8;
  Command& verify = add(ExperimentKind::Verify, "multilevel norm and spectral checks");
  verify.spec.s_values = {0.5};
  verify.spec.min_level = 2;
  verify.spec.levels = 4;
  Command& solve = add(ExperimentKind::Solve, "a single assembly and solve");
  solve.spec.s_values = {0.5};
  solve.spec.levels = 3;
  solve.spec.solvers = {"pcg"};
  for (auto& [kind, c] : commands) add_options(c.app, c);

  CLI11_PARSE(app, argc, argv);

  for (auto& [kind, c] : commands) {
    if (!c.app->parsed()) continue;
    std::ofstream file;
    std::ostream* out = &std::cout;
    try {
      parse_quad(c.quad, c.spec.quad);
      if (c.gamma_tilde >= 0.0) c.spec.gamma_tilde = c.gamma_tilde;
      fracbpx::validate(c.spec);
      if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw std::runtime_error("cannot open " + c.out);
        out = &file;
      }
      fracbpx::CsvWriter writer(*out, c.spec);
      fracbpx::run_experiment(c.spec, [&](const fracbpx::ResultRow& r) { writer.write(r); });
    } catch (const fracbpx::ResourceError& e) {
      std::cerr << "resource limit: " << e.what() << '\n';
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 0;
}
