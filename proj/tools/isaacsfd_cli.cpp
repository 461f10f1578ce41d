// Command-line driver: solve single instances, run convergence studies,
// run the K-truncation sandwich experiment, and inspect stencil
// decompositions. Data goes to --out (or stdout), diagnostics to stderr.
// Exit codes: 0 success, 1 solver non-convergence, 2 configuration
// error, 3 invariant/ordering violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isaacsfd/catalog.hpp"
#include "isaacsfd/experiments.hpp"

namespace {

using namespace isaacsfd;

struct Options {
  std::string problem = "poisson-ball";
  std::vector<std::string> params;
  std::string domain = "ball";
  double radius = 1.0;
  int dims = 2;
  std::vector<double> semi_axes;
  double h = 0.1;
  std::vector<double> h_list;
  int lambda_m = 1;
  std::string method = "gauss-seidel";
  double theta = 1.0;
  double tol = -1.0;
  long max_iter = 1000000;
  std::string reference = "exact";
  std::vector<double> k_list;
  double delta_hat = -1.0;
  std::string matrix;
  std::string matrix_file;
  double delta1_min = 0.0;
  std::string out;
  unsigned long long seed = 0;
  bool quiet = false;
  bool no_timing = false;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::EmptyInterior:
    case ErrorCode::NonNestedGrids:
      return 2;
    default:
      return 3;
  }
}

Domain make_domain(const Options& opt) {
  if (opt.domain == "ball") {
    return Domain::ball(Eigen::VectorXd::Zero(opt.dims), opt.radius);
  }
  if (opt.domain == "interval") {
    return Domain::interval(-opt.radius, opt.radius);
  }
  if (opt.domain == "ellipsoid") {
    if (opt.semi_axes.empty()) {
      throw Error(ErrorCode::ConfigError, "ellipsoid needs --semi-axes");
    }
    Eigen::VectorXd s(static_cast<int>(opt.semi_axes.size()));
    for (size_t i = 0; i < opt.semi_axes.size(); ++i) {
      s(static_cast<int>(i)) = opt.semi_axes[i];
    }
    return Domain::ellipsoid(s);
  }
  throw Error(ErrorCode::ConfigError,
              "unknown domain '" + opt.domain + "' (ball|ellipsoid|interval)");
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kv) {
  std::map<std::string, double> out;
  for (const auto& item : kv) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::ConfigError, "--param expects key=value, got '" +
                                              item + "'");
    }
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError,
                  "--param value not numeric in '" + item + "'");
    }
  }
  return out;
}

SolverConfig make_solver_config(const Options& opt) {
  SolverConfig cfg;
  if (opt.method == "jacobi") {
    cfg.method = Method::Jacobi;
  } else if (opt.method == "gauss-seidel") {
    cfg.method = Method::GaussSeidel;
  } else if (opt.method == "policy") {
    cfg.method = Method::Policy;
  } else {
    throw Error(ErrorCode::ConfigError,
                "unknown method '" + opt.method + "' (jacobi|gauss-seidel|policy)");
  }
  cfg.theta = opt.theta;
  cfg.tol = opt.tol;
  cfg.max_iter = opt.max_iter;
  cfg.delta1_min = opt.delta1_min;
  return cfg;
}

// Writes through a file when --out is set, otherwise to stdout.
template <typename Fn>
void with_output(const Options& opt, Fn&& write) {
  if (opt.out.empty()) {
    write(std::cout);
  } else {
    std::ofstream os(opt.out);
    if (!os) {
      throw Error(ErrorCode::ConfigError, "cannot open '" + opt.out + "'");
    }
    write(os);
  }
}

int run_solve(const Options& opt) {
  Domain domain = make_domain(opt);
  IsaacsProblem problem =
      make_catalog_problem(opt.problem, parse_params(opt.params), domain);
  DirectionSet lambda = generate_lambda(domain.dims(), opt.lambda_m);
  auto grid = build_grid(domain, opt.h, lambda);
  auto [v, report] = solve(problem, grid, make_solver_config(opt));

  with_output(opt, [&](std::ostream& os) { write_solution_csv(v, os); });
  if (!opt.quiet) {
    std::fprintf(stderr,
                 "solve: %s h=%g |G_h|=%d |G_h^o|=%d iterations=%ld "
                 "residual=%.3e tol=%.3e delta1=%.4g components=%d%s\n",
                 opt.problem.c_str(), opt.h, grid->size(),
                 grid->interior_size(), report.iterations,
                 report.final_residual, report.tol_used,
                 report.min_basis_floor, report.interior_components,
                 report.converged ? "" : " NOT-CONVERGED");
  }
  return report.converged ? 0 : 1;
}

int run_converge(const Options& opt) {
  Domain domain = make_domain(opt);
  IsaacsProblem problem =
      make_catalog_problem(opt.problem, parse_params(opt.params), domain);
  ExperimentConfig config(std::move(problem));
  config.h_list = opt.h_list;
  config.lambda_m = opt.lambda_m;
  config.solver = make_solver_config(opt);
  if (opt.reference == "exact") {
    config.reference = ReferenceMode::Exact;
  } else if (opt.reference == "finest") {
    config.reference = ReferenceMode::Finest;
  } else {
    throw Error(ErrorCode::ConfigError,
                "unknown reference '" + opt.reference + "' (exact|finest)");
  }

  ConvergenceTable table = run_convergence(config);
  with_output(opt, [&](std::ostream& os) {
    write_convergence_csv(table, os, !opt.no_timing);
  });
  if (!opt.quiet) {
    for (const auto& row : table.rows) {
      std::fprintf(stderr, "converge: h=%g error=%.6e iterations=%ld%s\n",
                   row.h, row.error, row.iterations,
                   row.converged ? "" : " NOT-CONVERGED");
    }
    if (table.rate_defined) {
      std::fprintf(stderr, "converge: fitted_rate=%.4f fit_residual=%.3e\n",
                   table.fitted_rate, table.fit_residual);
    } else if (table.exact_to_tolerance) {
      std::fprintf(stderr, "converge: exact to tolerance, no rate fit\n");
    }
  }
  return table.all_converged ? 0 : 1;
}

int run_sandwich(const Options& opt) {
  Domain domain = make_domain(opt);
  IsaacsProblem problem =
      make_catalog_problem(opt.problem, parse_params(opt.params), domain);
  ExperimentConfig config(std::move(problem));
  config.h_list = {opt.h};
  config.lambda_m = opt.lambda_m;
  config.solver = make_solver_config(opt);

  std::optional<double> delta_hat;
  if (opt.delta_hat > 0.0) delta_hat = opt.delta_hat;
  SandwichReport report = run_sandwich(config, opt.k_list, delta_hat);

  with_output(opt, [&](std::ostream& os) { write_sandwich_csv(report, os); });
  if (!opt.quiet) {
    for (const auto& e : report.entries) {
      std::fprintf(stderr,
                   "sandwich: K=%g gap=%.6e ordering=%s upper-inactive=%d "
                   "lower-inactive=%d\n",
                   e.K, e.sup_gap, e.ordering_ok ? "ok" : "VIOLATED",
                   e.truncation_inactive_upper ? 1 : 0,
                   e.truncation_inactive_lower ? 1 : 0);
    }
  }
  if (!report.ordering_ok || !report.monotone_ok) {
    if (!opt.quiet) {
      std::fprintf(stderr, "sandwich: ordering/monotonicity violated near (");
      for (int i = 0; i < report.witness.size(); ++i) {
        std::fprintf(stderr, "%s%g", i ? ", " : "", report.witness(i));
      }
      std::fprintf(stderr, ")\n");
    }
    return 3;
  }
  return report.all_converged ? 0 : 1;
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row_text;
  while (std::getline(ss, row_text, ';')) {
    std::vector<double> row;
    std::stringstream rs(row_text);
    std::string cell;
    while (std::getline(rs, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError,
                    "matrix entry not numeric: '" + cell + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ConfigError, "empty matrix");
  Eigen::MatrixXd m(static_cast<int>(rows.size()),
                    static_cast<int>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw Error(ErrorCode::ConfigError, "ragged matrix rows");
    }
    for (size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return m;
}

int run_decompose(const Options& opt) {
  std::string text = opt.matrix;
  if (!opt.matrix_file.empty()) {
    std::ifstream is(opt.matrix_file);
    if (!is) {
      throw Error(ErrorCode::ConfigError,
                  "cannot read '" + opt.matrix_file + "'");
    }
    std::stringstream buf;
    buf << is.rdbuf();
    text = buf.str();
    // File form: rows on lines, entries separated by commas or spaces.
    for (char& ch : text) {
      if (ch == '\n') ch = ';';
      if (ch == ' ' || ch == '\t') ch = ',';
    }
  }
  if (text.empty()) {
    throw Error(ErrorCode::ConfigError,
                "decompose needs --matrix or --matrix-file");
  }
  Eigen::MatrixXd a = parse_matrix(text);
  DirectionSet lambda =
      generate_lambda(static_cast<int>(a.rows()), opt.lambda_m);
  Decomposition dec = decompose_diffusion(a, lambda, opt.delta1_min);

  with_output(opt, [&](std::ostream& os) {
    os << "direction,weight\n";
    char buf[96];
    for (int k = 0; k < lambda.half_size(); ++k) {
      const Direction& l = lambda.half_at(k);
      os << "\"(";
      for (int i = 0; i < l.dim(); ++i) os << (i ? " " : "") << l[i];
      std::snprintf(buf, sizeof(buf), ")\",%.17g\n", dec.second_order(k));
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), "# basis_floor=%.17g\n", dec.basis_floor);
    os << buf;
  });
  if (!opt.quiet) {
    std::fprintf(stderr, "decompose: %d half-directions, basis floor %.6g\n",
                 lambda.half_size(), dec.basis_floor);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "isaacsfd: monotone wide-stencil finite differences for elliptic "
      "Isaacs equations"};
  app.require_subcommand(1);

  // --h is a spec'd option name, so help must not claim -h. Options live
  // on the app; subcommands select the action and fall through, which is
  // what lets one --config file (key = value lines) serve all of them.
  app.set_help_flag("--help", "Print help");
  app.set_config("--config", "",
                 "Config file with key = value lines (flags override)");

  Options opt;
  app.add_option("--problem", opt.problem, "Catalog problem name");
  app.add_option("--param", opt.params,
                 "Problem parameter key=value (repeatable)");
  app.add_option("--domain", opt.domain, "ball|ellipsoid|interval");
  app.add_option("--radius", opt.radius, "Ball radius / interval half-width");
  app.add_option("--dims", opt.dims, "Ball dimension (default 2)");
  app.add_option("--semi-axes", opt.semi_axes, "Ellipsoid semi-axes")
      ->delimiter(',');
  app.add_option("--lambda-m", opt.lambda_m, "Direction set max-norm");
  app.add_option("--method", opt.method, "jacobi|gauss-seidel|policy");
  app.add_option("--theta", opt.theta, "Damping in (0,1]");
  app.add_option("--tol", opt.tol, "Residual tolerance (<=0: auto)");
  app.add_option("--max-iter", opt.max_iter, "Sweep cap");
  app.add_option("--delta1-min", opt.delta1_min,
                 "Required coordinate-direction weight floor");
  app.add_option("--out", opt.out, "Output file (default stdout)");
  app.add_option("--seed", opt.seed, "Seed for randomized checks");
  app.add_flag("--quiet", opt.quiet, "Suppress stderr diagnostics");
  app.add_option("--h", opt.h, "Mesh size (solve, sandwich)");
  app.add_option("--h-list", opt.h_list, "Decreasing mesh sizes (converge)")
      ->delimiter(',');
  app.add_option("--reference", opt.reference, "exact|finest (converge)");
  app.add_flag("--no-timing", opt.no_timing,
               "Zero the seconds column (byte-reproducible output)");
  app.add_option("--k-list", opt.k_list, "Increasing K values (sandwich)")
      ->delimiter(',');
  app.add_option("--delta-hat", opt.delta_hat,
                 "Extremal-operator ellipticity (default: problem delta)");
  app.add_option("--matrix", opt.matrix,
                 "Inline matrix, e.g. \"1,0.5;0.5,1\" (decompose)");
  app.add_option("--matrix-file", opt.matrix_file,
                 "Matrix file: one row per line (decompose)");

  auto subcommand = [&](const char* name, const char* blurb) {
    CLI::App* sub = app.add_subcommand(name, blurb);
    sub->set_help_flag("--help", "Print help");
    sub->fallthrough(true);
    return sub;
  };
  CLI::App* solve_cmd =
      subcommand("solve", "Solve one instance, write the solution CSV");
  CLI::App* converge_cmd =
      subcommand("converge", "Convergence study over an h list with rate fit");
  CLI::App* sandwich_cmd =
      subcommand("sandwich", "K-truncated upper/lower solutions bracketing v_h");
  CLI::App* decompose_cmd =
      subcommand("decompose", "Print stencil weights for a diffusion matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(opt);
    if (converge_cmd->parsed()) return run_converge(opt);
    if (sandwich_cmd->parsed()) return run_sandwich(opt);
    if (decompose_cmd->parsed()) return run_decompose(opt);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
