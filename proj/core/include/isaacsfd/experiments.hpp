#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "isaacsfd/pucci.hpp"
#include "isaacsfd/solver.hpp"

namespace isaacsfd {

enum class ReferenceMode { Exact, Finest };

struct ExperimentConfig {
  IsaacsProblem problem;
  std::vector<double> h_list;  // strictly decreasing
  int lambda_m = 1;
  SolverConfig solver;
  ReferenceMode reference = ReferenceMode::Exact;

  explicit ExperimentConfig(IsaacsProblem p) : problem(std::move(p)) {}
};

struct ConvergenceRow {
  double h = 0.0;
  long n_grid = 0;
  long n_interior = 0;
  double error = 0.0;
  long iterations = 0;
  double seconds = 0.0;
  bool converged = false;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // sorted by decreasing h
  double fitted_rate = 0.0;
  double fit_residual = 0.0;
  bool rate_defined = false;
  /// All errors at or below 10x the solver tolerance: the discretization
  /// reproduces the reference exactly and no rate can be fit.
  bool exact_to_tolerance = false;
  bool all_converged = true;
  double tol_used = 0.0;
};

/// Solve at every h and measure sup |v_h - reference| over G_h. Exact
/// reference restricts the problem's known solution; Finest uses the
/// solution at the smallest h, which requires the h list to be integer
/// multiples of it (nested lattices).
ConvergenceTable run_convergence(const ExperimentConfig& config);

/// Ordinary least squares slope of log(error) against log(h) plus the
/// max absolute fit deviation. Requires >= 3 pairs with positive errors;
/// zero or negative errors raise DegenerateFit.
std::pair<double, double> fit_rate(
    const std::vector<std::pair<double, double>>& pairs);

struct SandwichEntry {
  double K = 0.0;
  double sup_gap = 0.0;       // sup (v^{+K} - v^{-K})
  bool ordering_ok = true;    // v^{-K} <= v_h <= v^{+K} up to 10 tol
  double worst_margin = 0.0;  // most negative ordering margin
  double sup_dev_upper = 0.0;  // sup |v^{+K} - v_h|
  double sup_dev_lower = 0.0;  // sup |v^{-K} - v_h|
  bool truncation_inactive_upper = false;  // argmax stayed in the base A
  bool truncation_inactive_lower = false;  // argmin stayed in the base B
  long iterations_upper = 0;
  long iterations_lower = 0;
};

struct SandwichReport {
  std::vector<SandwichEntry> entries;  // in K order
  bool ordering_ok = true;
  /// Solutions monotone in K (upper nonincreasing, lower nondecreasing)
  /// and gap(K) nonincreasing.
  bool monotone_ok = true;
  bool all_converged = true;
  double tol_used = 0.0;
  Eigen::VectorXd witness;  // point of the worst ordering violation
};

/// At fixed h (config.h_list.front()), solve the base problem and both
/// K-truncated fusions for each K; check the sandwich ordering, the
/// monotonicity of the gap in K, and whether the truncation is active.
SandwichReport run_sandwich(const ExperimentConfig& config,
                            const std::vector<double>& K_list,
                            std::optional<double> delta_hat = std::nullopt);

/// Header h,n_grid,n_interior,error,iterations,seconds plus footer
/// comments # fitted_rate= and # fit_residual=. with_timing=false zeroes
/// the seconds column for byte-reproducible output.
void write_convergence_csv(const ConvergenceTable& table, std::ostream& os,
                           bool with_timing = true);

/// Header K,sup_gap,ordering_ok.
void write_sandwich_csv(const SandwichReport& report, std::ostream& os);

}  // namespace isaacsfd
