#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "isaacsfd/discrete_ops.hpp"
#include "isaacsfd/grid.hpp"
#include "isaacsfd/problem.hpp"

namespace isaacsfd {

enum class Method { Jacobi, GaussSeidel, Policy };

struct SolverConfig {
  Method method = Method::GaussSeidel;
  double theta = 1.0;       // damping in (0, 1]
  double tol = -1.0;        // <= 0: auto, 1e-9 * (1 + sup |f|)
  long max_iter = 1000000;  // sweep cap (jacobi / gauss-seidel / policy inner)
  int policy_max_outer = 100;
  long report_every = 1000;  // residual history cadence
  double delta1_min = 0.0;   // floor passed to the weight decomposition
};

struct SolverReport {
  long iterations = 0;
  double final_residual = 0.0;
  std::vector<std::pair<long, double>> residual_history;
  double seconds = 0.0;
  /// Minimum coordinate-direction weight over every decomposition used:
  /// the empirical delta_1 of this run.
  double min_basis_floor = 0.0;
  bool converged = false;
  double tol_used = 0.0;
  int policy_outer_iterations = 0;
  bool policy_fallback = false;  // cycled and finished with damped sweeps
  int interior_components = 1;
  /// Largest sup-norm any iterate reached and the final one; the gap
  /// between them witnesses the boundedness of the iteration.
  double max_iterate_norm = 0.0;
  double final_norm = 0.0;
};

/// Solves H_h[v] = 0 on the interior with v = 0 on the boundary layer.
/// Starts from u0 (zeros when null). Non-convergence is reported, not
/// thrown: the best iterate comes back with converged = false.
std::pair<GridFunction, SolverReport> solve(const IsaacsProblem& problem,
                                            std::shared_ptr<const Grid> grid,
                                            const SolverConfig& config = {},
                                            const GridFunction* u0 = nullptr);

/// max over interior points of |H_h[v]|.
double residual(const IsaacsProblem& problem, const GridFunction& v);

/// theta over the largest diagonal coefficient at x across all control
/// pairs; the step that keeps u -> u + tau H_h[u] monotone.
double local_timestep(const IsaacsProblem& problem,
                      const GridFunction& reference_grid, int point,
                      DecompositionCache& cache, double theta = 1.0);

struct ComparisonReport {
  int trials = 0;
  int violations = 0;
  double worst_violation = 0.0;  // most negative margin observed
  Eigen::VectorXd witness;       // point of the worst violation
  bool sign_check_applicable = false;
  bool sign_check_ok = true;
  bool passed = true;
};

/// Randomized discrete-comparison probe: for forcing pairs (f, f + g)
/// with g >= 0 the solutions must satisfy v[f+g] >= v[f] - 2 tol
/// everywhere; when every sampled forcing of the base problem is
/// nonnegative, its solution must be >= -2 tol.
ComparisonReport check_comparison(const IsaacsProblem& problem,
                                  std::shared_ptr<const Grid> grid, int trials,
                                  uint64_t seed = 0,
                                  const SolverConfig& config = {});

}  // namespace isaacsfd
