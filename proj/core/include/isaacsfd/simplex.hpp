#pragma once

#include <vector>

#include <Eigen/Core>

namespace isaacsfd {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;        // primal point, size = #columns of A
  double objective = 0.0;   // c.dot(x) at the optimum
  std::vector<int> basis;   // final basic column per row
};

/// Maximize c.dot(x) subject to A x = b, x >= 0.
///
/// Two-phase dense tableau simplex with Bland's rule, so the pivot
/// sequence (and hence the returned vertex) is deterministic for
/// identical inputs. Sized for small problems: a handful of rows,
/// up to a few hundred columns.
LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c, double feas_tol = 1e-10);

}  // namespace isaacsfd
