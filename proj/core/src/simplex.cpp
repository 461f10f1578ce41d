#include "isaacsfd/simplex.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "isaacsfd/errors.hpp"

namespace isaacsfd {

namespace {

// Tableau layout: rows 0..m-1 are constraints, row m is the objective
// (reduced costs, maximization). Column layout: structural columns,
// then artificials, then the rhs in the last column.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<int> basis;  // basic column index per constraint row
  int m, n;                // constraints, total decision columns

  double& rhs(int i) { return t(i, n); }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int i = 0; i <= m; ++i) {
      if (i == row) continue;
      double factor = t(i, col);
      if (factor != 0.0) t.row(i) -= factor * t.row(row);
    }
    basis[static_cast<size_t>(row)] = col;
  }

  // Bland: entering column = lowest index with positive reduced profit;
  // leaving row = min ratio, ties broken by lowest basic column index.
  // `eligible(j)` restricts the entering candidates.
  template <typename Pred>
  bool iterate(double tol, Pred eligible) {
    const long max_pivots = 200000;
    for (long it = 0; it < max_pivots; ++it) {
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (eligible(j) && t(m, j) > tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;  // optimal

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double aij = t(i, enter);
        if (aij > tol) {
          double ratio = rhs(i) / aij;
          if (ratio < best_ratio - tol ||
              (ratio < best_ratio + tol && leave >= 0 &&
               basis[static_cast<size_t>(i)] <
                   basis[static_cast<size_t>(leave)])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;  // unbounded in the entering direction
      pivot(leave, enter);
    }
    throw Error(ErrorCode::SingularInput, "simplex pivot limit exceeded");
  }
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c, double feas_tol) {
  const int m = static_cast<int>(A.rows());
  const int n_struct = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n_struct) {
    throw Error(ErrorCode::SingularInput, "LP dimension mismatch");
  }
  if (!A.allFinite() || !b.allFinite() || !c.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "LP data not finite");
  }

  Tableau tab;
  tab.m = m;
  tab.n = n_struct + m;  // structural + one artificial per row
  tab.t = Eigen::MatrixXd::Zero(m + 1, tab.n + 1);
  tab.basis.resize(static_cast<size_t>(m));

  for (int i = 0; i < m; ++i) {
    double sign = (b(i) < 0.0) ? -1.0 : 1.0;
    tab.t.block(i, 0, 1, n_struct) = sign * A.row(i);
    tab.t(i, n_struct + i) = 1.0;
    tab.rhs(i) = sign * b(i);
    tab.basis[static_cast<size_t>(i)] = n_struct + i;
  }

  // Phase 1: maximize -(sum of artificials). Objective row expressed in
  // terms of the nonbasic columns: add up the constraint rows.
  for (int i = 0; i < m; ++i) {
    tab.t.row(m) += tab.t.row(i);
  }
  tab.t.block(m, n_struct, 1, m).setZero();

  tab.iterate(feas_tol, [&](int j) { return j < n_struct; });

  LpResult result;
  if (tab.rhs(m) > feas_tol * (1.0 + b.cwiseAbs().maxCoeff())) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive leftover artificials out of the basis; rows where that is
  // impossible are redundant constraints and stay pinned at zero.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[static_cast<size_t>(i)] >= n_struct) {
      for (int j = 0; j < n_struct; ++j) {
        if (std::abs(tab.t(i, j)) > feas_tol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2: replace the objective row with the real costs, reduced
  // against the current basis.
  tab.t.row(m).setZero();
  tab.t.block(m, 0, 1, n_struct) = c.transpose();
  for (int i = 0; i < m; ++i) {
    int bi = tab.basis[static_cast<size_t>(i)];
    if (bi < n_struct && tab.t(m, bi) != 0.0) {
      tab.t.row(m) -= tab.t(m, bi) * tab.t.row(i);
    }
  }

  bool bounded =
      tab.iterate(feas_tol, [&](int j) { return j < n_struct; });
  if (!bounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x = Eigen::VectorXd::Zero(n_struct);
  result.basis.clear();
  for (int i = 0; i < m; ++i) {
    int bi = tab.basis[static_cast<size_t>(i)];
    result.basis.push_back(bi);
    if (bi < n_struct) result.x(bi) = tab.rhs(i);
  }

  // Re-solve the basic system against the original data to shed the
  // roundoff accumulated in the tableau.
  {
    std::vector<int> cols;
    for (int bi : result.basis) {
      if (bi < n_struct) cols.push_back(bi);
    }
    if (!cols.empty()) {
      Eigen::MatrixXd B(m, static_cast<int>(cols.size()));
      for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
        B.col(j) = A.col(cols[static_cast<size_t>(j)]);
      }
      Eigen::VectorXd xb =
          B.completeOrthogonalDecomposition().solve(b);
      if ((B * xb - b).cwiseAbs().maxCoeff() <=
          (A * result.x - b).cwiseAbs().maxCoeff()) {
        Eigen::VectorXd refined = Eigen::VectorXd::Zero(n_struct);
        bool sign_ok = true;
        for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
          if (xb(j) < -1e-9) sign_ok = false;
          refined(cols[static_cast<size_t>(j)]) = std::max(xb(j), 0.0);
        }
        if (sign_ok) result.x = refined;
      }
    }
  }

  result.objective = c.dot(result.x);
  return result;
}

}  // namespace isaacsfd
