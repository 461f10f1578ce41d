#pragma once

#include <Eigen/Core>

#include "isaacsfd/decompose.hpp"
#include "isaacsfd/grid.hpp"
#include "isaacsfd/problem.hpp"

namespace isaacsfd {

/// Forward difference (u(x + h l) - u(x)) / h. Throws StencilEscape when
/// the neighbor is outside G_h.
double delta_h(const GridFunction& u, int point, const Direction& l);

/// Central second difference (u(x + h l) - 2 u(x) + u(x - h l)) / h^2.
double delta2_h(const GridFunction& u, int point, const Direction& l);

/// L_h^{ab} u(x) = sum_k a_k Delta_{h,l_k} u + sum_k b~_k delta_{h,l_k} u
/// - c u(x), with the weights served by the cache.
double apply_L_h(const IsaacsProblem& problem, int alpha, int beta,
                 const GridFunction& u, int point, DecompositionCache& cache);

struct HhValue {
  double value = 0.0;
  int alpha = 0;  // argmax, lowest index on ties
  int beta = 0;   // argmin within the argmax row, lowest index on ties
};

/// The full payoff table [L_h^{ab} u + f^{ab}](x), alpha rows by beta
/// columns.
Eigen::MatrixXd payoff_table(const IsaacsProblem& problem,
                             const GridFunction& u, int point,
                             DecompositionCache& cache);

/// H_h[u](x) = max over alpha of min over beta of the payoff table,
/// with the realizing control pair.
HhValue apply_H_h(const IsaacsProblem& problem, const GridFunction& u,
                  int point, DecompositionCache& cache);

/// max-min and min-max of a payoff table with lowest-index tie breaking.
HhValue table_maxmin(const Eigen::MatrixXd& table);
double table_minmax(const Eigen::MatrixXd& table);

/// Continuous counterpart a : D2 v + b . D v - c v at x.
double apply_L_continuous(const IsaacsProblem& problem, int alpha, int beta,
                          const SmoothField& v, const Eigen::VectorXd& x);

/// max over interior points of |L^{ab} v - L_h^{ab} restrict(v)|.
double consistency_gap(const IsaacsProblem& problem, int alpha, int beta,
                       const SmoothField& v, std::shared_ptr<const Grid> grid,
                       DecompositionCache& cache);

}  // namespace isaacsfd
