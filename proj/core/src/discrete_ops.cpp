#include "isaacsfd/discrete_ops.hpp"

#include <cmath>

namespace isaacsfd {

namespace {

int neighbor_or_throw(const GridFunction& u, int point, const Direction& l,
                      int sign) {
  int q = u.grid().step(point, l, sign);
  if (q < 0) {
    throw Error(ErrorCode::StencilEscape,
                "difference stencil leaves G_h; point is not interior");
  }
  return q;
}

}  // namespace

double delta_h(const GridFunction& u, int point, const Direction& l) {
  int q = neighbor_or_throw(u, point, l, +1);
  return (u[q] - u[point]) / u.grid().h();
}

double delta2_h(const GridFunction& u, int point, const Direction& l) {
  int qp = neighbor_or_throw(u, point, l, +1);
  int qm = neighbor_or_throw(u, point, l, -1);
  double h = u.grid().h();
  return (u[qp] - 2.0 * u[point] + u[qm]) / (h * h);
}

double apply_L_h(const IsaacsProblem& problem, int alpha, int beta,
                 const GridFunction& u, int point,
                 DecompositionCache& cache) {
  const Grid& grid = u.grid();
  const DirectionSet& lambda = cache.lambda();
  const Eigen::VectorXd x = grid.point(point);
  const CoefficientRecord& rec = problem.coeff(alpha, beta);

  auto dec = cache.diffusion(rec.diffusion(x));
  double acc = 0.0;
  for (int k = 0; k < lambda.half_size(); ++k) {
    double ak = dec->second_order(k);
    if (ak != 0.0) acc += ak * delta2_h(u, point, lambda.half_at(k));
  }
  Eigen::VectorXd b = rec.drift(x);
  for (int axis = 0; axis < grid.dims(); ++axis) {
    double bp = std::max(b(axis), 0.0);
    double bm = std::max(-b(axis), 0.0);
    if (bp != 0.0) {
      acc += bp * delta_h(u, point, lambda.at(lambda.signed_axis_index(axis, true)));
    }
    if (bm != 0.0) {
      acc += bm * delta_h(u, point, lambda.at(lambda.signed_axis_index(axis, false)));
    }
  }
  return acc - rec.zero_order(x) * u[point];
}

Eigen::MatrixXd payoff_table(const IsaacsProblem& problem,
                             const GridFunction& u, int point,
                             DecompositionCache& cache) {
  const Eigen::VectorXd x = u.grid().point(point);
  Eigen::MatrixXd table(problem.n_alpha(), problem.n_beta());
  for (int alpha = 0; alpha < problem.n_alpha(); ++alpha) {
    for (int beta = 0; beta < problem.n_beta(); ++beta) {
      table(alpha, beta) = apply_L_h(problem, alpha, beta, u, point, cache) +
                           problem.coeff(alpha, beta).forcing(x);
    }
  }
  return table;
}

HhValue table_maxmin(const Eigen::MatrixXd& table) {
  HhValue out;
  for (int alpha = 0; alpha < table.rows(); ++alpha) {
    double row_min = table(alpha, 0);
    int row_arg = 0;
    for (int beta = 1; beta < table.cols(); ++beta) {
      if (table(alpha, beta) < row_min) {
        row_min = table(alpha, beta);
        row_arg = beta;
      }
    }
    if (alpha == 0 || row_min > out.value) {
      out.value = row_min;
      out.alpha = alpha;
      out.beta = row_arg;
    }
  }
  return out;
}

double table_minmax(const Eigen::MatrixXd& table) {
  double best = 0.0;
  for (int beta = 0; beta < table.cols(); ++beta) {
    double col_max = table.col(beta).maxCoeff();
    if (beta == 0 || col_max < best) best = col_max;
  }
  return best;
}

HhValue apply_H_h(const IsaacsProblem& problem, const GridFunction& u,
                  int point, DecompositionCache& cache) {
  return table_maxmin(payoff_table(problem, u, point, cache));
}

double apply_L_continuous(const IsaacsProblem& problem, int alpha, int beta,
                          const SmoothField& v, const Eigen::VectorXd& x) {
  const CoefficientRecord& rec = problem.coeff(alpha, beta);
  return rec.diffusion(x).cwiseProduct(v.hessian(x)).sum() +
         rec.drift(x).dot(v.gradient(x)) - rec.zero_order(x) * v.value(x);
}

double consistency_gap(const IsaacsProblem& problem, int alpha, int beta,
                       const SmoothField& v, std::shared_ptr<const Grid> grid,
                       DecompositionCache& cache) {
  GridFunction u = restrict_field(v.value, grid);
  double gap = 0.0;
  for (int p : grid->interior_indices()) {
    double discrete = apply_L_h(problem, alpha, beta, u, p, cache);
    double continuous = apply_L_continuous(problem, alpha, beta, v, grid->point(p));
    gap = std::max(gap, std::abs(discrete - continuous));
  }
  return gap;
}

}  // namespace isaacsfd
