#include "isaacsfd/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace isaacsfd {

namespace {

void require_h_list(const std::vector<double>& h_list, size_t min_len) {
  if (h_list.size() < min_len) {
    throw Error(ErrorCode::ConfigError, "h list too short");
  }
  for (size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0)) {
      throw Error(ErrorCode::ConfigError, "h values must be positive");
    }
    if (i > 0 && !(h_list[i] < h_list[i - 1])) {
      throw Error(ErrorCode::ConfigError, "h list must be strictly decreasing");
    }
  }
}

}  // namespace

std::pair<double, double> fit_rate(
    const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) {
    throw Error(ErrorCode::DegenerateFit, "need >= 3 (h, error) pairs");
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [h, err] : pairs) {
    if (!(err > 0.0)) {
      throw Error(ErrorCode::DegenerateFit,
                  "zero or negative error; exact to tolerance");
    }
    mx += std::log(h);
    my += std::log(err);
  }
  mx /= double(pairs.size());
  my /= double(pairs.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [h, err] : pairs) {
    double dx = std::log(h) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(err) - my);
  }
  if (sxx <= 0.0) {
    throw Error(ErrorCode::DegenerateFit, "h values not distinct");
  }
  double slope = sxy / sxx;
  double max_dev = 0.0;
  for (const auto& [h, err] : pairs) {
    double fitted = my + slope * (std::log(h) - mx);
    max_dev = std::max(max_dev, std::abs(std::log(err) - fitted));
  }
  return {slope, max_dev};
}

ConvergenceTable run_convergence(const ExperimentConfig& config) {
  require_h_list(config.h_list, 2);
  const IsaacsProblem& problem = config.problem;

  if (config.reference == ReferenceMode::Exact &&
      !problem.exact_solution()) {
    throw Error(ErrorCode::ConfigError,
                "exact reference requires a problem with a known solution");
  }

  const double h_min = config.h_list.back();
  std::vector<long> ratios(config.h_list.size(), 1);
  if (config.reference == ReferenceMode::Finest) {
    for (size_t i = 0; i < config.h_list.size(); ++i) {
      double r = config.h_list[i] / h_min;
      long ri = std::lround(r);
      if (ri < 1 || std::abs(r - double(ri)) > 1e-9 * r) {
        throw Error(ErrorCode::NonNestedGrids,
                    "finest reference needs h values that are integer "
                    "multiples of the smallest h");
      }
      ratios[i] = ri;
    }
  }

  DirectionSet lambda = generate_lambda(problem.dims(), config.lambda_m);

  ConvergenceTable table;
  std::vector<GridFunction> solutions;
  std::vector<std::shared_ptr<const Grid>> grids;
  for (double h : config.h_list) {
    auto grid = build_grid(problem.domain(), h, lambda);
    auto [v, rep] = solve(problem, grid, config.solver);
    table.tol_used = rep.tol_used;
    table.all_converged = table.all_converged && rep.converged;
    ConvergenceRow row;
    row.h = h;
    row.n_grid = grid->size();
    row.n_interior = grid->interior_size();
    row.iterations = rep.iterations;
    row.seconds = rep.seconds;
    row.converged = rep.converged;
    table.rows.push_back(row);
    grids.push_back(grid);
    solutions.push_back(std::move(v));
  }

  if (config.reference == ReferenceMode::Exact) {
    for (size_t i = 0; i < solutions.size(); ++i) {
      GridFunction exact =
          restrict_field(problem.exact_solution()->value, grids[i]);
      table.rows[i].error = sup_diff(solutions[i], exact, GridSubset::All);
    }
  } else {
    const GridFunction& fine = solutions.back();
    const Grid& fine_grid = *grids.back();
    for (size_t i = 0; i < solutions.size(); ++i) {
      double err = 0.0;
      const Grid& coarse = *grids[i];
      for (int p = 0; p < coarse.size(); ++p) {
        std::vector<int> target = coarse.lattice_coords(p);
        for (int& c : target) c = static_cast<int>(c * ratios[i]);
        int q = fine_grid.find(target);
        if (q < 0) {
          throw Error(ErrorCode::NonNestedGrids,
                      "coarse lattice point missing from the fine grid");
        }
        err = std::max(err, std::abs(solutions[i][p] - fine[q]));
      }
      table.rows[i].error = err;
    }
  }

  std::vector<std::pair<double, double>> fit_pairs;
  bool all_tiny = true;
  for (const auto& row : table.rows) {
    if (row.error > 0.0) fit_pairs.emplace_back(row.h, row.error);
    if (row.error > 10.0 * table.tol_used) all_tiny = false;
  }
  table.exact_to_tolerance = all_tiny;
  if (!all_tiny && fit_pairs.size() >= 3) {
    auto [rate, dev] = fit_rate(fit_pairs);
    table.fitted_rate = rate;
    table.fit_residual = dev;
    table.rate_defined = true;
  }
  return table;
}

SandwichReport run_sandwich(const ExperimentConfig& config,
                            const std::vector<double>& K_list,
                            std::optional<double> delta_hat) {
  require_h_list(config.h_list, 1);
  if (K_list.empty()) {
    throw Error(ErrorCode::ConfigError, "K list must be nonempty");
  }
  for (size_t i = 0; i < K_list.size(); ++i) {
    if (K_list[i] < 0.0 || (i > 0 && K_list[i] <= K_list[i - 1])) {
      throw Error(ErrorCode::ConfigError, "K list must be increasing, K >= 0");
    }
  }

  const IsaacsProblem& problem = config.problem;
  const double h = config.h_list.front();
  DirectionSet lambda = generate_lambda(problem.dims(), config.lambda_m);
  auto grid = build_grid(problem.domain(), h, lambda);

  double dh = delta_hat.value_or(problem.delta());
  PucciFamily pucci = make_pucci(dh, lambda);

  SandwichReport rep;
  rep.witness = Eigen::VectorXd::Zero(problem.dims());

  auto [v_base, base_report] = solve(problem, grid, config.solver);
  rep.tol_used = base_report.tol_used;
  rep.all_converged = base_report.converged;
  const double margin = 10.0 * base_report.tol_used;

  // Truncation activity: does the realizing control leave the base set
  // anywhere?
  auto scan_controls = [&](const FusedProblem& fused, const GridFunction& v) {
    DecompositionCache cache(lambda, config.solver.delta1_min);
    for (int p : grid->interior_indices()) {
      HhValue hv = apply_H_h(fused.assembled, v, p, cache);
      if (fused.alpha_is_truncation(hv.alpha) ||
          fused.beta_is_truncation(hv.beta)) {
        return false;  // truncation active at some point
      }
    }
    return true;
  };

  std::optional<GridFunction> prev_upper, prev_lower;

  for (double K : K_list) {
    FusedProblem up = fuse(problem, pucci, K, FuseMode::MaxFuse);
    FusedProblem low = fuse(problem, pucci, K, FuseMode::MinFuse);
    auto [v_up, rep_up] = solve(up.assembled, grid, config.solver);
    auto [v_low, rep_low] = solve(low.assembled, grid, config.solver);
    rep.all_converged = rep.all_converged && rep_up.converged && rep_low.converged;

    SandwichEntry entry;
    entry.K = K;
    entry.iterations_upper = rep_up.iterations;
    entry.iterations_lower = rep_low.iterations;
    entry.sup_dev_upper = sup_diff(v_up, v_base, GridSubset::All);
    entry.sup_dev_lower = sup_diff(v_low, v_base, GridSubset::All);

    double worst = 0.0;
    for (int p = 0; p < v_base.size(); ++p) {
      double m1 = v_up[p] - v_base[p];   // should be >= -margin
      double m2 = v_base[p] - v_low[p];  // should be >= -margin
      double m = std::min(m1, m2);
      if (m < worst) {
        worst = m;
        rep.witness = grid->point(p);
      }
      entry.sup_gap = std::max(entry.sup_gap, v_up[p] - v_low[p]);
    }
    entry.worst_margin = worst;
    entry.ordering_ok = worst >= -margin;
    rep.ordering_ok = rep.ordering_ok && entry.ordering_ok;

    // Monotonicity in K: upper solutions nonincreasing, lower
    // nondecreasing.
    if (prev_upper &&
        (v_up.values() - prev_upper->values()).maxCoeff() > margin) {
      rep.monotone_ok = false;
    }
    if (prev_lower &&
        (prev_lower->values() - v_low.values()).maxCoeff() > margin) {
      rep.monotone_ok = false;
    }

    entry.truncation_inactive_upper = scan_controls(up, v_up);
    entry.truncation_inactive_lower = scan_controls(low, v_low);

    prev_upper = std::move(v_up);
    prev_lower = std::move(v_low);
    rep.entries.push_back(entry);
  }

  for (size_t i = 1; i < rep.entries.size(); ++i) {
    if (rep.entries[i].sup_gap >
        rep.entries[i - 1].sup_gap + 10.0 * rep.tol_used) {
      rep.monotone_ok = false;
    }
  }
  return rep;
}

void write_convergence_csv(const ConvergenceTable& table, std::ostream& os,
                           bool with_timing) {
  os << "h,n_grid,n_interior,error,iterations,seconds\n";
  char buf[160];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%ld,%ld,%.17g,%ld,%.6g\n", row.h,
                  row.n_grid, row.n_interior, row.error, row.iterations,
                  with_timing ? row.seconds : 0.0);
    os << buf;
  }
  if (table.rate_defined) {
    std::snprintf(buf, sizeof(buf), "# fitted_rate=%.17g\n# fit_residual=%.17g\n",
                  table.fitted_rate, table.fit_residual);
    os << buf;
  } else {
    os << "# fitted_rate=nan\n# fit_residual=nan\n";
    if (table.exact_to_tolerance) os << "# exact_to_tolerance=1\n";
  }
}

void write_sandwich_csv(const SandwichReport& report, std::ostream& os) {
  os << "K,sup_gap,ordering_ok\n";
  char buf[96];
  for (const auto& e : report.entries) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", e.K, e.sup_gap,
                  e.ordering_ok ? 1 : 0);
    os << buf;
  }
}

}  // namespace isaacsfd
