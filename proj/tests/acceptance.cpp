// Acceptance suite: one check per release criterion, each printing a
// single PASS/FAIL line with its measured quantities and wall time.
// Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isaacsfd/catalog.hpp"
#include "isaacsfd/experiments.hpp"

using namespace isaacsfd;

namespace {

int g_failures = 0;

template <typename Body>
void criterion(int id, const char* label, Body&& body) {
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body(note);
  } catch (const std::exception& e) {
    ok = false;
    note = std::string("threw: ") + e.what();
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("[%s] criterion %2d: %-34s (%6.2fs)%s%s\n", ok ? "PASS" : "FAIL",
              id, label, secs, note.empty() ? "" : "  ", note.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Eigen::MatrixXd random_s_delta(int d, double delta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> eig(delta, 1.0 / delta);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = gauss(rng);
  }
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
  Eigen::VectorXd ev(d);
  for (int i = 0; i < d; ++i) ev(i) = eig(rng);
  return q * ev.asDiagonal() * q.transpose();
}

Domain unit_disk() { return Domain::ball(Eigen::Vector2d::Zero(), 1.0); }

IsaacsProblem singleton_on(Domain dom, Eigen::MatrixXd a, Eigen::VectorXd b,
                           double c, double delta) {
  IsaacsProblem::Spec spec(std::move(dom));
  spec.delta = delta;
  CoefficientRecord rec;
  rec.a = constant_matrix(std::move(a));
  rec.b = constant_vector(std::move(b));
  rec.c = constant_scalar(c);
  spec.coefficients.push_back(std::move(rec));
  return IsaacsProblem(std::move(spec));
}

// 1. 200 random S_0.2 matrices, d in {2,3}, stencils up to max-norm 3:
//    each decomposes (with exact reassembly) or reports an insufficient
//    stencil; under 10 s.
bool crit_reassembly(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  const double delta = 0.2;
  int decomposed = 0, insufficient = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    int d = (trial % 2 == 0) ? 2 : 3;
    Eigen::MatrixXd a = random_s_delta(d, delta, rng);
    bool done = false;
    for (int m = 1; m <= 3 && !done; ++m) {
      DirectionSet lam = generate_lambda(d, m);
      try {
        Decomposition dec = decompose_diffusion(a, lam, 0.0);
        double res = (dec.reassemble_diffusion(lam) - a).cwiseAbs().maxCoeff();
        worst = std::max(worst, res);
        if (res > 1e-9 || dec.second_order.minCoeff() < 0.0) {
          note = "reassembly residual " + std::to_string(res);
          return false;
        }
        ++decomposed;
        done = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientStencil) throw;
      }
    }
    if (!done) ++insufficient;
  }
  double secs = elapsed_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d decomposed, %d insufficient, worst residual %.2e", decomposed,
                insufficient, worst);
  note = buf;
  return secs < 10.0;
}

// 2. The hand-eliminated infeasible matrix fails at m=1 and splits at m=3.
bool crit_known_infeasible(std::string& note) {
  Eigen::Matrix2d a;
  a << 0.5, 1.0, 1.0, 10.0;
  bool threw = false;
  try {
    decompose_diffusion(a, generate_lambda(2, 1), 0.0);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::InsufficientStencil;
  }
  if (!threw) {
    note = "m=1 did not raise InsufficientStencil";
    return false;
  }
  DirectionSet lam3 = generate_lambda(2, 3);
  Decomposition dec = decompose_diffusion(a, lam3, 0.0);
  double res = (dec.reassemble_diffusion(lam3) - a).cwiseAbs().maxCoeff();
  note = "m=3 residual " + std::to_string(res);
  return res <= 1e-9;
}

// 3. 50 random quadratics against random S_0.2 coefficients, no drift or
//    zero-order term: the discrete operator reproduces the continuous one
//    to 1e-11 at every interior point of the h=0.1 disk grid.
bool crit_quadratic_exactness(std::string& note) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  const double delta = 0.2;
  Domain disk = unit_disk();

  std::vector<DirectionSet> lams;
  std::vector<std::shared_ptr<const Grid>> grids;
  for (int m = 1; m <= 3; ++m) {
    lams.push_back(generate_lambda(2, m));
    grids.push_back(build_grid(disk, 0.1, lams.back()));
  }

  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd a = random_s_delta(2, delta, rng);
    Eigen::Matrix2d m_quad;
    double q11 = unit(rng), q22 = unit(rng), q12 = unit(rng);
    m_quad << q11, q12, q12, q22;

    int which = -1;
    for (int i = 0; i < 3 && which < 0; ++i) {
      try {
        decompose_diffusion(a, lams[static_cast<size_t>(i)], 0.0);
        which = i;
      } catch (const Error&) {
      }
    }
    if (which < 0) {
      note = "coefficient not decomposable at m <= 3";
      return false;
    }

    IsaacsProblem p =
        singleton_on(disk, a, Eigen::Vector2d::Zero(), 0.0, delta);
    DecompositionCache cache(lams[static_cast<size_t>(which)], 0.0);
    const auto& grid = grids[static_cast<size_t>(which)];
    GridFunction u = restrict_field(
        [&](const Eigen::VectorXd& x) { return x.dot(m_quad * x); }, grid);
    double exact = 2.0 * a.cwiseProduct(m_quad).sum();
    for (int idx : grid->interior_indices()) {
      double got = apply_L_h(p, 0, 0, u, idx, cache);
      worst = std::max(worst, std::abs(got - exact));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "worst |L_h - L| = %.2e", worst);
  note = buf;
  return worst <= 1e-11;
}

// 4. Consistency decay for v = sin(x1) cos(x2): halving h divides the gap
//    by ~2 with drift and by ~4 without; under 5 s.
bool crit_consistency_order(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  Domain disk = unit_disk();
  SmoothField v;
  v.value = [](const Eigen::VectorXd& x) {
    return std::sin(x(0)) * std::cos(x(1));
  };
  v.gradient = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(2);
    g << std::cos(x(0)) * std::cos(x(1)), -std::sin(x(0)) * std::sin(x(1));
    return g;
  };
  v.hessian = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd h(2, 2);
    double s1 = std::sin(x(0)), c1 = std::cos(x(0));
    double s2 = std::sin(x(1)), c2 = std::cos(x(1));
    h << -s1 * c2, -c1 * s2, -c1 * s2, -s1 * c2;
    return h;
  };

  Eigen::Matrix2d a;
  a << 1.0, 0.3, 0.3, 1.5;
  DirectionSet lam = generate_lambda(2, 1);
  DecompositionCache cache(lam, 0.0);

  auto gap = [&](double b1, double b2, double h) {
    IsaacsProblem p =
        singleton_on(disk, a, Eigen::Vector2d(b1, b2), 0.0, 0.4);
    return consistency_gap(p, 0, 0, v, build_grid(disk, h, lam), cache);
  };

  double d1 = gap(0.8, -0.5, 0.1), d2 = gap(0.8, -0.5, 0.05),
         d3 = gap(0.8, -0.5, 0.025);
  double p1 = gap(0.0, 0.0, 0.1), p2 = gap(0.0, 0.0, 0.05),
         p3 = gap(0.0, 0.0, 0.025);
  double rd1 = d1 / d2, rd2 = d2 / d3;
  double rp1 = p1 / p2, rp2 = p2 / p3;

  char buf[128];
  std::snprintf(buf, sizeof(buf), "drift ratios %.2f %.2f, pure %.2f %.2f",
                rd1, rd2, rp1, rp2);
  note = buf;
  bool ranges = rd1 >= 1.7 && rd1 <= 2.3 && rd2 >= 1.7 && rd2 <= 2.3 &&
                rp1 >= 3.5 && rp1 <= 4.3 && rp2 >= 3.5 && rp2 <= 4.3;
  return ranges && elapsed_since(t0) < 5.0;
}

// 5. d=1 Poisson against an independent tridiagonal elimination; 1e-8
//    agreement at two mesh sizes, under 1 s.
bool crit_direct_solve(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  IsaacsProblem::Spec spec(Domain::interval(-1.0, 1.0));
  spec.delta = 1.0;
  CoefficientRecord rec;
  Eigen::MatrixXd a(1, 1);
  a << 1.0;
  rec.a = constant_matrix(a);
  rec.f = constant_scalar(1.0);
  spec.coefficients.push_back(std::move(rec));
  IsaacsProblem p(std::move(spec));

  double worst = 0.0;
  for (double h : {0.25, 0.125}) {
    auto grid = build_grid(p.domain(), h, generate_lambda(1, 1));
    auto [v, rep] = solve(p, grid, {});
    if (!rep.converged) {
      note = "solver did not converge";
      return false;
    }
    const int n = grid->interior_size();
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 2.0 / (h * h));
    Eigen::VectorXd off = Eigen::VectorXd::Constant(n - 1, -1.0 / (h * h));
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
    for (int i = 1; i < n; ++i) {
      double w = off(i - 1) / diag(i - 1);
      diag(i) -= w * off(i - 1);
      rhs(i) -= w * rhs(i - 1);
    }
    Eigen::VectorXd sol(n);
    sol(n - 1) = rhs(n - 1) / diag(n - 1);
    for (int i = n - 2; i >= 0; --i) {
      sol(i) = (rhs(i) - off(i) * sol(i + 1)) / diag(i);
    }
    for (int ii = 0; ii < n; ++ii) {
      int idx = grid->interior_indices()[static_cast<size_t>(ii)];
      worst = std::max(worst, std::abs(v[idx] - sol(ii)));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "sup deviation %.2e", worst);
  note = buf;
  return worst <= 1e-8 && elapsed_since(t0) < 1.0;
}

// 6. Linear convergence study: errors strictly decreasing, fitted rate
//    >= 0.8 on the interval and the disk; under 2 min with gauss-seidel.
bool crit_rate_linear(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  double rate_1d = 0.0, rate_2d = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    Domain dom = pass == 0 ? Domain::interval(-1.0, 1.0) : unit_disk();
    ExperimentConfig config(make_catalog_problem("poisson-ball", {}, dom));
    config.h_list = {0.2, 0.1, 0.05, 0.025};
    config.solver.method = Method::GaussSeidel;
    ConvergenceTable table = run_convergence(config);
    if (!table.all_converged) {
      note = "solver did not converge";
      return false;
    }
    for (size_t i = 1; i < table.rows.size(); ++i) {
      if (!(table.rows[i].error < table.rows[i - 1].error)) {
        note = "errors not strictly decreasing";
        return false;
      }
    }
    if (!table.rate_defined || table.fitted_rate < 0.8) {
      note = "rate " + std::to_string(table.fitted_rate);
      return false;
    }
    (pass == 0 ? rate_1d : rate_2d) = table.fitted_rate;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "rate d=1 %.3f, d=2 %.3f", rate_1d, rate_2d);
  note = buf;
  return elapsed_since(t0) < 120.0;
}

// 7. Isaacs convergence study on the manufactured problem: errors strictly
//    decreasing and a positive fitted rate >= 0.5; under 5 min.
bool crit_rate_isaacs(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig config(
      make_catalog_problem("manufactured-isaacs", {}, unit_disk()));
  config.h_list = {0.2, 0.1, 0.05, 0.025};
  config.solver.method = Method::Policy;
  ConvergenceTable table = run_convergence(config);
  if (!table.all_converged) {
    note = "solver did not converge";
    return false;
  }
  for (size_t i = 1; i < table.rows.size(); ++i) {
    if (!(table.rows[i].error < table.rows[i - 1].error)) {
      note = "errors not strictly decreasing";
      return false;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "rate %.3f", table.fitted_rate);
  note = buf;
  return table.rate_defined && table.fitted_rate >= 0.5 &&
         elapsed_since(t0) < 300.0;
}

// 8. 1000 randomized monotonicity trials and 1000 locality trials for the
//    discrete operator at d=2, h=0.1.
bool crit_property_suites(std::string& note) {
  IsaacsProblem p = make_catalog_problem("isaacs-2x2", {}, unit_disk());
  auto grid = build_grid(unit_disk(), 0.1, generate_lambda(2, 1));
  DecompositionCache cache(grid->lambda(), 0.0);
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> bump(0.0, 1.0);
  const auto& interior = grid->interior_indices();

  for (int trial = 0; trial < 1000; ++trial) {
    GridFunction u(grid);
    for (int i = 0; i < u.size(); ++i) u[i] = unit(rng);
    int idx = interior[rng() % interior.size()];
    double base = apply_H_h(p, u, idx, cache).value;

    GridFunction w = u;
    for (int i = 0; i < w.size(); ++i) {
      if (i != idx) w[i] += bump(rng);
    }
    if (apply_H_h(p, w, idx, cache).value < base - 1e-12) {
      note = "monotonicity violated at trial " + std::to_string(trial);
      return false;
    }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    GridFunction u(grid);
    for (int i = 0; i < u.size(); ++i) u[i] = unit(rng);
    int idx = interior[rng() % interior.size()];
    double base = apply_H_h(p, u, idx, cache).value;

    std::set<int> stencil = {idx};
    for (int i = 0; i < grid->lambda().size(); ++i) {
      int q = grid->step(idx, grid->lambda().at(i), +1);
      if (q >= 0) stencil.insert(q);
    }
    GridFunction w = u;
    for (int i = 0; i < w.size(); ++i) {
      if (!stencil.count(i)) w[i] += unit(rng) * 20.0;
    }
    if (std::abs(apply_H_h(p, w, idx, cache).value - base) > 1e-12) {
      note = "locality violated at trial " + std::to_string(trial);
      return false;
    }
  }
  note = "1000 + 1000 trials";
  return true;
}

// 9. Comparison principle over 50 randomized forcing bumps plus the
//    two-initial-iterates uniqueness probe on every catalog problem.
bool crit_comparison_uniqueness(std::string& note) {
  Domain disk = unit_disk();
  IsaacsProblem p = make_catalog_problem("isaacs-2x2", {}, disk);
  auto grid = build_grid(disk, 0.2, generate_lambda(2, 1));
  ComparisonReport rep = check_comparison(p, grid, 50, 1234);
  if (!rep.passed) {
    note = "comparison violated, margin " + std::to_string(rep.worst_violation);
    return false;
  }

  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto probe_grid = build_grid(disk, 0.1, generate_lambda(2, 1));
  for (const auto& name : catalog_names()) {
    IsaacsProblem q = make_catalog_problem(name, {}, disk);
    auto [v0, rep0] = solve(q, probe_grid, {});
    GridFunction init(probe_grid);
    for (int i = 0; i < init.size(); ++i) init[i] = unit(rng);
    auto [v1, rep1] = solve(q, probe_grid, {}, &init);
    if (!rep0.converged || !rep1.converged) {
      note = std::string("no convergence on ") + name;
      return false;
    }
    if (sup_diff(v0, v1) > 10.0 * rep0.tol_used) {
      note = std::string("uniqueness probe failed on ") + name;
      return false;
    }
  }
  note = "50 comparison trials, 5 uniqueness probes";
  return true;
}

// 10. Sandwich at h=0.05, K in {0,1,2,4,8}: ordering to 10 tol, gap
//     nonincreasing, truncation inactive at the largest K; under 5 min.
bool crit_sandwich(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig config(make_catalog_problem("isaacs-2x2", {}, unit_disk()));
  config.h_list = {0.05};
  config.solver.method = Method::Policy;
  SandwichReport rep = run_sandwich(config, {0.0, 1.0, 2.0, 4.0, 8.0});

  if (!rep.all_converged) {
    note = "a fused solve did not converge";
    return false;
  }
  if (!rep.ordering_ok) {
    note = "ordering violated";
    return false;
  }
  if (!rep.monotone_ok) {
    note = "gap or solution monotonicity violated";
    return false;
  }
  const SandwichEntry& last = rep.entries.back();
  if (!last.truncation_inactive_upper || !last.truncation_inactive_lower) {
    note = "truncation still active at K=8";
    return false;
  }
  double eq = std::max(last.sup_dev_upper, last.sup_dev_lower);
  if (eq > 10.0 * rep.tol_used) {
    note = "largest-K solutions deviate " + std::to_string(eq);
    return false;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "gap(0)=%.3e gap(8)=%.3e",
                rep.entries.front().sup_gap, last.sup_gap);
  note = buf;
  return elapsed_since(t0) < 300.0;
}

// 11. Jacobi, gauss-seidel and policy agree pairwise to 10 tol on every
//     catalog problem at h=0.1.
bool crit_method_agreement(std::string& note) {
  Domain disk = unit_disk();
  auto grid = build_grid(disk, 0.1, generate_lambda(2, 1));
  for (const auto& name : catalog_names()) {
    IsaacsProblem p = make_catalog_problem(name, {}, disk);
    SolverConfig cfg;
    cfg.method = Method::Jacobi;
    auto [vj, rj] = solve(p, grid, cfg);
    cfg.method = Method::GaussSeidel;
    auto [vg, rg] = solve(p, grid, cfg);
    cfg.method = Method::Policy;
    auto [vp, rp] = solve(p, grid, cfg);
    if (!rj.converged || !rg.converged || !rp.converged) {
      note = std::string("no convergence on ") + name;
      return false;
    }
    double tol = 10.0 * rg.tol_used;
    if (sup_diff(vj, vg) > tol || sup_diff(vg, vp) > tol ||
        sup_diff(vj, vp) > tol) {
      note = std::string("methods disagree on ") + name;
      return false;
    }
  }
  note = "5 problems x 3 methods";
  return true;
}

}  // namespace

int main() {
  std::printf("isaacsfd acceptance suite\n");
  criterion(1, "stencil reassembly, 200 matrices", crit_reassembly);
  criterion(2, "known-infeasible stencil instance", crit_known_infeasible);
  criterion(3, "quadratic exactness", crit_quadratic_exactness);
  criterion(4, "consistency order", crit_consistency_order);
  criterion(5, "d=1 direct-solve oracle", crit_direct_solve);
  criterion(6, "convergence rate, linear", crit_rate_linear);
  criterion(7, "convergence rate, isaacs", crit_rate_isaacs);
  criterion(8, "monotonicity and locality suites", crit_property_suites);
  criterion(9, "comparison and uniqueness", crit_comparison_uniqueness);
  criterion(10, "K-truncation sandwich", crit_sandwich);
  criterion(11, "method agreement", crit_method_agreement);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
