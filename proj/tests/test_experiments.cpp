#include <cmath>
#include <sstream>

#include "doctest.h"
#include "isaacsfd/catalog.hpp"
#include "isaacsfd/experiments.hpp"

using namespace isaacsfd;

namespace {

Domain unit_disk() { return Domain::ball(Eigen::Vector2d::Zero(), 1.0); }

}  // namespace

TEST_CASE("fit_rate recovers planted exponents") {
  std::vector<std::pair<double, double>> linear, quadratic, mixed;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    linear.emplace_back(h, 3.0 * h);
    quadratic.emplace_back(h, 0.7 * h * h);
    mixed.emplace_back(h, 2.0 * h + 5.0 * h * h);
  }
  auto [b1, r1] = fit_rate(linear);
  CHECK(b1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r1 < 1e-10);
  auto [b2, r2] = fit_rate(quadratic);
  CHECK(b2 == doctest::Approx(2.0).epsilon(1e-10));
  auto [bm, rm] = fit_rate(mixed);
  CHECK(bm > 1.0);
  CHECK(bm < 2.0);
}

TEST_CASE("fit_rate rejects degenerate inputs") {
  std::vector<std::pair<double, double>> two = {{0.1, 0.1}, {0.05, 0.05}};
  CHECK_THROWS_AS(fit_rate(two), Error);
  std::vector<std::pair<double, double>> with_zero = {
      {0.2, 0.1}, {0.1, 0.0}, {0.05, 0.01}};
  try {
    fit_rate(with_zero);
    FAIL("expected DegenerateFit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateFit);
  }
}

TEST_CASE("convergence study on the 1d Poisson problem") {
  IsaacsProblem p =
      make_catalog_problem("poisson-ball", {}, Domain::interval(-1.0, 1.0));
  ExperimentConfig config(std::move(p));
  config.h_list = {0.2, 0.1, 0.05, 0.025};
  ConvergenceTable table = run_convergence(config);

  REQUIRE(table.rows.size() == 4);
  CHECK(table.all_converged);
  for (size_t i = 1; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].error < table.rows[i - 1].error);
  }
  REQUIRE(table.rate_defined);
  CHECK(table.fitted_rate >= 0.8);
}

TEST_CASE("manufactured zero solution reports exact-to-tolerance") {
  // v = 0 manufactured into isaacs-2x2: all forcings vanish, v_h = 0.
  IsaacsProblem base = make_catalog_problem("isaacs-2x2", {}, unit_disk());
  SmoothField zero;
  zero.value = constant_scalar(0.0);
  zero.gradient = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Zero(x.size()).eval();
  };
  zero.hessian = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Zero(x.size(), x.size()).eval();
  };
  ExperimentConfig config(manufacture(zero, base));
  config.h_list = {0.4, 0.2};
  ConvergenceTable table = run_convergence(config);
  CHECK(table.exact_to_tolerance);
  CHECK(!table.rate_defined);
  for (const auto& row : table.rows) {
    CHECK(row.error <= 10.0 * table.tol_used);
  }
}

TEST_CASE("finest reference requires nested lattices") {
  IsaacsProblem p = make_catalog_problem("variable-linear", {}, unit_disk());
  ExperimentConfig config(std::move(p));
  config.reference = ReferenceMode::Finest;
  config.h_list = {0.3, 0.2, 0.1};  // 0.3 / 0.1 = 3, 0.2 / 0.1 = 2: nested
  ConvergenceTable ok = run_convergence(config);
  CHECK(ok.rows.back().error == 0.0);  // finest vs itself
  CHECK(ok.rows[0].error > 0.0);

  config.h_list = {0.25, 0.1};  // 2.5 not an integer
  try {
    run_convergence(config);
    FAIL("expected NonNestedGrids");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonNestedGrids);
  }
}

TEST_CASE("finest-reference errors shrink for the variable problem") {
  IsaacsProblem p = make_catalog_problem("variable-linear", {}, unit_disk());
  ExperimentConfig config(std::move(p));
  config.reference = ReferenceMode::Finest;
  config.h_list = {0.4, 0.2, 0.1, 0.05};
  ConvergenceTable table = run_convergence(config);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.rows[1].error < table.rows[0].error);
  CHECK(table.rows[2].error < table.rows[1].error);
}

TEST_CASE("d=3 poisson ball converges against the exact solution") {
  Domain ball = Domain::ball(Eigen::Vector3d::Zero(), 1.0);
  ExperimentConfig config(make_catalog_problem("poisson-ball", {}, ball));
  config.h_list = {0.25, 0.125};
  ConvergenceTable table = run_convergence(config);
  REQUIRE(table.all_converged);
  CHECK(table.rows[1].error < table.rows[0].error);
  CHECK(table.rows[0].error < 0.2);
}

TEST_CASE("isaacs-2x2 self-convergence has a positive rate") {
  ExperimentConfig config(make_catalog_problem("isaacs-2x2", {}, unit_disk()));
  config.reference = ReferenceMode::Finest;
  config.h_list = {0.4, 0.2, 0.1, 0.05};
  config.solver.method = Method::Policy;
  ConvergenceTable table = run_convergence(config);
  REQUIRE(table.all_converged);
  for (size_t i = 1; i + 1 < table.rows.size(); ++i) {
    CHECK(table.rows[i].error < table.rows[i - 1].error);
  }
  REQUIRE(table.rate_defined);  // three positive-error rows against the finest
  CHECK(table.fitted_rate > 0.0);
}

TEST_CASE("exact reference requires a known solution") {
  IsaacsProblem p = make_catalog_problem("variable-linear", {}, unit_disk());
  ExperimentConfig config(std::move(p));
  config.h_list = {0.2, 0.1};
  try {
    run_convergence(config);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
}

TEST_CASE("h list must be strictly decreasing") {
  IsaacsProblem p = make_catalog_problem("poisson-ball", {}, unit_disk());
  ExperimentConfig config(std::move(p));
  config.h_list = {0.1, 0.2};
  CHECK_THROWS_AS(run_convergence(config), Error);
  config.h_list = {0.1};
  CHECK_THROWS_AS(run_convergence(config), Error);
}

TEST_CASE("convergence CSV layout and timing switch") {
  IsaacsProblem p =
      make_catalog_problem("poisson-ball", {}, Domain::interval(-1.0, 1.0));
  ExperimentConfig config(std::move(p));
  config.h_list = {0.2, 0.1, 0.05};
  ConvergenceTable table = run_convergence(config);

  std::ostringstream os;
  write_convergence_csv(table, os, false);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "h,n_grid,n_interior,error,iterations,seconds");
  int rows = 0;
  bool saw_rate = false, saw_residual = false;
  while (std::getline(is, line)) {
    if (line.rfind("# fitted_rate=", 0) == 0) {
      saw_rate = true;
    } else if (line.rfind("# fit_residual=", 0) == 0) {
      saw_residual = true;
    } else {
      ++rows;
      CHECK(line.substr(line.size() - 2) == ",0");  // timing zeroed
    }
  }
  CHECK(rows == 3);
  CHECK(saw_rate);
  CHECK(saw_residual);
}

TEST_CASE("sandwich experiment on isaacs-2x2") {
  IsaacsProblem p = make_catalog_problem("isaacs-2x2", {}, unit_disk());
  ExperimentConfig config(std::move(p));
  config.h_list = {0.2};
  config.solver.method = Method::Policy;
  SandwichReport rep = run_sandwich(config, {0.0, 1.0, 4.0});

  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.ordering_ok);
  CHECK(rep.monotone_ok);
  CHECK(rep.all_converged);
  CHECK(rep.entries[0].sup_gap >= rep.entries[1].sup_gap - 1e-12);
  CHECK(rep.entries[1].sup_gap >= rep.entries[2].sup_gap - 1e-12);
  // K = 4 swamps this problem: both truncations inactive, solutions equal.
  CHECK(rep.entries[2].truncation_inactive_upper);
  CHECK(rep.entries[2].truncation_inactive_lower);
  CHECK(rep.entries[2].sup_dev_upper <= 10.0 * rep.tol_used);
  CHECK(rep.entries[2].sup_dev_lower <= 10.0 * rep.tol_used);

  std::ostringstream os;
  write_sandwich_csv(rep, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "K,sup_gap,ordering_ok");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.substr(line.size() - 2) == ",1");
  }
  CHECK(rows == 3);
}

TEST_CASE("sandwich gap is nonincreasing on every catalog problem") {
  for (const auto& name : catalog_names()) {
    ExperimentConfig config(make_catalog_problem(name, {}, unit_disk()));
    config.h_list = {0.25};
    config.solver.method = Method::Policy;
    SandwichReport rep = run_sandwich(config, {0.0, 1.0, 4.0});
    CHECK(rep.all_converged);
    CHECK(rep.ordering_ok);
    CHECK(rep.monotone_ok);
    for (size_t i = 1; i < rep.entries.size(); ++i) {
      CHECK(rep.entries[i].sup_gap <=
            rep.entries[i - 1].sup_gap + 10.0 * rep.tol_used);
    }
  }
}

TEST_CASE("sandwich rejects bad K lists") {
  IsaacsProblem p = make_catalog_problem("isaacs-2x2", {}, unit_disk());
  ExperimentConfig config(std::move(p));
  config.h_list = {0.25};
  CHECK_THROWS_AS(run_sandwich(config, {}), Error);
  CHECK_THROWS_AS(run_sandwich(config, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(run_sandwich(config, {-1.0, 1.0}), Error);
}
