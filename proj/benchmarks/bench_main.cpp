#include <random>

#include <Eigen/Dense>
#include <benchmark/benchmark.h>

#include "isaacsfd/catalog.hpp"
#include "isaacsfd/solver.hpp"

using namespace isaacsfd;

namespace {

Domain unit_disk() { return Domain::ball(Eigen::Vector2d::Zero(), 1.0); }

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

void BM_GenerateLambda(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  int m = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_lambda(d, m));
  }
}
BENCHMARK(BM_GenerateLambda)->Args({2, 2})->Args({3, 2})->Args({3, 3});

void BM_DecomposeDiffusion(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  int m = static_cast<int>(state.range(1));
  DirectionSet lam = generate_lambda(d, m);
  std::mt19937_64 rng(1);
  std::vector<Eigen::MatrixXd> mats;
  for (int i = 0; i < 64; ++i) mats.push_back(random_s_delta(d, 0.25, rng));
  size_t i = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(decompose_diffusion(mats[i % 64], lam, 0.0));
    } catch (const Error&) {
    }
    ++i;
  }
}
BENCHMARK(BM_DecomposeDiffusion)->Args({2, 1})->Args({2, 3})->Args({3, 2});

void BM_BuildGrid(benchmark::State& state) {
  double h = 1.0 / static_cast<double>(state.range(0));
  Domain disk = unit_disk();
  DirectionSet lam = generate_lambda(2, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_grid(disk, h, lam));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildGrid)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_ResidualSweep(benchmark::State& state) {
  double h = 1.0 / static_cast<double>(state.range(0));
  IsaacsProblem p = make_catalog_problem("isaacs-2x2", {}, unit_disk());
  auto grid = build_grid(unit_disk(), h, generate_lambda(2, 1));
  GridFunction u = restrict_field(
      [](const Eigen::VectorXd& x) { return x.squaredNorm(); }, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual(p, u));
  }
  state.SetComplexityN(grid->interior_size());
}
BENCHMARK(BM_ResidualSweep)->RangeMultiplier(2)->Range(8, 32)->Complexity();

void BM_SolveGaussSeidel(benchmark::State& state) {
  double h = 1.0 / static_cast<double>(state.range(0));
  IsaacsProblem p = make_catalog_problem("poisson-ball", {}, unit_disk());
  auto grid = build_grid(unit_disk(), h, generate_lambda(2, 1));
  for (auto _ : state) {
    auto [v, rep] = solve(p, grid, {});
    benchmark::DoNotOptimize(rep.final_residual);
  }
}
BENCHMARK(BM_SolveGaussSeidel)->RangeMultiplier(2)->Range(8, 32)
    ->Unit(benchmark::kMillisecond);

void BM_SolveIsaacsPolicy(benchmark::State& state) {
  double h = 1.0 / static_cast<double>(state.range(0));
  IsaacsProblem p = make_catalog_problem("isaacs-2x2", {}, unit_disk());
  auto grid = build_grid(unit_disk(), h, generate_lambda(2, 1));
  SolverConfig cfg;
  cfg.method = Method::Policy;
  for (auto _ : state) {
    auto [v, rep] = solve(p, grid, cfg);
    benchmark::DoNotOptimize(rep.final_residual);
  }
}
BENCHMARK(BM_SolveIsaacsPolicy)->RangeMultiplier(2)->Range(8, 32)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
