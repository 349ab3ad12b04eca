// Serial reference path vs OpenMP path for each data-parallel kernel.

#include "spectrum_forge/graph_core.hpp"
#include "spectrum_forge/kernels.hpp"
#include "spectrum_forge/mixed_bc.hpp"
#include "spectrum_forge/thin_surface.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace spectrum_forge;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) ? Execution::Parallel : Execution::Serial;
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(r, c);
  for (auto& v : m.reshaped()) v = normal(rng);
  return m;
}

void BM_EdgeSensitivities(benchmark::State& state) {
  const Matrix v = random_matrix(state.range(1), state.range(1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::edge_sensitivities(v, true, exec_of(state)));
}

void BM_ForwardDifferenceJacobian(benchmark::State& state) {
  const Eigen::Index n = state.range(1);
  const Matrix a = random_matrix(n, n, 2);
  const auto f = [&](const Vector& x) -> Vector {
    Vector y = x;
    for (int k = 0; k < 20; ++k) y = (a * y).array().tanh();
    return y;
  };
  const Vector x = random_matrix(n, 1, 3);
  const Vector f0 = f(x);
  const Vector steps = Vector::Constant(n, 1e-7);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::forward_difference_jacobian(f, x, f0, steps, exec_of(state)));
}

void BM_SolveColumns(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1));
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
  const Matrix rhs = random_matrix(n, 32, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::solve_columns(ldlt, rhs, exec_of(state)));
}

void BM_EigenJacobian(benchmark::State& state) {
  const Eigen::Index n = state.range(1);
  Vector w = random_matrix(graph::DirichletGraph::edge_count(n), 1, 5).cwiseAbs();
  w.array() += 0.5;
  const auto g = graph::DirichletGraph::from_edge_weights(Vector::Ones(n), w);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        graph::eigen_jacobian(g, graph::JacobianMode::ClusterSum, 1e-8, exec_of(state)));
}

void BM_EpsilonSweep(benchmark::State& state) {
  const Eigen::Index n = state.range(1);
  const auto g = graph::DirichletGraph::uniform(n, surface::thick_measure(n), 1.0, 1.0);
  std::vector<double> eps;
  for (int k = 0; k < 16; ++k) eps.push_back(1e-3 * std::pow(0.5, k));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        surface::epsilon_sweep(g, eps, surface::MassMode::Refined, exec_of(state)));
}

void BM_WindowSweep(benchmark::State& state) {
  pde::RectangleProblem base;
  base.h = 1.0 / static_cast<double>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        pde::window_sweep(base, pde::Side::Left, {0.5, 0.25, 0.125, 0.0625}, 1, exec_of(state)));
}

}  // namespace

// First argument: 0 serial reference, 1 OpenMP.
BENCHMARK(BM_EdgeSensitivities)->ArgsProduct({{0, 1}, {64, 256}});
BENCHMARK(BM_ForwardDifferenceJacobian)->ArgsProduct({{0, 1}, {64, 128}});
BENCHMARK(BM_SolveColumns)->ArgsProduct({{0, 1}, {4096, 65536}});
BENCHMARK(BM_EigenJacobian)->ArgsProduct({{0, 1}, {8, 32}});
BENCHMARK(BM_EpsilonSweep)->ArgsProduct({{0, 1}, {8}});
BENCHMARK(BM_WindowSweep)->ArgsProduct({{0, 1}, {64}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
