#include "spectrum_forge/form_calculus.hpp"
#include "spectrum_forge/graph_core.hpp"
#include "spectrum_forge/kernels.hpp"
#include "spectrum_forge/sparse_eigen.hpp"
#include "spectrum_forge/thin_surface.hpp"

#include <doctest.h>

#include <random>

using namespace spectrum_forge;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> normal;
  Matrix m(r, c);
  for (auto& v : m.reshaped()) v = normal(rng);
  return m;
}

SparseMatrix laplacian_1d(int n) {
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
  return a;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
  std::mt19937_64 rng(42);
  const Matrix v = random_matrix(rng, 9, 6);
  CHECK(kernels::edge_sensitivities(v, true, Execution::Serial) ==
        kernels::edge_sensitivities(v, true, Execution::Parallel));
  CHECK(kernels::edge_sensitivities(v, false, Execution::Serial) ==
        kernels::edge_sensitivities(v, false, Execution::Parallel));

  const Matrix a = random_matrix(rng, 7, 7);
  const auto f = [&](const Vector& x) -> Vector { return (a * x).array().sin(); };
  const Vector x = random_matrix(rng, 7, 1);
  const Vector steps = Vector::Constant(7, 1e-7);
  CHECK(kernels::forward_difference_jacobian(f, x, f(x), steps, Execution::Serial) ==
        kernels::forward_difference_jacobian(f, x, f(x), steps, Execution::Parallel));

  const SparseMatrix lap = laplacian_1d(50);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(lap);
  const Matrix rhs = random_matrix(rng, 50, 8);
  const Matrix xs = kernels::solve_columns(ldlt, rhs, Execution::Serial);
  CHECK(xs == kernels::solve_columns(ldlt, rhs, Execution::Parallel));
  CHECK((lap * xs - rhs).norm() < 1e-10);
  const Vector theta = random_matrix(rng, 8, 1);
  CHECK(kernels::column_residuals(lap, xs, theta, Execution::Serial) ==
        kernels::column_residuals(lap, xs, theta, Execution::Parallel));
}

TEST_CASE("edge sensitivities layout") {
  Matrix v(3, 1);
  v << 1, 2, 4;
  const Matrix s = kernels::edge_sensitivities(v, true, Execution::Serial);
  REQUIRE(s.cols() == 6);
  CHECK(s(0, 0) == 1.0);   // (0, 1)
  CHECK(s(0, 1) == 9.0);   // (0, 2)
  CHECK(s(0, 2) == 4.0);   // (1, 2)
  CHECK(s(0, 3) == 1.0);
  CHECK(s(0, 5) == 16.0);
}

TEST_CASE("parallel loops rethrow the lowest failing index") {
  for (auto exec : {Execution::Serial, Execution::Parallel}) {
    try {
      kernels::for_each_index(
          100,
          [](Eigen::Index i) {
            if (i % 10 == 3) throw ValidationError("index " + std::to_string(i));
          },
          exec);
      FAIL("expected an exception");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()) == "index 3");
    }
  }
}

TEST_CASE("module-level results do not depend on the execution path") {
  const auto g = graph::DirichletGraph::uniform(6, 1.0, 0.8, 1.7);
  auto g2 = g;
  g2.interior(0, 3) = g2.interior(3, 0) = 1.9;
  CHECK(graph::eigen_jacobian(g2, graph::JacobianMode::ClusterSum, 1e-8, Execution::Serial) ==
        graph::eigen_jacobian(g2, graph::JacobianMode::ClusterSum, 1e-8, Execution::Parallel));

  const std::vector<double> eps{1e-2, 1e-3, 1e-4};
  const auto a = surface::epsilon_sweep(g, eps, surface::MassMode::Refined, Execution::Serial);
  const auto b = surface::epsilon_sweep(g, eps, surface::MassMode::Refined, Execution::Parallel);
  for (size_t i = 0; i < eps.size(); ++i) {
    CHECK(a[i].scaled_eigenvalues == b[i].scaled_eigenvalues);
    CHECK(a[i].form_difference == b[i].form_difference);
  }

  forms::PerturbationInstance p;
  p.mu = Vector(2);
  p.mu << 1, 2;
  p.skew = 0.3;
  const auto s = forms::ct1_sweep(p, {1e2, 1e3}, Execution::Serial);
  const auto q = forms::ct1_sweep(p, {1e2, 1e3}, Execution::Parallel);
  for (size_t i = 0; i < s.size(); ++i) CHECK(s[i].spectral_difference == q[i].spectral_difference);

  Vector t(4);
  t << 0.5, 1, 2, 4;
  graph::InverseOptions so, po;
  so.exec = Execution::Serial;
  po.exec = Execution::Parallel;
  CHECK(graph::prescribe_weights({t}, Vector::Ones(4), so).edge_weights() ==
        graph::prescribe_weights({t}, Vector::Ones(4), po).edge_weights());
}

TEST_CASE("sparse eigensolver") {
  const int n = 200;
  const SparseMatrix lap = laplacian_1d(n);
  linalg::SparseEigenOptions opt;
  const auto rep = linalg::smallest_eigenpairs(lap, Vector::Ones(n), 3, opt);
  for (int k = 0; k < 3; ++k) {
    const double s = std::sin((k + 1) * 3.14159265358979323846 / (2.0 * (n + 1)));
    CHECK(rep.eigenvalues[k] == doctest::Approx(4 * s * s).epsilon(1e-9));
  }
  opt.exec = Execution::Serial;
  CHECK(linalg::smallest_eigenpairs(lap, Vector::Ones(n), 3, opt).eigenvalues == rep.eigenvalues);
}

TEST_CASE("thread count control") {
  const int before = kernels::thread_count();
  kernels::set_thread_count(2);
  CHECK(kernels::thread_count() == 2);
  kernels::set_thread_count(before);
  CHECK_THROWS_AS(kernels::set_thread_count(0), ValidationError);
}
