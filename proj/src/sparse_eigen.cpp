#include "spectrum_forge/sparse_eigen.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>

namespace spectrum_forge::linalg {

SpectralReport smallest_eigenpairs(const SparseMatrix& stiffness, const Vector& mass, int k,
                                   const SparseEigenOptions& options) {
  const Eigen::Index n = stiffness.rows();
  if (stiffness.cols() != n || mass.size() != n) throw ValidationError("pencil size mismatch");
  if (k < 1 || k > n) throw ValidationError("requested eigenpair count out of range");
  if ((mass.array() <= 0.0).any()) throw ValidationError("mass must be positive");

  const Vector scale = mass.array().rsqrt();
  const SparseMatrix a = scale.asDiagonal() * stiffness * scale.asDiagonal();

  Eigen::SimplicialLDLT<SparseMatrix> factor(a);
  if (factor.info() != Eigen::Success) {
    throw NumericalError("sparse LDL^T factorization failed (operator singular?)", INFINITY);
  }

  const Eigen::Index block =
      std::min<Eigen::Index>(n, std::max<Eigen::Index>(2 * k, k + options.extra_vectors));

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);

  Vector theta;
  Matrix ritz;
  Vector res;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    Matrix y = kernels::solve_columns(factor, x, options.exec);
    Eigen::HouseholderQR<Matrix> qr(y);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, block);
    const Matrix aq = a * q;
    const Matrix h = 0.5 * (q.transpose() * aq + (q.transpose() * aq).transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    theta = es.eigenvalues();
    ritz = q * es.eigenvectors();
    x = ritz;

    res = kernels::column_residuals(a, ritz.leftCols(k), theta.head(k), options.exec);
    bool done = true;
    for (int i = 0; i < k; ++i) {
      if (res[i] > options.tolerance * std::max(std::abs(theta[i]), 1e-300)) {
        done = false;
        break;
      }
    }
    if (done) break;
  }
  if (it == options.max_iterations) {
    throw NumericalError("subspace iteration did not converge", res.head(k).maxCoeff());
  }

  SpectralReport report;
  report.eigenvalues = theta.head(k);
  Matrix vectors = scale.asDiagonal() * ritz.leftCols(k);
  report.residual_norms.resize(k);
  for (int i = 0; i < k; ++i) {
    report.residual_norms[i] =
        (stiffness * vectors.col(i) - report.eigenvalues[i] * mass.cwiseProduct(vectors.col(i)))
            .norm();
  }
  report.eigenvectors = std::move(vectors);
  report.iterations = it + 1;
  report.tolerance = options.tolerance;
  return report;
}

}  // namespace spectrum_forge::linalg
