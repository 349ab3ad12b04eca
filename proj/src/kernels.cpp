#include "spectrum_forge/kernels.hpp"

#include <omp.h>

#include <exception>

namespace spectrum_forge::kernels {

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int threads) {
  if (threads < 1) throw ValidationError("thread count must be >= 1");
  omp_set_num_threads(threads);
}

void for_each_index(Eigen::Index count, const std::function<void(Eigen::Index)>& body,
                    Execution exec) {
  if (exec == Execution::Serial) {
    for (Eigen::Index i = 0; i < count; ++i) body(i);
    return;
  }
  // Exceptions may not cross the OpenMP region; the lowest failing index
  // is rethrown so the error matches the serial path.
  std::exception_ptr first_error;
  Eigen::Index first_index = count;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(spectrum_forge_for_each_error)
      if (i < first_index) {
        first_index = i;
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

Matrix edge_sensitivities(const Matrix& vectors, bool with_boundary, Execution exec) {
  const Eigen::Index n = vectors.rows();
  const Eigen::Index k = vectors.cols();
  const Eigen::Index interior = n * (n - 1) / 2;
  Matrix out(k, interior + (with_boundary ? n : 0));

  auto fill_vertex = [&](Eigen::Index i) {
    // Offset of edge (i, i+1) in lexicographic order.
    Eigen::Index e = i * n - i * (i + 1) / 2;
    for (Eigen::Index j = i + 1; j < n; ++j, ++e) {
      out.col(e) = (vectors.row(i) - vectors.row(j)).array().square().transpose();
    }
    if (with_boundary) out.col(interior + i) = vectors.row(i).array().square().transpose();
  };

  if (exec == Execution::Serial) {
    for (Eigen::Index i = 0; i < n; ++i) fill_vertex(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i) fill_vertex(i);
  }
  return out;
}

Matrix forward_difference_jacobian(const std::function<Vector(const Vector&)>& f,
                                   const Vector& x, const Vector& f0, const Vector& steps,
                                   Execution exec) {
  Matrix jac(f0.size(), x.size());
  for_each_index(
      x.size(),
      [&](Eigen::Index e) {
        Vector xp = x;
        xp[e] += steps[e];
        jac.col(e) = (f(xp) - f0) / steps[e];
      },
      exec);
  return jac;
}

Matrix solve_columns(const Eigen::SimplicialLDLT<SparseMatrix>& factor, const Matrix& rhs,
                     Execution exec) {
  Matrix out(rhs.rows(), rhs.cols());
  if (exec == Execution::Serial) {
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) out.col(c) = factor.solve(rhs.col(c));
  } else {
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) out.col(c) = factor.solve(rhs.col(c));
  }
  return out;
}

Vector column_residuals(const SparseMatrix& a, const Matrix& x, const Vector& theta,
                        Execution exec) {
  Vector out(x.cols());
  if (exec == Execution::Serial) {
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      out[c] = (a * x.col(c) - theta[c] * x.col(c)).norm();
  } else {
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      out[c] = (a * x.col(c) - theta[c] * x.col(c)).norm();
  }
  return out;
}

}  // namespace spectrum_forge::kernels
