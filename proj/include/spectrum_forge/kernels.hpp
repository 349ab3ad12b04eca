#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP path and a serial
// reference path selected by `Execution`; both compute each output element
// with the same arithmetic, so results agree bit for bit and do not depend
// on the thread count.

#include "spectrum_forge/core.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <functional>

namespace spectrum_forge {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Execution { Serial, Parallel };

namespace kernels {

/// Number of OpenMP threads used by Execution::Parallel (>= 1).
int thread_count();
void set_thread_count(int threads);

/// Runs body(i) for i in [0, count). Iterations must be independent.
void for_each_index(Eigen::Index count, const std::function<void(Eigen::Index)>& body,
                    Execution exec = Execution::Parallel);

/// Squared edge differences of eigenvectors on the graph G_N.
///
/// `vectors` is N x K (one eigenvector per column). Output is K x |E| with
/// interior edges (i < j, lexicographic) first, then, if `with_boundary`,
/// one pendant edge per vertex:
///   (i, j) -> (v_k(i) - v_k(j))^2,   (i, u_i) -> v_k(i)^2.
Matrix edge_sensitivities(const Matrix& vectors, bool with_boundary,
                          Execution exec = Execution::Parallel);

/// Forward-difference Jacobian of f at x: column e is
/// (f(x + steps[e] e_e) - f0) / steps[e].
Matrix forward_difference_jacobian(const std::function<Vector(const Vector&)>& f,
                                   const Vector& x, const Vector& f0, const Vector& steps,
                                   Execution exec = Execution::Parallel);

/// Solves A X = B column by column with a prefactored sparse LDL^T.
Matrix solve_columns(const Eigen::SimplicialLDLT<SparseMatrix>& factor, const Matrix& rhs,
                     Execution exec = Execution::Parallel);

/// Column residuals ||A x_i - theta_i x_i||.
Vector column_residuals(const SparseMatrix& a, const Matrix& x, const Vector& theta,
                        Execution exec = Execution::Parallel);

}  // namespace kernels
}  // namespace spectrum_forge
