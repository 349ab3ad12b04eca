#pragma once

// Forward and inverse Dirichlet spectra of the weighted graph G_N: the
// complete graph on N interior vertices v_i, plus one boundary vertex u_i
// hanging off each v_i. Functions vanish on the u_i, so the state space is
// R^N (values at interior vertices) with the inner product sum mu_i f_i g_i
// and the form
//   q(f) = sum_{i<j} theta_ij (f_i - f_j)^2 + sum_i theta_i f_i^2.

#include "spectrum_forge/core.hpp"
#include "spectrum_forge/kernels.hpp"

#include <cstdint>

namespace spectrum_forge::graph {

struct DirichletGraph {
  Vector mu;        // vertex measure, size N
  Matrix interior;  // symmetric N x N, zero diagonal; interior(i, j) = theta_ij
  Vector boundary;  // theta_i for the pendant edge (v_i, u_i)

  Eigen::Index size() const { return mu.size(); }

  /// Throws ValidationError unless every weight and measure is positive and
  /// the shapes agree.
  void validate() const;

  /// |E| = N(N+1)/2.
  static Eigen::Index edge_count(Eigen::Index n) { return n * (n + 1) / 2; }

  /// Edge weights in canonical order: theta_ij for i < j lexicographically,
  /// then theta_1 .. theta_N.
  Vector edge_weights() const;
  static DirichletGraph from_edge_weights(const Vector& mu, const Vector& weights);

  static DirichletGraph uniform(Eigen::Index n, double mu, double theta_interior,
                                double theta_boundary);
};

/// Sorted target a_1 < a_2 <= ... <= a_N, all positive.
struct SpectrumTarget {
  Vector values;
  void validate() const;
};

struct StiffnessMass {
  Matrix stiffness;
  Vector mass;  // diagonal of the mass matrix
};

/// Matrix of the form on interior coordinates and the diagonal measure.
StiffnessMass stiffness_mass(const DirichletGraph& g);

/// All N generalized eigenpairs of (K, diag(mu)), eigenvectors mu-orthonormal.
SpectralReport forward_spectrum(const DirichletGraph& g, const Tolerances& tol = {});

enum class JacobianMode {
  Simple,      // every eigenvalue must be simple
  ClusterSum,  // rows of a degenerate cluster hold d(sum of the cluster)/d theta
};

/// d lambda_k / d theta_e, N x |E| in canonical edge order.
Matrix eigen_jacobian(const DirichletGraph& g, JacobianMode mode = JacobianMode::Simple,
                      double cluster_tol = 1e-8, Execution exec = Execution::Parallel);

struct InverseOptions {
  Tolerances tol;
  int restarts = 8;          // jittered restarts after the deterministic start
  double jitter = 0.5;       // log-normal sigma of the restart jitter
  std::uint64_t seed = 0;
  /// Absolute eigenvalue tolerance; when <= 0 it is tol.inverse * max(gaps).
  double absolute_tolerance = 0.0;
  Execution exec = Execution::Parallel;
};

struct CompleteGraphSolution {
  Matrix weights;       // symmetric N x N, zero diagonal
  double max_error = 0; // max_k |lambda_k - gaps_k|
  int iterations = 0;
  int attempt = 0;      // 0 = deterministic start, r > 0 = restart r
};

/// Weights theta'_ij > 0 on the complete graph (no boundary edges) whose
/// Laplacian with measure mu has spectrum `gaps` (gaps[0] == 0).
CompleteGraphSolution complete_graph_inverse(const Vector& gaps, const Vector& mu,
                                             const InverseOptions& options = {});

/// Graph on G_N with measure mu and forward spectrum `target`: solve the
/// complete-graph problem for {0, a_2 - a_1, ..., a_N - a_1} and put
/// theta_i = a_1 mu_i on the pendant edges.
DirichletGraph prescribe_weights(const SpectrumTarget& target, const Vector& mu,
                                 const InverseOptions& options = {});

}  // namespace spectrum_forge::graph
