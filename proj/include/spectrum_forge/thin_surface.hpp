#pragma once

// Finite-dimensional model of the hyperbolic surface built from a weighted
// G_N. Vertex i is a thick part (a chain of pants); edge (i, j) is a full
// collar with coefficient pi*eps*theta_ij; the pendant edge of i is a half
// collar with coefficient (pi*eps/2)*theta_i ending on the Dirichlet
// boundary. The state space is the N-dimensional family of functions that
// are constant on thick parts and harmonic on collars. Its stiffness is
// exact (capacities); its mass is either the leading-order measure mu_0 or
// the exact Gram matrix of the family.

#include "spectrum_forge/core.hpp"
#include "spectrum_forge/graph_core.hpp"
#include "spectrum_forge/kernels.hpp"

#include <vector>

namespace spectrum_forge::surface {

enum class MassMode { Leading, Refined };

/// Thick-part measure 2 pi (N - 2), clamped to 2 pi for N < 3.
double thick_measure(Eigen::Index n);

/// The measure mu_0 on G_N as a vector.
Vector reference_measure(Eigen::Index n);

struct ThinSurfaceModel {
  graph::DirichletGraph graph;
  double eps = 0.0;
  MassMode mode = MassMode::Refined;
  Matrix stiffness;
  Matrix mass;

  Eigen::Index size() const { return stiffness.rows(); }
  /// True when N < 3: the pants count N - 2 degenerates and the model is a
  /// formal analogue.
  bool formal_analogue() const { return size() < 3; }
};

/// Quadratic form on H, written in coordinates; `inner_product` is the
/// diagonal of mu_0.
struct FormOnH {
  Matrix matrix;
  Vector inner_product;

  /// Eigenvalues of the form relative to the inner product, ascending.
  Vector spectrum() const;
  /// sup over the inner-product unit sphere of |form(x)|.
  double sup_norm() const;
};

/// Largest eps with every collar admissible (pi eps theta_ij < 1 and
/// (pi eps / 2) theta_i < 1), i.e. the open bound.
double max_admissible_eps(const graph::DirichletGraph& g);

ThinSurfaceModel assemble_model(const graph::DirichletGraph& g, double eps,
                                MassMode mode = MassMode::Refined);

SpectralReport model_spectrum(const ThinSurfaceModel& m, const Tolerances& tol = {});

/// The model form transported to (H, mu_0) by the canonical isometry:
/// A0^{1/2} M^{-1/2} K M^{-1/2} A0^{1/2}, A0 = diag(mu_0).
FormOnH transport_form(const ThinSurfaceModel& m);

/// The graph form q_Theta on (H, mu_0).
FormOnH graph_form(const graph::DirichletGraph& g);

struct SweepRow {
  double eps;
  Vector scaled_eigenvalues;  // (1/eps) lambda_k(model)
  double form_difference;     // || (1/eps) transport_form - q_Theta ||_inf
};

std::vector<SweepRow> epsilon_sweep(const graph::DirichletGraph& g,
                                    const std::vector<double>& eps_list,
                                    MassMode mode = MassMode::Refined,
                                    Execution exec = Execution::Parallel);

/// The linear map Theta -> q_Theta as an |E| x |E| matrix, rows indexed by
/// the upper-triangular entries (i <= j, row-major) of the form matrix.
Matrix form_map_matrix(Eigen::Index n);

/// Upper-triangular entries (i <= j, row-major) of a symmetric matrix.
Vector upper_entries(const Matrix& a);

struct PrescriptionOptions {
  MassMode mode = MassMode::Refined;
  graph::InverseOptions inverse;
  double residual_tolerance = 1e-9;  // Frobenius norm of the form mismatch
  int max_iterations = 50;
  Execution exec = Execution::Parallel;
};

struct PrescriptionResult {
  graph::DirichletGraph graph_target;   // Theta with spectrum = target on (H, mu_0)
  graph::DirichletGraph surface_graph;  // Theta' with (1/eps) q^eps_{Theta'} = q_Theta
  double residual = 0.0;
  std::vector<double> residual_history;
  int iterations = 0;
};

/// Newton iteration on Theta' for (1/eps) transport_form(Theta', eps) = q_Theta.
PrescriptionResult solve_prescription(const graph::SpectrumTarget& target, double eps,
                                      const PrescriptionOptions& options = {});

}  // namespace spectrum_forge::surface
