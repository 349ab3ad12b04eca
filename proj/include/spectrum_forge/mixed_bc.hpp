#pragma once

// Mixed Dirichlet/Neumann Laplace eigenproblems on rectangles, the penalized
// domain that couples a subdomain to its complement, analytic cuboid
// spectra, and the cuboid sizing used to pad a manifold to a target volume.
//
// Discretization: bilinear nodal grid with the 5-point stiffness assembled
// cell by cell (each cell contributes coeff/2 to its four edges) and a
// lumped mass (each cell gives mass*h^2/4 to its corners). On a uniform
// grid this is the 5-point Laplacian with Neumann rows equal to mirror
// ghost-node reflection; Dirichlet nodes are eliminated.

#include "spectrum_forge/core.hpp"
#include "spectrum_forge/kernels.hpp"
#include "spectrum_forge/sparse_eigen.hpp"

#include <array>
#include <vector>

namespace spectrum_forge::pde {

/// First k values of sum_i pi^2 m_i^2 / s_i^2 over m in Z_{>0}^n, ascending.
Vector cuboid_dirichlet_spectrum(const std::vector<double>& sides, int k);

struct VolumeBudget {
  int n = 3;          // ambient dimension
  double v = 0.0;     // target total volume V
  double vol_m = 0.0; // current volume
  double t = 1.0;     // spectral floor T
  double a_max = 0.0; // cap on a; <= 0 means (V - vol_M)^{1/n}

  void validate() const;
};

struct CuboidSize {
  double a = 0.0;
  double b = 0.0;
  double lambda1 = 0.0;        // pi^2 ((n-1)/a^2 + 1/b^2)
  double volume_error = 0.0;   // a^{n-1} b - (V - vol_M)
  bool floor_met = false;      // lambda1 >= 2T
};

/// a = min(a_max, pi sqrt((n-1)/(2T))), lowered by a few ulps if rounding
/// would break lambda1 >= 2T; b = (V - vol_M) / a^{n-1}.
CuboidSize volume_budget(const VolumeBudget& v);

enum class Side { Left, Right, Bottom, Top };  // x = 0, x = Lx, y = 0, y = Ly
enum class Condition { Dirichlet, Neumann };

struct NeumannWindow {
  Side side = Side::Left;
  double center = 0.5;  // coordinate along the side
  double width = 0.0;
};

struct RectangleProblem {
  double lx = 1.0;
  double ly = 1.0;
  double h = 1.0 / 64;
  std::array<Condition, 4> sides{Condition::Dirichlet, Condition::Dirichlet,
                                 Condition::Dirichlet, Condition::Dirichlet};
  std::vector<NeumannWindow> windows;

  void validate() const;
  int cells_x() const;
  int cells_y() const;
};

/// First k eigenvalues (with eigenvectors on the free nodes). A window
/// narrower than h is widened to h and reported in `warnings`.
SpectralReport rectangle_mixed_fdm(const RectangleProblem& p, int k,
                                   const linalg::SparseEigenOptions& options = {});

struct WindowRow {
  double width;
  Vector eigenvalues;
  std::vector<std::string> warnings;
};

/// Same rectangle with a single window of each width, centered on `side`.
std::vector<WindowRow> window_sweep(const RectangleProblem& base, Side side,
                                    const std::vector<double>& widths, int k,
                                    Execution exec = Execution::Parallel);

struct PenalizedProblem {
  double lx = 1.0;
  double ly = 1.0;
  double h = 1.0 / 32;
  // Omega_+ = [x0, x1] x [y0, y1], grid aligned.
  double x0 = 0.0, x1 = 0.5, y0 = 0.0, y1 = 1.0;
  // Omega_- gets stiffness eps^{n/2-1} and mass eps^{n/2}.
  int emulated_dimension = 3;

  void validate() const;
};

struct PenalizedRow {
  double eps;
  Vector eigenvalues;
  Vector reference;    // mixed problem on Omega_+ alone
  Vector difference;   // |eigenvalues - reference|
};

/// Reference: Omega_+ alone, Dirichlet on its part of the outer boundary,
/// Neumann on the interface.
SpectralReport penalized_reference(const PenalizedProblem& p, int k,
                                   const linalg::SparseEigenOptions& options = {});

SpectralReport penalized_spectrum(const PenalizedProblem& p, double eps, int k,
                                  const linalg::SparseEigenOptions& options = {});

std::vector<PenalizedRow> penalized_domain_sweep(const PenalizedProblem& p,
                                                 const std::vector<double>& eps_list, int k,
                                                 Execution exec = Execution::Parallel);

}  // namespace spectrum_forge::pde
