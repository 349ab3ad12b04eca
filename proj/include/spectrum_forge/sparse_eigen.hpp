#pragma once

#include "spectrum_forge/core.hpp"
#include "spectrum_forge/kernels.hpp"

#include <cstdint>

namespace spectrum_forge::linalg {

struct SparseEigenOptions {
  double tolerance = 1e-10;  // relative Ritz residual ||A x - theta x|| / theta
  int max_iterations = 1000;
  int extra_vectors = 8;     // block size = max(2k, k + extra_vectors)
  std::uint64_t seed = 0x5eedULL;
  Execution exec = Execution::Parallel;
};

/// The k smallest eigenpairs of the sparse SPD pencil (K, diag(mass)).
///
/// Subspace iteration on (M^{-1/2} K M^{-1/2})^{-1} with a sparse LDL^T
/// factorization and Rayleigh-Ritz projection; repeated eigenvalues are
/// resolved as long as the block is larger than the cluster.
SpectralReport smallest_eigenpairs(const SparseMatrix& stiffness, const Vector& mass, int k,
                                   const SparseEigenOptions& options = {});

}  // namespace spectrum_forge::linalg
