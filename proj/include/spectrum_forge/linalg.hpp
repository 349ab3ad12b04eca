#pragma once

#include "spectrum_forge/core.hpp"

namespace spectrum_forge::linalg {

/// Dense symmetric-definite pencil (K, diag(mass)). Solved by the diagonal
/// Cholesky transform mass^{-1/2} K mass^{-1/2}.
SpectralReport generalized_eigen(const Matrix& stiffness, const Vector& mass,
                                 double tol_eigen = 1e-12);

/// Dense symmetric-definite pencil (K, M) with a full SPD mass matrix.
SpectralReport generalized_eigen(const Matrix& stiffness, const Matrix& mass,
                                 double tol_eigen = 1e-12);

/// Eigenvalues only, ascending. No residual checks.
Vector generalized_eigenvalues(const Matrix& stiffness, const Matrix& mass);

Vector symmetric_eigenvalues(const Matrix& a);

/// Principal square root and inverse square root of an SPD matrix.
/// Throws NumericalError when the matrix is not positive definite.
Matrix spd_sqrt(const Matrix& a);
Matrix spd_inv_sqrt(const Matrix& a);

/// sup over { x : x^T gram x = 1 } of |x^T form x|, i.e. the largest
/// |generalized eigenvalue| of (form, gram).
double form_sup_norm(const Matrix& form, const Matrix& gram);

double spectral_norm(const Matrix& a);

bool is_symmetric(const Matrix& a, double rel_tol = 1e-12);

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

/// Residual norms ||K v_k - lambda_k M v_k|| for the columns of `vectors`.
Vector pencil_residuals(const Matrix& stiffness, const Matrix& mass,
                        const Vector& values, const Matrix& vectors);

}  // namespace spectrum_forge::linalg
