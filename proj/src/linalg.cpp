#include "spectrum_forge/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace spectrum_forge::linalg {

namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ValidationError(std::string(what) + " must be a non-empty square matrix");
  }
}

// Residual scale used to turn the absolute pencil residual into a
// relative one: ||K||_inf + |lambda| ||M||_inf.
double residual_scale(const Matrix& k, const Matrix& m, double lambda) {
  const double kn = k.cwiseAbs().rowwise().sum().maxCoeff();
  const double mn = m.cwiseAbs().rowwise().sum().maxCoeff();
  return std::max(kn + std::abs(lambda) * mn, 1e-300);
}

void check_residuals(SpectralReport& report, const Matrix& k, const Matrix& m) {
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    const double scale = residual_scale(k, m, report.eigenvalues[i]);
    // The dense solvers are backward stable; allow a dimension factor.
    const double bound = report.tolerance * scale * std::max<double>(1.0, std::sqrt(k.rows()));
    if (!(report.residual_norms[i] <= bound)) {
      std::ostringstream os;
      os << "eigenpair " << i << " residual " << report.residual_norms[i]
         << " exceeds bound " << bound;
      throw NumericalError(os.str(), report.residual_norms[i]);
    }
  }
}

}  // namespace

Vector pencil_residuals(const Matrix& stiffness, const Matrix& mass, const Vector& values,
                        const Matrix& vectors) {
  Vector res(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    res[i] = (stiffness * vectors.col(i) - values[i] * (mass * vectors.col(i))).norm();
  }
  return res;
}

SpectralReport generalized_eigen(const Matrix& stiffness, const Vector& mass, double tol_eigen) {
  require_square(stiffness, "stiffness");
  if (mass.size() != stiffness.rows()) throw ValidationError("mass size mismatch");
  if ((mass.array() <= 0.0).any()) throw ValidationError("mass must be positive");

  const Vector inv_sqrt = mass.array().rsqrt();
  const Matrix c = symmetrize(inv_sqrt.asDiagonal() * stiffness * inv_sqrt.asDiagonal());
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  if (es.info() != Eigen::Success) {
    throw NumericalError("dense symmetric eigensolver did not converge", INFINITY);
  }

  SpectralReport report;
  report.eigenvalues = es.eigenvalues();
  report.eigenvectors = inv_sqrt.asDiagonal() * es.eigenvectors();
  const Matrix m = mass.asDiagonal();
  report.residual_norms = pencil_residuals(stiffness, m, report.eigenvalues, *report.eigenvectors);
  report.tolerance = tol_eigen;
  check_residuals(report, stiffness, m);
  return report;
}

SpectralReport generalized_eigen(const Matrix& stiffness, const Matrix& mass, double tol_eigen) {
  require_square(stiffness, "stiffness");
  require_square(mass, "mass");
  if (mass.rows() != stiffness.rows()) throw ValidationError("mass size mismatch");

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(symmetrize(stiffness), symmetrize(mass));
  if (es.info() != Eigen::Success) {
    throw NumericalError("generalized eigensolver failed (mass not SPD?)", INFINITY);
  }
  SpectralReport report;
  report.eigenvalues = es.eigenvalues();
  report.eigenvectors = es.eigenvectors();
  report.residual_norms =
      pencil_residuals(stiffness, mass, report.eigenvalues, *report.eigenvectors);
  report.tolerance = tol_eigen;
  check_residuals(report, stiffness, mass);
  return report;
}

Vector generalized_eigenvalues(const Matrix& stiffness, const Matrix& mass) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(symmetrize(stiffness), symmetrize(mass),
                                                      Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("generalized eigensolver failed (mass not SPD?)", INFINITY);
  }
  return es.eigenvalues();
}

Vector symmetric_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix spd_sqrt(const Matrix& a) {
  require_square(a, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("matrix is not positive definite", es.eigenvalues().minCoeff());
  }
  return es.operatorSqrt();
}

Matrix spd_inv_sqrt(const Matrix& a) {
  require_square(a, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("matrix is not positive definite", es.eigenvalues().minCoeff());
  }
  return es.operatorInverseSqrt();
}

double form_sup_norm(const Matrix& form, const Matrix& gram) {
  const Vector ev = generalized_eigenvalues(form, gram);
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

}  // namespace spectrum_forge::linalg
