#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectrum_forge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bad input: violated type invariant or operation precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its tolerance. `achieved` carries
/// the best residual (or error estimate) that was obtained.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output of every solver-facing operation.
///
/// Eigenvalues ascend. When present, eigenvector columns are orthonormal in
/// the mass inner product of the problem that produced them, and
/// residual_norms[k] = || K v_k - lambda_k M v_k ||_2.
struct SpectralReport {
  Vector eigenvalues;
  std::optional<Matrix> eigenvectors;
  Vector residual_norms;
  int iterations = 0;
  double tolerance = 0.0;
  std::vector<std::string> warnings;

  Eigen::Index size() const { return eigenvalues.size(); }
  double max_residual() const {
    return residual_norms.size() ? residual_norms.maxCoeff() : 0.0;
  }
};

/// Tolerances shared by the solvers. Defaults follow the project contract.
struct Tolerances {
  double eigen = 1e-12;     // relative eigen-residual bound
  double inverse = 1e-9;    // relative spectrum mismatch for inverse problems
  int max_iterations = 500;
};

}  // namespace spectrum_forge
