#pragma once

// Quadratic forms on finite-dimensional subspaces of R^n.
//
// The ambient space carries the reference inner product <x, y> = x^T y.
// Each side i also carries <x, y>_i = x^T A_i y. A subspace E_1 that is a
// graph over E_0 (E_1 = { x + Bx : x in E_0 }, B : E_0 -> E_0^perp) is
// identified with E_0 through the isometry
//   U = A_1^{-1/2} (I + B) ((I + B)^* (I + B))^{-1/2} A_0^{1/2}.

#include "spectrum_forge/core.hpp"
#include "spectrum_forge/kernels.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace spectrum_forge::forms {

struct QuadFormPair {
  Matrix gram;  // A, SPD
  Matrix form;  // Q, symmetric

  void validate(bool require_psd = false) const;
  Eigen::Index dim() const { return gram.rows(); }
};

struct SubspacePair {
  Matrix basis0;  // n x N, reference-orthonormal basis of E_0
  Matrix basis1;  // n x N, reference-orthonormal basis of E_1
  Matrix b;       // n x n, B P_{E_0}: maps E_0 into E_0^perp, zero on E_0^perp
  Matrix u;       // n x n, U P_{E_0}: maps E_0 onto E_1
  Matrix u_coords;  // N x N, U in the bases above
  Vector projection_singular_values;  // of P_{E_0} restricted to E_1, descending
};

/// Throws ValidationError when E_1 is not a graph over E_0, i.e. the
/// projection E_1 -> E_0 has a singular value below `graph_tol`.
SubspacePair subspace_isometry(const Matrix& a0, const Matrix& a1, const Matrix& e0,
                               const Matrix& e1, double graph_tol = 1e-10);

/// ||q_1 o U - q_0||_inf over the <,>_0 unit sphere of E_0.
double n_spectral_difference(const QuadFormPair& side0, const Matrix& e0,
                             const QuadFormPair& side1, const Matrix& e1);

/// Same, reusing a computed pair.
double n_spectral_difference(const QuadFormPair& side0, const QuadFormPair& side1,
                             const SubspacePair& pair);

struct ClosenessReport {
  double norm_q1 = 0.0;              // ||q_1|| on (E_1, <,>_1)
  double norm_a0_minus_i = 0.0;      // ||A_0 - I||
  double norm_a1_minus_i = 0.0;      // ||A_1 - I||
  double norm_b = 0.0;               // ||B||
  double max_eigen_difference = 0.0; // max_j |lambda_j(q_1) - lambda_j(q_0)|
  double alpha5 = 0.0;               // smallest a with q_1(x+Bx) >= q_0(x) - a|x|^2
  double spectral_difference = 0.0;  // ||q_1 o U - q_0||_inf
  double target_eps = 0.0;
  bool eps_close = false;            // spectral_difference <= target_eps
};

ClosenessReport closeness_criterion_check(const QuadFormPair& side0, const Matrix& e0,
                                          const QuadFormPair& side1, const Matrix& e1,
                                          double target_eps);

/// Q-orthogonal splitting R^d = H_0 (+) H_inf with H_0 = span(e_1..e_d0) and
/// Q = S^{-T} blockdiag(diag(mu), C I) S^{-1}. The columns of S are the
/// H_0 basis followed by the H_inf basis; the H_inf vectors are rotated by
/// `skew` towards the H_0 axes listed in `mixed_pairs`.
struct PerturbationInstance {
  Vector mu;              // eigenvalues of Q_0, ascending
  Eigen::Index d_inf = 1;
  double floor = 100.0;   // C
  double skew = 0.0;      // rotation angle t
  /// (H_0 index, H_inf index) pairs mixed by the rotation.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> mixed_pairs{{0, 0}};
  Eigen::Index n_tracked = 0;  // N; 0 means N = d_0

  void validate() const;
  Eigen::Index d0() const { return mu.size(); }
  Eigen::Index dinf() const { return d_inf; }
  Eigen::Index dim() const { return d0() + dinf(); }
  Eigen::Index n() const { return n_tracked > 0 ? n_tracked : d0(); }

  Matrix skew_matrix() const;  // S
  Matrix form() const;         // Q in standard coordinates

  struct Constants {
    double m;                  // M
    std::optional<double> delta;  // mu_{N+1} - mu_N when mu_{N+1} exists
    double delta_tilde;        // min gap among distinct mu_1..mu_{N+1}
  };
  Constants constants() const;
};

struct Ct1Report {
  double floor = 0.0;
  Vector eigenvalues;         // all eigenvalues of Q, ascending
  Vector mu;                  // mu_1..mu_N
  double norm_b = 0.0;
  double max_eigen_gap = 0.0; // max_k |lambda_k(Q) - mu_k|
  double spectral_difference = 0.0;
  double surjectivity_threshold = 0.0;
  double t_bound = 0.0;       // +inf when the closed form is not defined
  double min_projection_singular_value = 0.0;
  bool min_max_domination = false;  // lambda_k(Q) <= mu_k for all k <= N
  PerturbationInstance::Constants constants{};
};

/// 4 M (1 - sqrt(M / (M + delta_tilde)))^{-2}.
double surjectivity_threshold(double m, double delta_tilde);
/// sqrt(M/C) sqrt(k) (1 - 2k sqrt(M/C) + M/C)^{-1/2}, +inf if undefined.
double t_norm_bound(double m, double c, Eigen::Index k);

Ct1Report ct1_harness(const PerturbationInstance& p);
std::vector<Ct1Report> ct1_sweep(const PerturbationInstance& p, const std::vector<double>& floors,
                                 Execution exec = Execution::Parallel);

struct SequenceRow {
  int index = 0;
  bool dominated = false;     // Q <= Q_n
  double domination_margin = 0.0;  // min eigenvalue of Q_n - Q relative to A
  double c1 = 0.0;            // largest C_1 with C_1 |x| <= |x|_n
  double c2 = 1.0;
  double eps_n = 0.0;         // smallest eps_n with |x|_n <= C_2|x| + eps_n Q(x)^{1/2} on the sample
  double spectral_difference = 0.0;
};

struct SequenceOptions {
  double c2 = 1.0;
  int samples = 4000;
  std::uint64_t seed = 0;
  Execution exec = Execution::Parallel;
};

/// `base` must have Q positive definite so the eps_n fit is finite.
std::vector<SequenceRow> sequence_difference_sweep(const QuadFormPair& base,
                                                   const std::vector<QuadFormPair>& family,
                                                   Eigen::Index n_tracked,
                                                   const SequenceOptions& options = {});

/// Form and gram on Lambda^2 R^d in the basis e_i ^ e_j (i < j, row-major),
/// with u ^ v = u (x) v - v (x) u inside R^d (x) R^d. Gram from A (x) A,
/// form from Q (x) A + A (x) Q.
QuadFormPair compound_form(const Matrix& q, const Matrix& a);

/// Coordinates of u ^ v in the e_i ^ e_j basis.
Vector wedge(const Vector& u, const Vector& v);

struct CounterexampleReport {
  double b = 0.0;
  double q_wedge = 0.0;
  double norm_sq = 0.0;
  double min_ratio = 0.0;
  double q_orthogonality = 0.0;  // max |Q_b(phi_inf^i, phi_0^j)|
};

CounterexampleReport counterexample_eval(double b);

}  // namespace spectrum_forge::forms
