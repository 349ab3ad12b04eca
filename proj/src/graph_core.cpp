#include "spectrum_forge/graph_core.hpp"

#include "spectrum_forge/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace spectrum_forge::graph {

void DirichletGraph::validate() const {
  const Eigen::Index n = mu.size();
  if (n < 1) throw ValidationError("graph needs at least one interior vertex");
  if (interior.rows() != n || interior.cols() != n)
    throw ValidationError("interior weight matrix must be N x N");
  if (boundary.size() != n) throw ValidationError("boundary weights must have length N");
  if (!(mu.array() > 0.0).all()) throw ValidationError("vertex measure must be positive");
  if (!(boundary.array() > 0.0).all()) throw ValidationError("boundary weights must be positive");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!(interior(i, j) > 0.0)) {
        std::ostringstream os;
        os << "interior weight (" << i << ", " << j << ") must be positive";
        throw ValidationError(os.str());
      }
      if (interior(i, j) != interior(j, i))
        throw ValidationError("interior weight matrix must be symmetric");
    }
  }
  if (!mu.allFinite() || !boundary.allFinite() || !interior.allFinite())
    throw ValidationError("graph data must be finite");
}

Vector DirichletGraph::edge_weights() const {
  const Eigen::Index n = size();
  Vector w(edge_count(n));
  Eigen::Index e = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) w[e++] = interior(i, j);
  w.tail(n) = boundary;
  return w;
}

DirichletGraph DirichletGraph::from_edge_weights(const Vector& mu, const Vector& weights) {
  const Eigen::Index n = mu.size();
  if (weights.size() != edge_count(n)) throw ValidationError("edge weight count must be N(N+1)/2");
  DirichletGraph g;
  g.mu = mu;
  g.interior = Matrix::Zero(n, n);
  Eigen::Index e = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) g.interior(i, j) = g.interior(j, i) = weights[e++];
  g.boundary = weights.tail(n);
  return g;
}

DirichletGraph DirichletGraph::uniform(Eigen::Index n, double mu, double theta_interior,
                                       double theta_boundary) {
  DirichletGraph g;
  g.mu = Vector::Constant(n, mu);
  g.interior = Matrix::Constant(n, n, theta_interior);
  g.interior.diagonal().setZero();
  g.boundary = Vector::Constant(n, theta_boundary);
  return g;
}

void SpectrumTarget::validate() const {
  if (values.size() < 1) throw ValidationError("target spectrum is empty");
  if (!values.allFinite()) throw ValidationError("target spectrum must be finite");
  if (!(values[0] > 0.0)) throw ValidationError("target a_1 must be positive");
  if (values.size() > 1 && !(values[1] > values[0]))
    throw ValidationError("target must have a strict first gap a_1 < a_2");
  for (Eigen::Index k = 2; k < values.size(); ++k)
    if (values[k] < values[k - 1]) throw ValidationError("target must be sorted ascending");
}

namespace {

// Laplacian-type matrix sum_{i<j} w_ij (e_i - e_j)(e_i - e_j)^T + diag(b).
Matrix assemble(const Matrix& interior, const Vector& boundary) {
  const Eigen::Index n = interior.rows();
  Matrix k = -interior;
  k.diagonal().setZero();
  for (Eigen::Index i = 0; i < n; ++i) k(i, i) = interior.row(i).sum() - interior(i, i);
  if (boundary.size()) k.diagonal() += boundary;
  return k;
}

}  // namespace

StiffnessMass stiffness_mass(const DirichletGraph& g) {
  g.validate();
  return {assemble(g.interior, g.boundary), g.mu};
}

SpectralReport forward_spectrum(const DirichletGraph& g, const Tolerances& tol) {
  const auto [k, m] = stiffness_mass(g);
  return linalg::generalized_eigen(k, m, tol.eigen);
}

Matrix eigen_jacobian(const DirichletGraph& g, JacobianMode mode, double cluster_tol,
                      Execution exec) {
  const SpectralReport rep = forward_spectrum(g);
  const Vector& lam = rep.eigenvalues;
  Matrix jac = kernels::edge_sensitivities(*rep.eigenvectors, true, exec);

  const Eigen::Index n = lam.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n &&
           lam[end] - lam[end - 1] <= cluster_tol * std::max(1.0, std::abs(lam[end])))
      ++end;
    if (end - start > 1) {
      if (mode == JacobianMode::Simple) {
        std::ostringstream os;
        os << "eigenvalues " << start << ".." << end - 1 << " form a degenerate cluster near "
           << lam[start] << "; request JacobianMode::ClusterSum";
        throw ValidationError(os.str());
      }
      const Eigen::RowVectorXd sum = jac.middleRows(start, end - start).colwise().sum();
      for (Eigen::Index r = start; r < end; ++r) jac.row(r) = sum;
    }
    start = end;
  }
  return jac;
}

namespace {

// Residual layout for a sorted target with repeated values: a singleton
// contributes lambda_k - t_k; a cluster [s, e) contributes the sum
// residual followed by the consecutive in-cluster gaps.
struct ResidualMap {
  struct Block {
    Eigen::Index start, end;
  };
  std::vector<Block> blocks;
  Eigen::Index rows = 0;

  explicit ResidualMap(const Vector& target) {
    const double scale = std::max(target.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::Index s = 0;
    while (s < target.size()) {
      Eigen::Index e = s + 1;
      while (e < target.size() && target[e] - target[e - 1] <= 1e-12 * scale) ++e;
      blocks.push_back({s, e});
      rows += e - s;
      s = e;
    }
  }

  Vector residual(const Vector& lam, const Vector& target) const {
    Vector r(rows);
    Eigen::Index row = 0;
    for (const auto& b : blocks) {
      const Eigen::Index m = b.end - b.start;
      r[row++] = lam.segment(b.start, m).sum() - target.segment(b.start, m).sum();
      for (Eigen::Index k = b.start; k + 1 < b.end; ++k) r[row++] = lam[k + 1] - lam[k];
    }
    return r;
  }

  Matrix jacobian(const Matrix& rows_per_eigen) const {
    Matrix j(rows, rows_per_eigen.cols());
    Eigen::Index row = 0;
    for (const auto& b : blocks) {
      j.row(row++) = rows_per_eigen.middleRows(b.start, b.end - b.start).colwise().sum();
      for (Eigen::Index k = b.start; k + 1 < b.end; ++k)
        j.row(row++) = rows_per_eigen.row(k + 1) - rows_per_eigen.row(k);
    }
    return j;
  }
};

struct LmOutcome {
  Vector log_weights;
  double max_error = INFINITY;
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt in log-weight coordinates for the closed complete-graph
// Laplacian. Eigenvalue 0 (constants) is dropped; the remaining N-1
// eigenvalues are matched to `target`.
class CompleteGraphProblem {
 public:
  CompleteGraphProblem(const Vector& mu, const Vector& target)
      : mu_(mu), inv_sqrt_mu_(mu.array().rsqrt()), target_(target), map_(target),
        scale_(std::max(target.maxCoeff(), 1e-300)) {}

  Eigen::Index size() const { return mu_.size(); }

  Matrix weights(const Vector& log_w) const {
    const Eigen::Index n = size();
    Matrix w = Matrix::Zero(n, n);
    Eigen::Index e = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = std::exp(log_w[e++]);
    return w;
  }

  struct Eval {
    Vector lam;       // the N-1 nontrivial eigenvalues
    Matrix vectors;   // matching mu-orthonormal eigenvectors
    Vector residual;  // scaled by 1/scale_
    double cost;
    double max_error;
  };

  Eval evaluate(const Vector& log_w) const {
    const Matrix k = assemble(weights(log_w), Vector());
    const Matrix c = linalg::symmetrize(inv_sqrt_mu_.asDiagonal() * k * inv_sqrt_mu_.asDiagonal());
    Eigen::SelfAdjointEigenSolver<Matrix> es(c);
    Eval ev;
    const Eigen::Index n = size();
    ev.lam = es.eigenvalues().tail(n - 1);
    ev.vectors = inv_sqrt_mu_.asDiagonal() * es.eigenvectors().rightCols(n - 1);
    ev.residual = map_.residual(ev.lam, target_) / scale_;
    ev.cost = 0.5 * ev.residual.squaredNorm();
    ev.max_error = (ev.lam - target_).cwiseAbs().maxCoeff();
    return ev;
  }

  Matrix jacobian(const Eval& ev, const Vector& log_w, Execution exec) const {
    Matrix per_eigen = kernels::edge_sensitivities(ev.vectors, false, exec);
    const Vector w = log_w.array().exp();
    per_eigen = per_eigen * w.asDiagonal();
    return map_.jacobian(per_eigen) / scale_;
  }

  LmOutcome solve(Vector x, double abs_tol, int max_iter, Execution exec) const {
    LmOutcome out;
    Eval cur = evaluate(x);
    double damping = -1.0;
    int it = 0;
    for (; it < max_iter && cur.max_error > abs_tol; ++it) {
      const Matrix jac = jacobian(cur, x, exec);
      const Matrix h = jac.transpose() * jac;
      const Vector grad = jac.transpose() * cur.residual;
      if (damping < 0.0) damping = 1e-3 * std::max(h.diagonal().maxCoeff(), 1e-12);

      bool accepted = false;
      while (!accepted) {
        Matrix a = h;
        a.diagonal().array() += damping;
        Vector step = -a.ldlt().solve(grad);
        const double big = step.cwiseAbs().maxCoeff();
        if (!(big < INFINITY)) {
          damping *= 4.0;
        } else {
          if (big > 2.0) step *= 2.0 / big;
          const Vector trial = x + step;
          Eval next = evaluate(trial);
          if (next.cost < cur.cost) {
            x = trial;
            cur = std::move(next);
            damping = std::max(damping / 3.0, 1e-15);
            accepted = true;
          } else {
            damping *= 4.0;
          }
        }
        if (damping > 1e16) break;
      }
      if (!accepted) break;  // stagnated
    }
    out.log_weights = x;
    out.max_error = cur.max_error;
    out.iterations = it;
    out.converged = cur.max_error <= abs_tol;
    return out;
  }

 private:
  Vector mu_;
  Vector inv_sqrt_mu_;
  Vector target_;
  ResidualMap map_;
  double scale_;
};

}  // namespace

CompleteGraphSolution complete_graph_inverse(const Vector& gaps, const Vector& mu,
                                             const InverseOptions& options) {
  const Eigen::Index n = mu.size();
  if (n < 1 || gaps.size() != n) throw ValidationError("gaps and mu must have equal length N >= 1");
  if (!(mu.array() > 0.0).all()) throw ValidationError("vertex measure must be positive");
  if (gaps[0] != 0.0) throw ValidationError("gaps[0] must be 0 (constants)");
  for (Eigen::Index k = 1; k < n; ++k) {
    if (gaps[k] < gaps[k - 1]) throw ValidationError("gaps must be sorted ascending");
  }
  if (n >= 2 && !(gaps[1] > 0.0))
    throw ValidationError("gaps[1] must be positive: a connected positively weighted graph has "
                          "a simple zero eigenvalue");

  CompleteGraphSolution sol;
  if (n == 1) {
    sol.weights = Matrix::Zero(1, 1);
    return sol;
  }

  const Vector target = gaps.tail(n - 1);
  const double abs_tol = options.absolute_tolerance > 0.0
                             ? options.absolute_tolerance
                             : options.tol.inverse * target.maxCoeff();
  CompleteGraphProblem problem(mu, target);

  // Uniform start matched to the trace: sum(gaps) = c (N-1) sum(1/mu).
  const double c = gaps.sum() / ((n - 1) * mu.cwiseInverse().sum());
  const Eigen::Index m = n * (n - 1) / 2;
  const Vector x0 = Vector::Constant(m, std::log(c));

  auto finish = [&](const LmOutcome& o, int attempt) {
    sol.weights = problem.weights(o.log_weights);
    sol.max_error = o.max_error;
    sol.iterations = o.iterations;
    sol.attempt = attempt;
    return sol;
  };

  const LmOutcome first = problem.solve(x0, abs_tol, options.tol.max_iterations, options.exec);
  if (first.converged) return finish(first, 0);

  // Restarts are independent; each seeds its own generator from (seed, r)
  // so the selection below is identical for any thread count.
  std::vector<LmOutcome> outcomes(options.restarts);
  kernels::for_each_index(
      options.restarts,
      [&](Eigen::Index r) {
        std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r + 1));
        std::normal_distribution<double> normal(0.0, options.jitter);
        Vector x = x0;
        for (Eigen::Index e = 0; e < m; ++e) x[e] += normal(rng);
        outcomes[r] = problem.solve(x, abs_tol, options.tol.max_iterations, Execution::Serial);
      },
      options.exec);

  int best = -1;
  double best_err = first.max_error;
  for (int r = 0; r < options.restarts; ++r) {
    if (outcomes[r].max_error < best_err) {
      best_err = outcomes[r].max_error;
      best = r;
    }
  }
  if (best >= 0 && outcomes[best].converged) return finish(outcomes[best], best + 1);

  std::ostringstream os;
  os << "complete-graph inverse problem did not converge after " << options.restarts
     << " restarts (best max eigenvalue error " << best_err << ", tolerance " << abs_tol
     << "); try a different --seed";
  throw NumericalError(os.str(), best_err);
}

DirichletGraph prescribe_weights(const SpectrumTarget& target, const Vector& mu,
                                 const InverseOptions& options) {
  target.validate();
  const Eigen::Index n = target.values.size();
  if (mu.size() != n) throw ValidationError("mu must have the same length as the target");
  if (!(mu.array() > 0.0).all()) throw ValidationError("vertex measure must be positive");

  const double a1 = target.values[0];
  DirichletGraph g;
  g.mu = mu;
  g.boundary = a1 * mu;
  if (n == 1) {
    g.interior = Matrix::Zero(1, 1);
    return g;
  }

  const Vector gaps = target.values.array() - a1;
  InverseOptions inner = options;
  // Every a_k >= a_1, so this absolute bound keeps the relative error of the
  // shifted spectrum under tol.inverse / 2.
  inner.absolute_tolerance = 0.5 * options.tol.inverse * a1;
  g.interior = complete_graph_inverse(gaps, mu, inner).weights;

  const SpectralReport rep = forward_spectrum(g, options.tol);
  const double rel =
      ((rep.eigenvalues - target.values).array() / target.values.array()).abs().maxCoeff();
  if (!(rel <= options.tol.inverse)) {
    throw NumericalError("prescribed graph misses the target spectrum", rel);
  }
  return g;
}

}  // namespace spectrum_forge::graph
