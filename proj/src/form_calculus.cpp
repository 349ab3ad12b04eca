#include "spectrum_forge/form_calculus.hpp"

#include "spectrum_forge/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace spectrum_forge::forms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix orthonormalize(const Matrix& e, const char* name) {
  try {
    return e * linalg::spd_inv_sqrt(e.transpose() * e);
  } catch (const NumericalError&) {
    throw ValidationError(std::string("basis of ") + name + " is rank deficient");
  }
}

void require_square(const Matrix& a, Eigen::Index n, const char* name) {
  if (a.rows() != n || a.cols() != n)
    throw ValidationError(std::string(name) + " has the wrong shape");
}

// Leading `count` generalized eigenvectors of (q, a).
Matrix leading_eigenvectors(const Matrix& q, const Matrix& a, Eigen::Index count) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(q, a);
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed", kInf);
  return es.eigenvectors().leftCols(count);
}

struct Compressed {
  Matrix q0, a0, q1, a1, g_inv;
};

Compressed compress(const QuadFormPair& s0, const QuadFormPair& s1, const SubspacePair& p) {
  const Matrix& p0 = p.basis0;
  const Matrix& p1 = p.basis1;
  Compressed c;
  c.q0 = linalg::symmetrize(p0.transpose() * s0.form * p0);
  c.a0 = linalg::symmetrize(p0.transpose() * s0.gram * p0);
  c.q1 = linalg::symmetrize(p1.transpose() * s1.form * p1);
  c.a1 = linalg::symmetrize(p1.transpose() * s1.gram * p1);
  c.g_inv = (p0.transpose() * p1).inverse();
  return c;
}

}  // namespace

void QuadFormPair::validate(bool require_psd) const {
  const Eigen::Index n = gram.rows();
  require_square(gram, n, "gram");
  require_square(form, n, "form");
  if (!linalg::is_symmetric(gram, 1e-12) || !linalg::is_symmetric(form, 1e-12))
    throw ValidationError("gram and form must be symmetric");
  const Vector ga = linalg::symmetric_eigenvalues(gram);
  if (!(ga.minCoeff() > 0.0)) throw ValidationError("gram is not positive definite");
  if (require_psd) {
    const Vector qa = linalg::generalized_eigenvalues(form, gram);
    if (qa.minCoeff() < -1e-12 * std::max(1.0, qa.cwiseAbs().maxCoeff()))
      throw ValidationError("form is not positive semidefinite");
  }
}

SubspacePair subspace_isometry(const Matrix& a0, const Matrix& a1, const Matrix& e0,
                               const Matrix& e1, double graph_tol) {
  const Eigen::Index n = e0.rows();
  const Eigen::Index k = e0.cols();
  if (k == 0 || e1.rows() != n || e1.cols() != k)
    throw ValidationError("E_0 and E_1 must be nonempty and of equal dimension");
  require_square(a0, n, "A_0");
  require_square(a1, n, "A_1");

  SubspacePair p;
  p.basis0 = orthonormalize(e0, "E_0");
  p.basis1 = orthonormalize(e1, "E_1");

  const Matrix g = p.basis0.transpose() * p.basis1;
  Eigen::JacobiSVD<Matrix> svd(g);
  p.projection_singular_values = svd.singularValues();
  const double smin = p.projection_singular_values.minCoeff();
  if (!(smin > graph_tol)) {
    std::ostringstream os;
    os << "E_1 is not a graph over E_0: projection singular value " << smin;
    throw ValidationError(os.str());
  }
  const Matrix g_inv = g.inverse();
  // Polar factor of I + B in orthonormal coordinates.
  const Matrix w = g_inv * linalg::spd_inv_sqrt(g_inv.transpose() * g_inv);
  const Matrix c0 = linalg::symmetrize(p.basis0.transpose() * a0 * p.basis0);
  const Matrix c1 = linalg::symmetrize(p.basis1.transpose() * a1 * p.basis1);
  p.u_coords = linalg::spd_inv_sqrt(c1) * w * linalg::spd_sqrt(c0);
  p.u = p.basis1 * p.u_coords * p.basis0.transpose();
  p.b = p.basis1 * g_inv * p.basis0.transpose() - p.basis0 * p.basis0.transpose();
  return p;
}

double n_spectral_difference(const QuadFormPair& side0, const QuadFormPair& side1,
                             const SubspacePair& pair) {
  const Compressed c = compress(side0, side1, pair);
  const Matrix pulled = pair.u_coords.transpose() * c.q1 * pair.u_coords;
  return linalg::form_sup_norm(linalg::symmetrize(pulled - c.q0), c.a0);
}

double n_spectral_difference(const QuadFormPair& side0, const Matrix& e0,
                             const QuadFormPair& side1, const Matrix& e1) {
  return n_spectral_difference(side0, side1,
                               subspace_isometry(side0.gram, side1.gram, e0, e1));
}

ClosenessReport closeness_criterion_check(const QuadFormPair& side0, const Matrix& e0,
                                          const QuadFormPair& side1, const Matrix& e1,
                                          double target_eps) {
  side0.validate();
  side1.validate();
  const SubspacePair pair = subspace_isometry(side0.gram, side1.gram, e0, e1);
  const Compressed c = compress(side0, side1, pair);
  const Eigen::Index n = side0.dim();
  const Matrix id = Matrix::Identity(n, n);

  ClosenessReport r;
  r.norm_q1 = linalg::form_sup_norm(c.q1, c.a1);
  r.norm_a0_minus_i = linalg::spectral_norm(side0.gram - id);
  r.norm_a1_minus_i = linalg::spectral_norm(side1.gram - id);
  r.norm_b = linalg::spectral_norm(pair.b);
  const Vector l0 = linalg::generalized_eigenvalues(c.q0, c.a0);
  const Vector l1 = linalg::generalized_eigenvalues(c.q1, c.a1);
  r.max_eigen_difference = (l1 - l0).cwiseAbs().maxCoeff();
  // q_0(x) - q_1(x + Bx) <= alpha5 |x|^2 over E_0.
  const Matrix gap = linalg::symmetrize(c.q0 - c.g_inv.transpose() * c.q1 * c.g_inv);
  r.alpha5 = std::max(0.0, linalg::symmetric_eigenvalues(gap).maxCoeff());
  r.spectral_difference = n_spectral_difference(side0, side1, pair);
  r.target_eps = target_eps;
  r.eps_close = r.spectral_difference <= target_eps;
  return r;
}

void PerturbationInstance::validate() const {
  if (mu.size() == 0) throw ValidationError("Q_0 needs at least one eigenvalue");
  if (!mu.allFinite()) throw ValidationError("Q_0 eigenvalues must be finite");
  for (Eigen::Index i = 1; i < mu.size(); ++i)
    if (mu[i] < mu[i - 1]) throw ValidationError("Q_0 eigenvalues must be ascending");
  if (d_inf < 1) throw ValidationError("H_inf needs at least one dimension");
  if (!(floor > 0.0) || !std::isfinite(floor)) throw ValidationError("floor C must be positive");
  if (!std::isfinite(skew) || std::abs(std::cos(skew)) < 1e-12)
    throw ValidationError("skew angle must keep S invertible");
  if (n_tracked < 0 || n_tracked > d0()) throw ValidationError("N must lie in [1, d_0]");
  std::set<Eigen::Index> used0, used_inf;
  for (const auto& [i, j] : mixed_pairs) {
    if (i < 0 || i >= d0() || j < 0 || j >= dinf())
      throw ValidationError("mixed pair index out of range");
    if (!used0.insert(i).second || !used_inf.insert(j).second)
      throw ValidationError("each axis may appear in at most one mixed pair");
  }
  const Eigen::Index nn = n();
  if (nn < d0() && !(mu[nn] > mu[nn - 1]))
    throw ValidationError("the tracked block needs a gap: mu_{N+1} > mu_N");
}

Matrix PerturbationInstance::skew_matrix() const {
  Matrix s = Matrix::Identity(dim(), dim());
  for (const auto& [i, j] : mixed_pairs) {
    const Eigen::Index col = d0() + j;
    s(col, col) = std::cos(skew);
    s(i, col) = std::sin(skew);
  }
  return s;
}

Matrix PerturbationInstance::form() const {
  validate();
  Vector blocks(dim());
  blocks << mu, Vector::Constant(dinf(), floor);
  const Matrix s_inv = skew_matrix().inverse();
  return linalg::symmetrize(s_inv.transpose() * blocks.asDiagonal() * s_inv);
}

PerturbationInstance::Constants PerturbationInstance::constants() const {
  const Eigen::Index nn = n();
  Constants c{};
  Eigen::Index last = nn - 1;
  if (nn < d0()) {
    c.m = mu[nn];
    c.delta = mu[nn] - mu[nn - 1];
    last = nn;
  } else {
    c.m = mu[nn - 1];
  }
  c.delta_tilde = kInf;
  const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 1; i <= last; ++i) {
    const double g = mu[i] - mu[i - 1];
    if (g > 1e-12 * scale) c.delta_tilde = std::min(c.delta_tilde, g);
  }
  return c;
}

double surjectivity_threshold(double m, double delta_tilde) {
  const double r = std::isinf(delta_tilde) ? 0.0 : std::sqrt(m / (m + delta_tilde));
  const double d = 1.0 - r;
  return 4.0 * m / (d * d);
}

double t_norm_bound(double m, double c, Eigen::Index k) {
  const double r = std::sqrt(m / c);
  const double kk = static_cast<double>(k);
  const double inner = 1.0 - 2.0 * kk * r + m / c;
  if (!(inner > 0.0)) return kInf;
  return r * std::sqrt(kk) / std::sqrt(inner);
}

Ct1Report ct1_harness(const PerturbationInstance& p) {
  p.validate();
  const Eigen::Index d = p.dim();
  const Eigen::Index nn = p.n();
  const Matrix q = p.form();
  const Matrix id = Matrix::Identity(d, d);

  Ct1Report r;
  r.floor = p.floor;
  r.constants = p.constants();
  r.surjectivity_threshold = surjectivity_threshold(r.constants.m, r.constants.delta_tilde);
  r.t_bound = t_norm_bound(r.constants.m, p.floor, nn);
  r.mu = p.mu.head(nn);

  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed on Q", kInf);
  r.eigenvalues = es.eigenvalues();
  const Matrix e1 = es.eigenvectors().leftCols(nn);
  const Matrix e0 = id.leftCols(nn);

  SubspacePair pair;
  try {
    pair = subspace_isometry(id, id, e0, e1);
  } catch (const ValidationError& e) {
    std::ostringstream os;
    os << e.what() << "; C = " << p.floor << " (surjectivity threshold "
       << r.surjectivity_threshold << ")";
    throw ValidationError(os.str());
  }
  const QuadFormPair side{id, q};
  r.norm_b = linalg::spectral_norm(pair.b);
  r.max_eigen_gap = (r.eigenvalues.head(nn) - r.mu).cwiseAbs().maxCoeff();
  r.spectral_difference = n_spectral_difference(side, side, pair);
  r.min_projection_singular_value = pair.projection_singular_values.minCoeff();
  // Backward-stable eigensolver: eigenvalues carry O(eps ||Q||) rounding.
  const double slack =
      64.0 * std::numeric_limits<double>::epsilon() * r.eigenvalues.cwiseAbs().maxCoeff();
  r.min_max_domination = true;
  for (Eigen::Index k = 0; k < nn; ++k)
    if (r.eigenvalues[k] > r.mu[k] + slack)
      r.min_max_domination = false;
  return r;
}

std::vector<Ct1Report> ct1_sweep(const PerturbationInstance& p, const std::vector<double>& floors,
                                 Execution exec) {
  std::vector<Ct1Report> out(floors.size());
  kernels::for_each_index(
      static_cast<Eigen::Index>(floors.size()),
      [&](Eigen::Index i) {
        PerturbationInstance q = p;
        q.floor = floors[i];
        out[i] = ct1_harness(q);
      },
      exec);
  return out;
}

std::vector<SequenceRow> sequence_difference_sweep(const QuadFormPair& base,
                                                   const std::vector<QuadFormPair>& family,
                                                   Eigen::Index n_tracked,
                                                   const SequenceOptions& options) {
  base.validate();
  const Eigen::Index d = base.dim();
  if (n_tracked < 1 || n_tracked > d) throw ValidationError("N must lie in [1, dim]");
  const Vector base_spec = linalg::generalized_eigenvalues(base.form, base.gram);
  if (!(base_spec.minCoeff() > 0.0)) throw ValidationError("base form must be positive definite");
  if (options.samples < 1) throw ValidationError("sample count must be positive");
  const Matrix e0 = leading_eigenvectors(base.form, base.gram, n_tracked);

  // Fit sample: Gaussian directions plus the eigenvectors of the base pair.
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Matrix sample(d, options.samples + d);
  for (Eigen::Index c = 0; c < options.samples; ++c)
    for (Eigen::Index r = 0; r < d; ++r) sample(r, c) = normal(rng);
  sample.rightCols(d) = leading_eigenvectors(base.form, base.gram, d);
  const Vector base_norm = (sample.transpose() * base.gram * sample).diagonal().cwiseSqrt();
  const Vector base_q = (sample.transpose() * base.form * sample).diagonal().cwiseSqrt();

  std::vector<SequenceRow> rows(family.size());
  kernels::for_each_index(
      static_cast<Eigen::Index>(family.size()),
      [&](Eigen::Index idx) {
        const QuadFormPair& member = family[idx];
        member.validate();
        if (member.dim() != d) throw ValidationError("family member has the wrong dimension");
        SequenceRow row;
        row.index = static_cast<int>(idx) + 1;
        const Vector diff = linalg::generalized_eigenvalues(member.form - base.form, base.gram);
        row.domination_margin = diff.minCoeff();
        row.dominated =
            row.domination_margin >= -1e-12 * std::max(1.0, base_spec.cwiseAbs().maxCoeff());
        row.c1 = std::sqrt(linalg::generalized_eigenvalues(member.gram, base.gram).minCoeff());
        row.c2 = options.c2;
        const Vector norm_n = (sample.transpose() * member.gram * sample).diagonal().cwiseSqrt();
        double eps = 0.0;
        for (Eigen::Index c = 0; c < sample.cols(); ++c) {
          const double excess = norm_n[c] - options.c2 * base_norm[c];
          if (excess > 0.0) eps = std::max(eps, excess / base_q[c]);
        }
        row.eps_n = eps;
        const Matrix e1 = leading_eigenvectors(member.form, member.gram, n_tracked);
        row.spectral_difference = n_spectral_difference(base, e0, member, e1);
        rows[idx] = row;
      },
      options.exec);
  return rows;
}

QuadFormPair compound_form(const Matrix& q, const Matrix& a) {
  const Eigen::Index d = q.rows();
  if (d < 2) throw ValidationError("exterior square needs d >= 2");
  require_square(q, d, "Q");
  require_square(a, d, "A");
  std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) idx.emplace_back(i, j);
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  QuadFormPair out{Matrix(m, m), Matrix(m, m)};
  for (Eigen::Index p = 0; p < m; ++p) {
    const auto [i, j] = idx[p];
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto [k, l] = idx[r];
      out.gram(p, r) = 2.0 * (a(i, k) * a(j, l) - a(i, l) * a(j, k));
      out.form(p, r) = 2.0 * (q(i, k) * a(j, l) + a(i, k) * q(j, l) - q(i, l) * a(j, k) -
                              a(i, l) * q(j, k));
    }
  }
  return out;
}

Vector wedge(const Vector& u, const Vector& v) {
  const Eigen::Index d = u.size();
  if (v.size() != d) throw ValidationError("wedge factors differ in length");
  Vector w(d * (d - 1) / 2);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) w[p++] = u[i] * v[j] - u[j] * v[i];
  return w;
}

CounterexampleReport counterexample_eval(double b) {
  if (!std::isfinite(b)) throw ValidationError("b must be finite");
  Matrix q(4, 4);
  q << 1, 0, 0, -b,
       0, 1, -b, 0,
       0, -b, b * b, 0,
       -b, 0, 0, b * b;
  const Vector inf1 = Vector::Unit(4, 0);
  const Vector inf2 = Vector::Unit(4, 1);
  Vector zero1(4), zero2(4);
  zero1 << 0, b, 1, 0;
  zero2 << b, 0, 0, 1;

  const Vector x = wedge(zero1, inf1) + wedge(inf2, zero2) + b * wedge(inf1, inf2);
  const QuadFormPair c = compound_form(q, Matrix::Identity(4, 4));

  CounterexampleReport r;
  r.b = b;
  r.q_wedge = x.dot(c.form * x);
  r.norm_sq = x.dot(c.gram * x);
  r.min_ratio = r.q_wedge / r.norm_sq;
  for (const Vector* f : {&inf1, &inf2})
    for (const Vector* z : {&zero1, &zero2})
      r.q_orthogonality = std::max(r.q_orthogonality, std::abs(f->dot(q * *z)));
  return r;
}

}  // namespace spectrum_forge::forms
