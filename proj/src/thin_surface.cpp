#include "spectrum_forge/thin_surface.hpp"

#include "spectrum_forge/capacitor.hpp"
#include "spectrum_forge/linalg.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spectrum_forge::surface {

using capacitor::CapacitorSpec;
using capacitor::Kind;

double thick_measure(Eigen::Index n) {
  return 2.0 * std::numbers::pi * static_cast<double>(std::max<Eigen::Index>(n - 2, 1));
}

Vector reference_measure(Eigen::Index n) { return Vector::Constant(n, thick_measure(n)); }

Vector FormOnH::spectrum() const {
  const Vector s = inner_product.array().rsqrt();
  return linalg::symmetric_eigenvalues(s.asDiagonal() * matrix * s.asDiagonal());
}

double FormOnH::sup_norm() const {
  const Vector ev = spectrum();
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double max_admissible_eps(const graph::DirichletGraph& g) {
  g.validate();
  const double max_interior = g.size() > 1 ? g.interior.maxCoeff() : 0.0;
  double bound = 2.0 / (std::numbers::pi * g.boundary.maxCoeff());
  if (max_interior > 0.0) bound = std::min(bound, 1.0 / (std::numbers::pi * max_interior));
  return bound;
}

namespace {

CapacitorSpec checked_collar(Kind kind, double eps, double theta, const graph::DirichletGraph& g,
                             Eigen::Index i, Eigen::Index j) {
  CapacitorSpec spec = CapacitorSpec::collar(kind, eps, theta);
  if (!(spec.coeff < spec.length_scale)) {
    std::ostringstream os;
    os << "neck constraint violated on ";
    if (kind == Kind::Full)
      os << "edge (" << i << ", " << j << ")";
    else
      os << "boundary edge of vertex " << i;
    os << " at eps = " << eps << "; admissible eps < " << max_admissible_eps(g);
    throw ValidationError(os.str());
  }
  return spec;
}

}  // namespace

ThinSurfaceModel assemble_model(const graph::DirichletGraph& g, double eps, MassMode mode) {
  g.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be positive");
  const Eigen::Index n = g.size();
  const double m0 = thick_measure(n);

  ThinSurfaceModel m;
  m.graph = g;
  m.eps = eps;
  m.mode = mode;
  m.stiffness = Matrix::Zero(n, n);
  m.mass = Matrix::Zero(n, n);

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const CapacitorSpec y = checked_collar(Kind::Full, eps, g.interior(i, j), g, i, j);
      const double cap = capacitor::capacity(y);
      m.stiffness(i, j) = m.stiffness(j, i) = -cap;
      m.stiffness(i, i) += cap;
      m.stiffness(j, j) += cap;
      if (mode == MassMode::Refined) {
        // f0 is the basis function of v_i on the collar, 1 - f0 that of v_j.
        // f0(x) + f0(-x) = 1 gives int f0 = half the area, so the cross
        // term is half area minus int f0^2.
        const double m11 = capacitor::potential_mass(y, 1.0, 0.0);
        const double half_area = 0.5 * capacitor::area(y);
        const double m12 = half_area - m11;
        m.mass(i, j) = m.mass(j, i) = m12;
        m.mass(i, i) += m11 - half_area;
        m.mass(j, j) += m11 - half_area;
      }
    }
    const CapacitorSpec z = checked_collar(Kind::Half, eps, g.boundary[i], g, i, i);
    m.stiffness(i, i) += capacitor::capacity(z);
    if (mode == MassMode::Refined) {
      m.mass(i, i) += m0 + capacitor::potential_mass(z, 1.0, 0.0) - capacitor::area(z);
    } else {
      m.mass(i, i) = m0;
    }
  }
  return m;
}

SpectralReport model_spectrum(const ThinSurfaceModel& m, const Tolerances& tol) {
  if (m.mode == MassMode::Leading) {
    return linalg::generalized_eigen(m.stiffness, Vector(m.mass.diagonal()), tol.eigen);
  }
  return linalg::generalized_eigen(m.stiffness, m.mass, tol.eigen);
}

FormOnH transport_form(const ThinSurfaceModel& m) {
  const Eigen::Index n = m.size();
  const Vector a0 = reference_measure(n);
  Matrix m_inv_sqrt;
  try {
    m_inv_sqrt = linalg::spd_inv_sqrt(m.mass);
  } catch (const NumericalError& e) {
    throw NumericalError("model mass matrix is not positive definite (assembly bug)", e.achieved());
  }
  const Vector a0_sqrt = a0.array().sqrt();
  const Matrix u = m_inv_sqrt * a0_sqrt.asDiagonal();
  return {linalg::symmetrize(u.transpose() * m.stiffness * u), a0};
}

FormOnH graph_form(const graph::DirichletGraph& g) {
  return {graph::stiffness_mass(g).stiffness, reference_measure(g.size())};
}

std::vector<SweepRow> epsilon_sweep(const graph::DirichletGraph& g,
                                    const std::vector<double>& eps_list, MassMode mode,
                                    Execution exec) {
  const FormOnH target = graph_form(g);
  std::vector<SweepRow> rows(eps_list.size());
  kernels::for_each_index(
      static_cast<Eigen::Index>(eps_list.size()),
      [&](Eigen::Index r) {
        const double eps = eps_list[r];
        const ThinSurfaceModel model = assemble_model(g, eps, mode);
        const SpectralReport rep = model_spectrum(model);
        const FormOnH f = transport_form(model);
        const FormOnH diff{f.matrix / eps - target.matrix, target.inner_product};
        rows[r] = {eps, rep.eigenvalues / eps, diff.sup_norm()};
      },
      exec);
  return rows;
}

Vector upper_entries(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Vector v(n * (n + 1) / 2);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) v[r++] = a(i, j);
  return v;
}

Matrix form_map_matrix(Eigen::Index n) {
  const Eigen::Index edges = graph::DirichletGraph::edge_count(n);
  Matrix phi(edges, edges);
  for (Eigen::Index e = 0; e < edges; ++e) {
    Vector w = Vector::Zero(edges);
    w[e] = 1.0;
    // Linear in the weights, so the image of a unit vector is one column.
    const Matrix k = [&] {
      const Eigen::Index m = n;
      Matrix out = Matrix::Zero(m, m);
      Eigen::Index idx = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j, ++idx) {
          out(i, i) += w[idx];
          out(j, j) += w[idx];
          out(i, j) -= w[idx];
          out(j, i) -= w[idx];
        }
      }
      for (Eigen::Index i = 0; i < m; ++i) out(i, i) += w[idx + i];
      return out;
    }();
    phi.col(e) = upper_entries(k);
  }
  return phi;
}

PrescriptionResult solve_prescription(const graph::SpectrumTarget& target, double eps,
                                      const PrescriptionOptions& options) {
  target.validate();
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  const Eigen::Index n = target.values.size();
  const Vector mu0 = reference_measure(n);

  PrescriptionResult result;
  result.graph_target = graph::prescribe_weights(target, mu0, options.inverse);
  const Matrix q_theta = graph_form(result.graph_target).matrix;
  const Vector goal = upper_entries(q_theta);

  if (!(eps < max_admissible_eps(result.graph_target))) {
    std::ostringstream os;
    os << "eps = " << eps << " is in the degenerate collar regime for the prescribed weights; "
       << "need eps < " << max_admissible_eps(result.graph_target);
    throw ValidationError(os.str());
  }

  auto admissible = [&](const Vector& w) {
    if (!(w.array() > 0.0).all()) return false;
    return eps < max_admissible_eps(graph::DirichletGraph::from_edge_weights(mu0, w));
  };
  auto residual_of = [&](const Vector& w) -> Vector {
    const ThinSurfaceModel model =
        assemble_model(graph::DirichletGraph::from_edge_weights(mu0, w), eps, options.mode);
    return upper_entries(transport_form(model).matrix / eps) - goal;
  };
  // Frobenius norm of the full symmetric mismatch from its upper entries.
  auto frobenius = [n](const Vector& r) {
    double s = 0.0;
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j, ++idx) s += (i == j ? 1.0 : 2.0) * r[idx] * r[idx];
    return std::sqrt(s);
  };

  Vector w = result.graph_target.edge_weights();
  Vector r = residual_of(w);
  double norm = frobenius(r);
  result.residual_history.push_back(norm);

  int it = 0;
  for (; it < options.max_iterations && norm > options.residual_tolerance; ++it) {
    const Vector steps = (1e-7 * w.array()).max(1e-14);
    const Matrix jac = kernels::forward_difference_jacobian(residual_of, w, r, steps, options.exec);
    const Vector delta = -jac.colPivHouseholderQr().solve(r);

    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, alpha *= 0.5) {
      const Vector trial = w + alpha * delta;
      if (!admissible(trial)) continue;
      const Vector r_trial = residual_of(trial);
      const double n_trial = frobenius(r_trial);
      if (n_trial < norm) {
        w = trial;
        r = r_trial;
        norm = n_trial;
        accepted = true;
        break;
      }
    }
    result.residual_history.push_back(norm);
    if (!accepted) break;
  }
  result.iterations = it;
  result.residual = norm;
  if (!(norm <= options.residual_tolerance)) {
    std::ostringstream os;
    os << "thin-surface prescription did not converge: residual " << norm << " after " << it
       << " Newton steps (history:";
    for (double h : result.residual_history) os << ' ' << h;
    os << ")";
    throw NumericalError(os.str(), norm);
  }
  result.surface_graph = graph::DirichletGraph::from_edge_weights(mu0, w);
  return result;
}

}  // namespace spectrum_forge::surface
