#include "oracles.hpp"

#include "spectrum_forge/capacitor.hpp"
#include "spectrum_forge/linalg.hpp"
#include "spectrum_forge/thin_surface.hpp"

#include <doctest.h>

#include <numbers>

using namespace spectrum_forge;
using namespace spectrum_forge::surface;
using graph::DirichletGraph;

namespace {

constexpr double kPi = std::numbers::pi;

DirichletGraph unit_graph(Eigen::Index n) {
  return DirichletGraph::uniform(n, thick_measure(n), 1.0, 1.0);
}

Vector target(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("thick measure") {
  CHECK(thick_measure(1) == doctest::Approx(2 * kPi));
  CHECK(thick_measure(2) == doctest::Approx(2 * kPi));
  CHECK(thick_measure(5) == doctest::Approx(6 * kPi));
  CHECK(reference_measure(4).size() == 4);
}

TEST_CASE("model limits for N = 3 unit weights") {
  const auto g = unit_graph(3);
  const Matrix graph_k = 4.0 * Matrix::Identity(3, 3) - Matrix::Ones(3, 3);
  const auto m = assemble_model(g, 1e-8, MassMode::Refined);
  CHECK((m.stiffness / 1e-8 - graph_k).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((m.mass - 2 * kPi * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-5);
  CHECK_FALSE(m.formal_analogue());
  CHECK(unit_graph(2).size() == 2);
  CHECK(assemble_model(unit_graph(2), 1e-3).formal_analogue());
}

TEST_CASE("neck constraint") {
  const auto g = unit_graph(3);
  const double bound = max_admissible_eps(g);
  CHECK(bound == doctest::Approx(1 / kPi));
  CHECK_THROWS_AS(assemble_model(g, bound), ValidationError);
  CHECK_NOTHROW(assemble_model(g, 0.9 * bound));
  try {
    assemble_model(g, 0.5);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("eps") != std::string::npos);
  }
  CHECK_THROWS_AS(assemble_model(g, -1.0), ValidationError);
}

TEST_CASE("leading and refined masses agree to first order") {
  const auto g = unit_graph(4);
  const Vector lead = model_spectrum(assemble_model(g, 1e-6, MassMode::Leading)).eigenvalues;
  const Vector ref = model_spectrum(assemble_model(g, 1e-6, MassMode::Refined)).eigenvalues;
  CHECK(((lead - ref).array() / ref.array()).abs().maxCoeff() < 1e-2);
}

TEST_CASE("single vertex leading model") {
  const auto g = unit_graph(1);
  const double eps = 1e-3;
  const auto m = assemble_model(g, eps, MassMode::Leading);
  const double cap = capacitor::capacity(capacitor::CapacitorSpec::collar(capacitor::Kind::Half, eps, 1.0));
  CHECK(model_spectrum(m).eigenvalues[0] == doctest::Approx(cap / (2 * kPi)).epsilon(1e-13));
}

TEST_CASE("scaled model spectrum approaches the graph spectrum") {
  const auto g = unit_graph(3);
  const Vector gs = graph::forward_spectrum(g).eigenvalues;
  const auto rep = model_spectrum(assemble_model(g, 1e-5));
  CHECK((rep.eigenvalues.array() > 0.0).all());
  CHECK(((rep.eigenvalues / 1e-5 - gs).array() / gs.array()).abs().maxCoeff() < 2e-2);
  CHECK(rep.max_residual() < 1e-10);
  // independent pencil oracle
  const auto m = assemble_model(g, 1e-3);
  const Vector ref = oracle::pencil_eigenvalues(m.stiffness, m.mass);
  CHECK((model_spectrum(m).eigenvalues - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.maxCoeff());
}

TEST_CASE("epsilon sweep converges") {
  for (Eigen::Index n = 1; n <= 5; ++n) {
    const auto g = unit_graph(n);
    const auto rows = epsilon_sweep(g, {1e-3, 1e-4, 1e-5, 1e-6});
    const double qnorm = graph_form(g).sup_norm();
    for (size_t r = 1; r < rows.size(); ++r)
      CHECK(rows[r].form_difference < rows[r - 1].form_difference);
    CHECK(rows.back().form_difference < 1e-2 * qnorm);
  }
  const auto rows1 = epsilon_sweep(unit_graph(1), {1e-7});
  CHECK(rows1[0].scaled_eigenvalues[0] == doctest::Approx(1 / (2 * kPi)).epsilon(1e-2));
}

TEST_CASE("transport preserves the spectrum") {
  for (auto mode : {MassMode::Leading, MassMode::Refined}) {
    for (double eps : {1e-2, 1e-4}) {
      const auto m = assemble_model(DirichletGraph::uniform(4, thick_measure(4), 1.3, 0.7), eps, mode);
      const Vector a = transport_form(m).spectrum();
      const Vector b = model_spectrum(m).eigenvalues;
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * b.maxCoeff());
    }
  }
  // with the leading mass the transport is the identity
  const auto m = assemble_model(unit_graph(3), 1e-3, MassMode::Leading);
  CHECK((transport_form(m).matrix - m.stiffness).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("scaling law") {
  const auto m = assemble_model(unit_graph(3), 1e-4);
  const double eps = 1e-4;
  const Vector scaled = linalg::generalized_eigenvalues(m.stiffness, Matrix(eps * m.mass));
  const Vector plain = model_spectrum(m).eigenvalues / eps;
  CHECK((scaled - plain).cwiseAbs().maxCoeff() <= 1e-13 * plain.maxCoeff());
}

TEST_CASE("form map is a well conditioned bijection") {
  for (Eigen::Index n = 1; n <= 8; ++n) {
    const Matrix phi = form_map_matrix(n);
    CHECK(phi.rows() == n * (n + 1) / 2);
    CHECK(phi.cols() == n * (n + 1) / 2);
    Eigen::JacobiSVD<Matrix> svd(phi);
    const Vector s = svd.singularValues();
    CHECK(s[s.size() - 1] > 0.0);
    CHECK(s[0] / s[s.size() - 1] < 1e6);
    const auto g = DirichletGraph::uniform(n, 1.0, 0.5, 2.0);
    CHECK((phi * g.edge_weights() - upper_entries(graph::stiffness_mass(g).stiffness))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }
}

TEST_CASE("prescription on the thin surface") {
  const graph::SpectrumTarget t{target({1, 3})};
  const double eps = 1e-5;
  const auto res = solve_prescription(t, eps);
  CHECK(res.residual < 1e-9);
  const Vector w0 = res.graph_target.edge_weights();
  const Vector w1 = res.surface_graph.edge_weights();
  CHECK((w1 - w0).norm() / w0.norm() < 0.05);
  const Vector lam = model_spectrum(assemble_model(res.surface_graph, eps)).eigenvalues / eps;
  CHECK(((lam - t.values).array() / t.values.array()).abs().maxCoeff() < 1e-6);

  const graph::SpectrumTarget t3{target({0.5, 1.0, 2.0})};
  const auto res3 = solve_prescription(t3, 1e-4);
  const Vector lam3 = model_spectrum(assemble_model(res3.surface_graph, 1e-4)).eigenvalues / 1e-4;
  CHECK(((lam3 - t3.values).array() / t3.values.array()).abs().maxCoeff() < 1e-6);
}

TEST_CASE("prescription rejects the degenerate collar regime") {
  const graph::SpectrumTarget t{target({1, 3})};
  CHECK_THROWS_AS(solve_prescription(t, 0.06), ValidationError);
  CHECK_THROWS_AS(solve_prescription(t, 0.0), ValidationError);
  const graph::SpectrumTarget bad{target({2, 2})};
  CHECK_THROWS_AS(solve_prescription(bad, 1e-5), ValidationError);
}
