// spectrum-forge command-line entry point.
//
// Exit codes: 0 success, 2 validation/usage error, 3 numerical failure,
// 4 I/O error.

#include "spectrum_forge/capacitor.hpp"
#include "spectrum_forge/form_calculus.hpp"
#include "spectrum_forge/graph_core.hpp"
#include "spectrum_forge/kernels.hpp"
#include "spectrum_forge/mixed_bc.hpp"
#include "spectrum_forge/pipeline.hpp"
#include "spectrum_forge/report.hpp"
#include "spectrum_forge/thin_surface.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace sf = spectrum_forge;
using sf::io::Json;
using sf::io::Table;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Globals {
  std::uint64_t seed = 0;
  double tol_eigen = 1e-12;
  double tol_inverse = 1e-9;
  int threads = 0;
  std::string format;
  std::string out = "-";
  bool timings = false;

  sf::Tolerances tolerances() const {
    sf::Tolerances t;
    t.eigen = tol_eigen;
    t.inverse = tol_inverse;
    return t;
  }
  sf::graph::InverseOptions inverse() const {
    sf::graph::InverseOptions o;
    o.tol = tolerances();
    o.seed = seed;
    return o;
  }
};

sf::Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const sf::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string column(const std::string& name, Eigen::Index k) {
  return name + "_" + std::to_string(k + 1);
}

sf::surface::MassMode parse_mode(const std::string& s) {
  if (s == "refined") return sf::surface::MassMode::Refined;
  if (s == "leading") return sf::surface::MassMode::Leading;
  throw sf::ValidationError("unknown mass mode '" + s + "' (expected leading or refined)");
}

sf::pde::Side parse_side(const std::string& s) {
  if (s == "left") return sf::pde::Side::Left;
  if (s == "right") return sf::pde::Side::Right;
  if (s == "bottom") return sf::pde::Side::Bottom;
  if (s == "top") return sf::pde::Side::Top;
  throw sf::ValidationError("unknown side '" + s + "'");
}

// Emits either the JSON body or the table; `table_default` picks the format
// when --format is not given.
void emit(const Globals& g, const std::string& command, Json body, const Table& table,
          bool table_default) {
  const sf::io::Format f = g.format.empty()
                               ? (table_default ? sf::io::Format::Csv : sf::io::Format::Json)
                               : sf::io::parse_format(g.format);
  if (f == sf::io::Format::Csv) {
    sf::io::emit_table(table, g.out);
  } else {
    body["command"] = command;
    sf::io::emit_report(sf::io::with_schema(std::move(body)), g.out);
  }
}

void configure_threads(const Globals& g) {
  int threads = g.threads;
  if (threads == 0) {
    if (const char* env = std::getenv("SPECTRUM_FORGE_THREADS"); env && *env) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (*end != '\0' || v < 1)
        throw sf::ValidationError("SPECTRUM_FORGE_THREADS must be a positive integer");
      threads = static_cast<int>(v);
    }
  }
  if (threads < 0) throw sf::ValidationError("--threads must be positive");
  if (threads > 0) sf::kernels::set_thread_count(threads);
}

Table edge_table(const sf::graph::DirichletGraph& g) {
  Table t{{"i", "j", "weight"}, {}};
  for (Eigen::Index i = 0; i < g.size(); ++i)
    for (Eigen::Index j = i + 1; j < g.size(); ++j)
      t.add({double(i), double(j), g.interior(i, j)});
  for (Eigen::Index i = 0; i < g.size(); ++i) t.add({double(i), -1.0, g.boundary[i]});
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral prescription toolkit: graphs, capacitors, thin-surface models, "
               "quadratic forms, mixed boundary problems"};
  app.set_version_flag("--version", std::string(SPECTRUM_FORGE_VERSION));
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--tol-eigen", g.tol_eigen, "Relative eigen-residual tolerance")
      ->capture_default_str();
  app.add_option("--tol-inverse", g.tol_inverse, "Relative tolerance of inverse problems")
      ->capture_default_str();
  app.add_option("--threads", g.threads,
                 "Worker threads (default: $SPECTRUM_FORGE_THREADS, then OpenMP default)");
  app.add_option("--format", g.format, "Output format: json or csv");
  app.add_option("--out", g.out, "Output path ('-' for stdout)")->capture_default_str();
  app.add_flag("--timings", g.timings, "Record wall-clock time per pipeline stage");

  std::function<int()> action;

  // graph
  auto* graph_cmd = app.add_subcommand("graph", "Dirichlet spectra on the graph G_N");
  graph_cmd->require_subcommand(1);
  std::string graph_path;
  auto* spectrum_cmd = graph_cmd->add_subcommand("spectrum", "Forward spectrum of a graph");
  spectrum_cmd->add_option("--graph", graph_path, "Graph spec JSON")->required();
  spectrum_cmd->callback([&] {
    action = [&] {
      const auto gr = sf::io::read_graph(graph_path);
      const auto rep = sf::graph::forward_spectrum(gr, g.tolerances());
      Table t{{"k", "eigenvalue", "residual"}, {}};
      for (Eigen::Index k = 0; k < rep.size(); ++k)
        t.add({double(k + 1), rep.eigenvalues[k], rep.residual_norms[k]});
      emit(g, "graph spectrum",
           {{"graph", sf::io::graph_to_json(gr)}, {"report", sf::io::report_to_json(rep)}}, t,
           false);
      return 0;
    };
  });

  std::vector<double> target, mu;
  auto* prescribe_cmd = graph_cmd->add_subcommand("prescribe", "Weights for a target spectrum");
  prescribe_cmd->add_option("--target", target, "a_1 < a_2 <= ... <= a_N")
      ->required()->delimiter(',');
  prescribe_cmd->add_option("--mu", mu, "Vertex measure (default all ones)")->delimiter(',');
  prescribe_cmd->callback([&] {
    action = [&] {
      const sf::graph::SpectrumTarget t{to_vector(target)};
      t.validate();
      const sf::Vector m = mu.empty() ? sf::Vector::Ones(t.values.size()) : to_vector(mu);
      const auto gr = sf::graph::prescribe_weights(t, m, g.inverse());
      const auto rep = sf::graph::forward_spectrum(gr, g.tolerances());
      const double err =
          ((rep.eigenvalues - t.values).array() / t.values.array()).abs().maxCoeff();
      emit(g, "graph prescribe",
           {{"target", sf::io::vector_to_json(t.values)},
            {"graph", sf::io::graph_to_json(gr)},
            {"report", sf::io::report_to_json(rep)},
            {"relative_error", err}},
           edge_table(gr), false);
      return 0;
    };
  });

  // capacitor
  auto* cap_cmd = app.add_subcommand("capacitor", "Hyperbolic cylinder capacitors");
  cap_cmd->require_subcommand(1);
  std::string kind = "full";
  double length = 1.0;
  std::vector<double> eps_list;
  auto* cap_sweep = cap_cmd->add_subcommand("sweep", "Capacity, mass and flux over eps");
  cap_sweep->add_option("--kind", kind, "full or half")
      ->check(CLI::IsMember({"full", "half"}))->capture_default_str();
  cap_sweep->add_option("--l", length, "Length scale l")->capture_default_str();
  cap_sweep->add_option("--eps", eps_list, "eps values; coefficient c = pi eps")
      ->required()->delimiter(',');
  cap_sweep->callback([&] {
    action = [&] {
      const auto k = kind == "full" ? sf::capacitor::Kind::Full : sf::capacitor::Kind::Half;
      Table t{{"eps", "cap", "cap_over_eps", "mass", "normal_norm"}, {}};
      Json rows = Json::array();
      for (double e : eps_list) {
        const sf::capacitor::CapacitorSpec spec{k, std::numbers::pi * e, length};
        spec.validate();
        const double cap = sf::capacitor::capacity(spec);
        const double mass = sf::capacitor::potential_mass(spec, 1.0, 0.0);
        const double flux = sf::capacitor::normal_derivative_norm(spec);
        t.add({e, cap, cap / e, mass, flux});
        rows.push_back({{"eps", e},
                        {"cap", cap},
                        {"cap_over_eps", cap / e},
                        {"mass", mass},
                        {"normal_norm", flux}});
      }
      emit(g, "capacitor sweep", {{"kind", kind}, {"l", length}, {"rows", rows}}, t, true);
      return 0;
    };
  });

  // surface
  auto* surf_cmd = app.add_subcommand("surface", "Thin-surface spectral model");
  surf_cmd->require_subcommand(1);
  std::string mode = "refined";
  int unit_n = 0;
  auto* surf_sweep = surf_cmd->add_subcommand("sweep", "Model spectrum and form error over eps");
  auto* sweep_graph = surf_sweep->add_option("--graph", graph_path, "Graph spec JSON");
  surf_sweep->add_option("--unit", unit_n, "Use N vertices with unit weights")
      ->excludes(sweep_graph);
  surf_sweep->add_option("--eps", eps_list, "eps values")->required()->delimiter(',');
  surf_sweep->add_option("--mode", mode, "leading or refined")->capture_default_str();
  surf_sweep->callback([&] {
    action = [&] {
      sf::graph::DirichletGraph gr;
      if (!graph_path.empty()) {
        gr = sf::io::read_graph(graph_path);
      } else if (unit_n > 0) {
        gr = sf::graph::DirichletGraph::uniform(unit_n, 1.0, 1.0, 1.0);
      } else {
        throw sf::ValidationError("surface sweep needs --graph or --unit");
      }
      const auto rows = sf::surface::epsilon_sweep(gr, eps_list, parse_mode(mode));
      Table t;
      t.header.push_back("eps");
      for (Eigen::Index k = 0; k < gr.size(); ++k) t.header.push_back(column("lambda", k));
      t.header.push_back("form_difference");
      Json jrows = Json::array();
      for (const auto& r : rows) {
        std::vector<double> line{r.eps};
        for (Eigen::Index k = 0; k < r.scaled_eigenvalues.size(); ++k)
          line.push_back(r.scaled_eigenvalues[k]);
        line.push_back(r.form_difference);
        t.add(line);
        jrows.push_back({{"eps", r.eps},
                         {"scaled_eigenvalues", sf::io::vector_to_json(r.scaled_eigenvalues)},
                         {"form_difference", r.form_difference}});
      }
      const auto graph_form = sf::surface::graph_form(gr);
      emit(g, "surface sweep",
           {{"graph", sf::io::graph_to_json(gr)},
            {"mode", mode},
            {"graph_form_spectrum", sf::io::vector_to_json(graph_form.spectrum())},
            {"formal_analogue", gr.size() < 3},
            {"rows", jrows}},
           t, true);
      return 0;
    };
  });

  double eps = 0.0;
  auto* surf_prescribe = surf_cmd->add_subcommand("prescribe", "Collar weights for a target");
  surf_prescribe->add_option("--target", target, "Target spectrum")->required()->delimiter(',');
  surf_prescribe->add_option("--eps", eps, "eps")->required();
  surf_prescribe->add_option("--mode", mode, "leading or refined")->capture_default_str();
  surf_prescribe->callback([&] {
    action = [&] {
      const sf::graph::SpectrumTarget t{to_vector(target)};
      sf::surface::PrescriptionOptions opt;
      opt.mode = parse_mode(mode);
      opt.inverse = g.inverse();
      const auto res = sf::surface::solve_prescription(t, eps, opt);
      const auto model = sf::surface::assemble_model(res.surface_graph, eps, opt.mode);
      const auto rep = sf::surface::model_spectrum(model, g.tolerances());
      const sf::Vector scaled = rep.eigenvalues / eps;
      const double err = ((scaled - t.values).array() / t.values.array()).abs().maxCoeff();
      Table tab{{"i", "j", "theta", "theta_prime"}, {}};
      const sf::Vector w0 = res.graph_target.edge_weights();
      const sf::Vector w1 = res.surface_graph.edge_weights();
      Eigen::Index e = 0;
      const Eigen::Index n = t.values.size();
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j, ++e) tab.add({double(i), double(j), w0[e], w1[e]});
      for (Eigen::Index i = 0; i < n; ++i, ++e) tab.add({double(i), -1.0, w0[e], w1[e]});
      emit(g, "surface prescribe",
           {{"target", sf::io::vector_to_json(t.values)},
            {"eps", eps},
            {"mode", mode},
            {"graph", sf::io::graph_to_json(res.graph_target)},
            {"surface_graph", sf::io::graph_to_json(res.surface_graph)},
            {"residual", res.residual},
            {"residual_history", res.residual_history},
            {"iterations", res.iterations},
            {"scaled_eigenvalues", sf::io::vector_to_json(scaled)},
            {"relative_error", err},
            {"formal_analogue", n < 3}},
           tab, false);
      return 0;
    };
  });

  // forms
  auto* forms_cmd = app.add_subcommand("forms", "Quadratic-form perturbation checks");
  forms_cmd->require_subcommand(1);
  std::vector<double> q0, floors;
  double skew = 0.3;
  int n_tracked = 0, d_inf = 1;
  auto* ct1 = forms_cmd->add_subcommand("ct1", "Large-floor perturbation harness");
  ct1->add_option("--q0", q0, "Eigenvalues of Q_0, ascending")->required()->delimiter(',');
  ct1->add_option("--C", floors, "Floor values C")->required()->delimiter(',');
  ct1->add_option("--skew", skew, "Mixing angle")->capture_default_str();
  ct1->add_option("--N", n_tracked, "Tracked eigenvalue count (default dim Q_0)");
  ct1->add_option("--d-inf", d_inf, "Dimension of the large block")->capture_default_str();
  ct1->callback([&] {
    action = [&] {
      sf::forms::PerturbationInstance p;
      p.mu = to_vector(q0);
      p.skew = skew;
      p.n_tracked = n_tracked;
      p.d_inf = d_inf;
      p.validate();
      const auto reports = sf::forms::ct1_sweep(p, floors);
      Table t{{"C", "spectral_difference", "norm_b", "max_eigen_gap", "min_projection_sv",
               "threshold", "t_bound", "domination"},
              {}};
      Json rows = Json::array();
      for (const auto& r : reports) {
        t.add({r.floor, r.spectral_difference, r.norm_b, r.max_eigen_gap,
               r.min_projection_singular_value, r.surjectivity_threshold, r.t_bound,
               r.min_max_domination ? 1.0 : 0.0});
        rows.push_back({{"C", r.floor},
                        {"eigenvalues", sf::io::vector_to_json(r.eigenvalues)},
                        {"mu", sf::io::vector_to_json(r.mu)},
                        {"spectral_difference", r.spectral_difference},
                        {"norm_b", r.norm_b},
                        {"max_eigen_gap", r.max_eigen_gap},
                        {"min_projection_sv", r.min_projection_singular_value},
                        {"threshold", r.surjectivity_threshold},
                        {"t_bound", r.t_bound},
                        {"domination", r.min_max_domination}});
      }
      const auto c = p.constants();
      Json constants{{"M", c.m}, {"delta_tilde", c.delta_tilde}};
      constants["delta"] = c.delta ? Json(*c.delta) : Json(nullptr);
      emit(g, "forms ct1",
           {{"q0", q0}, {"skew", skew}, {"N", p.n()}, {"constants", constants}, {"rows", rows}},
           t, false);
      return 0;
    };
  });

  std::vector<double> b_list;
  auto* counter = forms_cmd->add_subcommand("counterexample", "Exterior-square counterexample");
  counter->add_option("--b", b_list, "b values")->required()->delimiter(',');
  counter->callback([&] {
    action = [&] {
      Table t{{"b", "q_wedge", "norm_sq", "min_ratio", "q_orthogonality"}, {}};
      Json rows = Json::array();
      for (double b : b_list) {
        const auto r = sf::forms::counterexample_eval(b);
        t.add({r.b, r.q_wedge, r.norm_sq, r.min_ratio, r.q_orthogonality});
        rows.push_back({{"b", r.b},
                        {"q_wedge", r.q_wedge},
                        {"norm_sq", r.norm_sq},
                        {"min_ratio", r.min_ratio},
                        {"q_orthogonality", r.q_orthogonality}});
      }
      emit(g, "forms counterexample", {{"rows", rows}}, t, false);
      return 0;
    };
  });

  // pde
  auto* pde_cmd = app.add_subcommand("pde", "Mixed boundary eigenproblems on rectangles");
  pde_cmd->require_subcommand(1);
  std::vector<double> widths;
  double h = 1.0 / 128;
  int k = 1;
  std::string side = "left";
  auto* mixed = pde_cmd->add_subcommand("mixed", "Unit square with a Neumann window");
  mixed->set_help_flag("--help", "Print this help message and exit");  // frees --h
  mixed->add_option("--w", widths, "Window widths")->required()->delimiter(',');
  mixed->add_option("--h", h, "Grid spacing")->capture_default_str();
  mixed->add_option("--k", k, "Eigenvalue count")->capture_default_str();
  mixed->add_option("--side", side, "left, right, bottom or top")->capture_default_str();
  mixed->callback([&] {
    action = [&] {
      sf::pde::RectangleProblem p;
      p.h = h;
      sf::linalg::SparseEigenOptions opt;
      opt.seed = g.seed;
      const auto dirichlet = sf::pde::rectangle_mixed_fdm(p, k, opt);
      const auto rows = sf::pde::window_sweep(p, parse_side(side), widths, k);
      Table t;
      t.header.push_back("w");
      for (int i = 0; i < k; ++i) t.header.push_back(column("lambda", i));
      for (int i = 0; i < k; ++i) t.header.push_back(column("dirichlet", i));
      Json jrows = Json::array();
      for (const auto& r : rows) {
        std::vector<double> line{r.width};
        for (int i = 0; i < k; ++i) line.push_back(r.eigenvalues[i]);
        for (int i = 0; i < k; ++i) line.push_back(dirichlet.eigenvalues[i]);
        t.add(line);
        jrows.push_back({{"w", r.width},
                         {"eigenvalues", sf::io::vector_to_json(r.eigenvalues)},
                         {"warnings", r.warnings}});
      }
      for (const auto& r : rows)
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      emit(g, "pde mixed",
           {{"h", h},
            {"side", side},
            {"dirichlet", sf::io::vector_to_json(dirichlet.eigenvalues)},
            {"rows", jrows}},
           t, true);
      return 0;
    };
  });

  int dim = 3;
  double pen_h = 1.0 / 32;
  int pen_k = 3;
  auto* pen = pde_cmd->add_subcommand("penalized", "Penalized half-square vs mixed problem");
  pen->set_help_flag("--help", "Print this help message and exit");
  pen->add_option("--eps", eps_list, "Penalty values, decreasing")->required()->delimiter(',');
  pen->add_option("--h", pen_h, "Grid spacing")->capture_default_str();
  pen->add_option("--k", pen_k, "Eigenvalue count")->capture_default_str();
  pen->add_option("--dim", dim, "Emulated dimension n of the scaling")->capture_default_str();
  pen->callback([&] {
    action = [&] {
      sf::pde::PenalizedProblem p;
      p.h = pen_h;
      p.emulated_dimension = dim;
      const auto rows = sf::pde::penalized_domain_sweep(p, eps_list, pen_k);
      Table t;
      t.header.push_back("eps");
      for (int i = 0; i < pen_k; ++i) t.header.push_back(column("lambda", i));
      for (int i = 0; i < pen_k; ++i) t.header.push_back(column("reference", i));
      for (int i = 0; i < pen_k; ++i) t.header.push_back(column("difference", i));
      Json jrows = Json::array();
      for (const auto& r : rows) {
        std::vector<double> line{r.eps};
        for (const sf::Vector* v : {&r.eigenvalues, &r.reference, &r.difference})
          for (int i = 0; i < pen_k; ++i) line.push_back((*v)[i]);
        t.add(line);
        jrows.push_back({{"eps", r.eps},
                         {"eigenvalues", sf::io::vector_to_json(r.eigenvalues)},
                         {"reference", sf::io::vector_to_json(r.reference)},
                         {"difference", sf::io::vector_to_json(r.difference)}});
      }
      emit(g, "pde penalized", {{"h", pen_h}, {"dimension", dim}, {"rows", jrows}}, t, true);
      return 0;
    };
  });

  // volume
  auto* vol_cmd = app.add_subcommand("volume", "Cuboid volume budget");
  vol_cmd->require_subcommand(1);
  sf::pde::VolumeBudget budget;
  auto* vol_budget = vol_cmd->add_subcommand("budget", "Cuboid with given volume and floor");
  vol_budget->add_option("--n", budget.n, "Ambient dimension")->required();
  vol_budget->add_option("--V", budget.v, "Target volume")->required();
  vol_budget->add_option("--volM", budget.vol_m, "Current volume")->required();
  vol_budget->add_option("--T", budget.t, "Spectral floor")->required();
  vol_budget->add_option("--a-max", budget.a_max, "Cap on a (default (V - volM)^(1/n))");
  vol_budget->callback([&] {
    action = [&] {
      const auto c = sf::pde::volume_budget(budget);
      std::vector<double> sides(budget.n - 1, c.a);
      sides.push_back(c.b);
      const double lambda1 = sf::pde::cuboid_dirichlet_spectrum(sides, 1)[0];
      Table t{{"a", "b", "lambda1", "volume_error", "floor_met"}, {}};
      t.add({c.a, c.b, lambda1, c.volume_error, c.floor_met ? 1.0 : 0.0});
      emit(g, "volume budget",
           {{"n", budget.n},
            {"V", budget.v},
            {"vol_M", budget.vol_m},
            {"T", budget.t},
            {"a", c.a},
            {"b", c.b},
            {"lambda1", lambda1},
            {"volume_error", c.volume_error},
            {"floor_met", c.floor_met}},
           t, false);
      return c.floor_met ? 0 : kExitNumerical;
    };
  });

  // pipeline
  sf::pipeline::PipelineConfig pcfg;
  double volume = 0.0, pipe_eps = 0.0;
  std::optional<double> floor;
  auto* pipe = app.add_subcommand("pipeline", "Target spectrum to model and cuboid");
  pipe->add_option("--target", target, "Target spectrum")->required()->delimiter(',');
  pipe->add_option("--V", volume, "Target volume")->required();
  pipe->add_option("--eps", pipe_eps, "eps")->required();
  pipe->add_option("--volM", pcfg.vol_m, "Volume proxy of the manifold part")
      ->capture_default_str();
  pipe->add_option("--T", floor, "Spectral floor (default 10 a_N)");
  pipe->add_option("--n", pcfg.dimension, "Ambient dimension")->capture_default_str();
  pipe->add_option("--sweep-eps", pcfg.sweep_eps, "Optional eps sweep")->delimiter(',');
  pipe->add_option("--mode", mode, "leading or refined")->capture_default_str();
  pipe->callback([&] {
    action = [&] {
      pcfg.tol = g.tolerances();
      pcfg.seed = g.seed;
      pcfg.mode = parse_mode(mode);
      pcfg.floor = floor;
      pcfg.timings = g.timings;
      const sf::graph::SpectrumTarget t{to_vector(target)};
      const auto r = sf::pipeline::run_pipeline(t, volume, pipe_eps, pcfg);
      Json body = sf::pipeline::to_json(r);
      Table tab{{"k", "target", "scaled_eigenvalue", "relative_error"}, {}};
      for (Eigen::Index i = 0; i < r.scaled_spectrum.size(); ++i)
        tab.add({double(i + 1), r.target[i], r.scaled_spectrum[i],
                 std::abs(r.scaled_spectrum[i] - r.target[i]) / r.target[i]});
      emit(g, "pipeline", body, tab, false);
      if (!r.passed) std::cerr << "pipeline FAILED at " << r.failed_stage << ": " << r.message << "\n";
      return r.passed ? 0 : r.error_kind;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (!(g.tol_eigen > 0.0) || !(g.tol_inverse > 0.0))
      throw sf::ValidationError("tolerances must be positive");
    if (!g.format.empty()) sf::io::parse_format(g.format);
    configure_threads(g);
    return action();
  } catch (const sf::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const sf::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return kExitNumerical;
  } catch (const sf::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
