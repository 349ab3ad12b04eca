#include "spectrum_forge/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace spectrum_forge::pipeline {

namespace {

class StageTimer {
 public:
  StageTimer(PipelineReport& r, std::string name, bool enabled)
      : report_(r), name_(std::move(name)), enabled_(enabled),
        start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    if (!enabled_) return;
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    report_.timings.emplace_back(name_, dt.count());
  }

 private:
  PipelineReport& report_;
  std::string name_;
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

void fail(PipelineReport& r, const std::string& stage, const std::string& message, int kind) {
  r.passed = false;
  r.failed_stage = stage;
  r.message = message;
  r.error_kind = kind;
}

// Runs one stage; returns false and records the failure if it throws.
template <class F>
bool stage(PipelineReport& r, const std::string& name, bool timed, F&& body) {
  StageTimer t(r, name, timed);
  try {
    body();
    return true;
  } catch (const ValidationError& e) {
    fail(r, name, e.what(), 2);
  } catch (const NumericalError& e) {
    fail(r, name, e.what(), 3);
  } catch (const std::out_of_range& e) {
    fail(r, name, e.what(), 2);
  }
  return false;
}

}  // namespace

PipelineReport run_pipeline(const graph::SpectrumTarget& target, double v, double eps,
                            const PipelineConfig& config) {
  target.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be positive");
  if (!(config.spectrum_tolerance > 0.0)) throw ValidationError("tolerances must be positive");
  if (config.floor && !(*config.floor > 0.0)) throw ValidationError("floor T must be positive");
  for (double e : config.sweep_eps)
    if (!(e > 0.0)) throw ValidationError("sweep eps values must be positive");

  PipelineReport r;
  r.target = target.values;
  r.v = v;
  r.eps = eps;
  r.budget.n = config.dimension;
  r.budget.v = v;
  r.budget.vol_m = config.vol_m;
  r.budget.t = config.floor.value_or(10.0 * target.values.maxCoeff());
  r.budget.validate();

  const Eigen::Index n = target.values.size();
  graph::InverseOptions inv;
  inv.tol = config.tol;
  inv.seed = config.seed;
  inv.exec = config.exec;

  if (!stage(r, "graph_prescription", config.timings, [&] {
        r.graph_weights =
            graph::prescribe_weights(target, surface::reference_measure(n), inv);
      }))
    return r;

  if (!stage(r, "surface_prescription", config.timings, [&] {
        surface::PrescriptionOptions opt;
        opt.mode = config.mode;
        opt.inverse = inv;
        opt.exec = config.exec;
        r.prescription = surface::solve_prescription(target, eps, opt);
      }))
    return r;

  if (!config.sweep_eps.empty()) {
    if (!stage(r, "eps_sweep", config.timings, [&] {
          const double bound = surface::max_admissible_eps(*r.graph_weights);
          std::vector<double> usable;
          for (double e : config.sweep_eps) (e < bound ? usable : r.sweep_skipped).push_back(e);
          r.sweep = surface::epsilon_sweep(*r.graph_weights, usable, config.mode, config.exec);
        }))
      return r;
  }

  if (!stage(r, "model_spectrum", config.timings, [&] {
        const surface::ThinSurfaceModel m =
            surface::assemble_model(r.prescription->surface_graph, eps, config.mode);
        r.model = surface::model_spectrum(m, config.tol);
        r.scaled_spectrum = r.model->eigenvalues / eps;
        r.spectrum_error =
            ((r.scaled_spectrum - r.target).array() / r.target.array()).abs().maxCoeff();
        if (!(r.spectrum_error <= config.spectrum_tolerance)) {
          std::ostringstream os;
          os << "model spectrum misses the target: relative error " << r.spectrum_error
             << " > " << config.spectrum_tolerance;
          throw NumericalError(os.str(), r.spectrum_error);
        }
      }))
    return r;

  if (!stage(r, "volume_budget", config.timings, [&] {
        r.cuboid = pde::volume_budget(r.budget);
        const double budget = r.budget.v - r.budget.vol_m;
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() * budget;
        if (!(std::abs(r.cuboid->volume_error) <= slack))
          throw NumericalError("cuboid volume identity violated", r.cuboid->volume_error);
        if (!r.cuboid->floor_met)
          throw NumericalError("cuboid spectral floor not met", r.cuboid->lambda1);
      }))
    return r;

  r.passed = true;
  return r;
}

io::Json to_json(const PipelineReport& r) {
  using io::Json;
  using io::vector_to_json;
  Json j{{"status", r.passed ? "PASS" : "FAILED"},
         {"target", vector_to_json(r.target)},
         {"V", r.v},
         {"eps", r.eps}};
  if (!r.passed) {
    j["failed_stage"] = r.failed_stage;
    j["message"] = r.message;
  }
  Json stages = Json::object();
  if (r.graph_weights) stages["graph_prescription"] = {{"graph", io::graph_to_json(*r.graph_weights)}};
  if (r.prescription) {
    const auto& p = *r.prescription;
    stages["surface_prescription"] = {{"graph", io::graph_to_json(p.surface_graph)},
                                      {"residual", p.residual},
                                      {"residual_history", p.residual_history},
                                      {"iterations", p.iterations}};
  }
  if (r.sweep) {
    Json rows = Json::array();
    for (const auto& row : *r.sweep)
      rows.push_back({{"eps", row.eps},
                      {"scaled_eigenvalues", vector_to_json(row.scaled_eigenvalues)},
                      {"form_difference", row.form_difference}});
    stages["eps_sweep"] = {{"rows", rows}, {"skipped_eps", r.sweep_skipped}};
  }
  if (r.model) {
    stages["model_spectrum"] = {{"report", io::report_to_json(*r.model)},
                                {"scaled_eigenvalues", vector_to_json(r.scaled_spectrum)},
                                {"relative_error", r.spectrum_error}};
  }
  if (r.cuboid) {
    const auto& c = *r.cuboid;
    stages["volume_budget"] = {{"n", r.budget.n},
                               {"vol_M", r.budget.vol_m},
                               {"T", r.budget.t},
                               {"a", c.a},
                               {"b", c.b},
                               {"lambda1", c.lambda1},
                               {"volume_error", c.volume_error},
                               {"floor_met", c.floor_met}};
  }
  j["stages"] = stages;
  if (!r.timings.empty()) {
    Json t = Json::object();
    for (const auto& [name, sec] : r.timings) t[name] = sec;
    j["timings_s"] = t;
  }
  return io::with_schema(j);
}

}  // namespace spectrum_forge::pipeline
