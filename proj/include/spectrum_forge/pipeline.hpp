#pragma once

// End-to-end run: graph weights for a target spectrum, collar weights that
// reproduce them on the thin-surface model, the model spectrum, and the
// cuboid that pads the volume.

#include "spectrum_forge/core.hpp"
#include "spectrum_forge/graph_core.hpp"
#include "spectrum_forge/mixed_bc.hpp"
#include "spectrum_forge/report.hpp"
#include "spectrum_forge/thin_surface.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spectrum_forge::pipeline {

struct PipelineConfig {
  Tolerances tol;
  std::uint64_t seed = 0;
  surface::MassMode mode = surface::MassMode::Refined;
  double spectrum_tolerance = 1e-6;  // relative, (1/eps) model spectrum vs target
  double vol_m = 1.0;                // volume proxy of the manifold part
  std::optional<double> floor;       // T; defaults to 10 a_N
  int dimension = 3;                 // ambient n for the cuboid
  std::vector<double> sweep_eps;     // optional eps-sweep stage
  bool timings = false;
  Execution exec = Execution::Parallel;
};

struct PipelineReport {
  bool passed = false;
  std::string failed_stage;
  std::string message;
  int error_kind = 0;  // 0 none, 2 validation, 3 numerical

  Vector target;
  double v = 0.0;
  double eps = 0.0;
  std::optional<graph::DirichletGraph> graph_weights;
  std::optional<surface::PrescriptionResult> prescription;
  std::optional<std::vector<surface::SweepRow>> sweep;
  std::vector<double> sweep_skipped;
  std::optional<SpectralReport> model;
  Vector scaled_spectrum;
  double spectrum_error = 0.0;
  std::optional<pde::CuboidSize> cuboid;
  pde::VolumeBudget budget;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
};

/// Validates target and inputs up front (ValidationError); stage failures
/// are recorded in the report instead of thrown.
PipelineReport run_pipeline(const graph::SpectrumTarget& target, double v, double eps,
                            const PipelineConfig& config = {});

io::Json to_json(const PipelineReport& r);

}  // namespace spectrum_forge::pipeline
