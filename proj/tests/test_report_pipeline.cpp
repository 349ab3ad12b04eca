#include "spectrum_forge/pipeline.hpp"
#include "spectrum_forge/report.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <numbers>

using namespace spectrum_forge;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("spectrum_forge_test_" + name);
}

graph::SpectrumTarget target(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return {out};
}

}  // namespace

TEST_CASE("CSV formatting") {
  io::Table t{{"eps", "value"}, {}};
  CHECK(io::to_csv(t) == "eps,value\n");
  t.add({0.1, 1.0 / 3.0});
  const std::string csv = io::to_csv(t);
  CHECK(csv == "eps,value\n0.10000000000000001,0.33333333333333331\n");
  CHECK(csv.find('\r') == std::string::npos);
  const io::Table back = io::table_from_csv(csv);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK_THROWS_AS(t.add({1.0}), std::logic_error);
}

TEST_CASE("format names") {
  CHECK(io::parse_format("json") == io::Format::Json);
  CHECK(io::parse_format("csv") == io::Format::Csv);
  CHECK_THROWS_AS(io::parse_format("xml"), ValidationError);
}

TEST_CASE("graph JSON roundtrip and validation") {
  auto g = graph::DirichletGraph::uniform(3, 2.0, 0.5, 1.5);
  g.interior(0, 2) = g.interior(2, 0) = 0.1 + 0.2;
  const auto back = io::graph_from_json(io::graph_to_json(g));
  CHECK(back.mu == g.mu);
  CHECK(back.interior == g.interior);
  CHECK(back.boundary == g.boundary);

  auto j = io::graph_to_json(g);
  j["theta_interior"].erase(0);
  CHECK_THROWS_AS(io::graph_from_json(j), ValidationError);
  j = io::graph_to_json(g);
  j["theta_interior"].push_back({0, 1, 1.0});
  CHECK_THROWS_AS(io::graph_from_json(j), ValidationError);
  CHECK_THROWS_AS(io::graph_from_json(io::Json::parse(R"({"n": 2})")), ValidationError);
}

TEST_CASE("spectral report roundtrip") {
  const auto rep = graph::forward_spectrum(graph::DirichletGraph::uniform(4, 1.3, 0.7, 2.1));
  const std::string text = io::with_schema(io::report_to_json(rep)).dump(2);
  const auto parsed = io::Json::parse(text);
  CHECK(parsed["schema"] == "spectrum-forge/1");
  const SpectralReport back = io::report_from_json(parsed);
  CHECK(back.eigenvalues == rep.eigenvalues);
  CHECK(*back.eigenvectors == *rep.eigenvectors);
  CHECK(back.residual_norms == rep.residual_norms);
  CHECK(back.tolerance == rep.tolerance);
  CHECK(back.warnings == rep.warnings);

  SpectralReport bare;
  bare.eigenvalues = Vector::Constant(1, std::numbers::pi);
  bare.warnings = {"note"};
  const auto b2 = io::report_from_json(io::report_to_json(bare));
  CHECK_FALSE(b2.eigenvectors.has_value());
  CHECK(b2.eigenvalues[0] == std::numbers::pi);
}

TEST_CASE("file output") {
  const fs::path p = temp_file("out.json");
  io::emit_report(io::with_schema({{"x", 0.1}}), p.string());
  const std::string text = io::read_text(p.string());
  CHECK(text.back() == '\n');
  CHECK(io::Json::parse(text)["x"] == 0.1);
  fs::remove(p);
  CHECK_THROWS_AS(io::read_text("/nonexistent/dir/file.json"), IoError);
  try {
    io::write_text("/nonexistent/dir/out.csv", "x");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
  }
}

TEST_CASE("pipeline passes on a two-level target") {
  pipeline::PipelineConfig cfg;
  cfg.sweep_eps = {1e-3, 1e-4, 0.5};
  const auto r = pipeline::run_pipeline(target({1, 3}), 10.0, 1e-5, cfg);
  CHECK(r.passed);
  CHECK(r.spectrum_error < 1e-6);
  REQUIRE(r.cuboid.has_value());
  CHECK(r.cuboid->floor_met);
  CHECK(r.sweep_skipped == std::vector<double>{0.5});
  REQUIRE(r.sweep.has_value());
  CHECK(r.sweep->size() == 2);
  const auto j = pipeline::to_json(r);
  CHECK(j["status"] == "PASS");
  CHECK(j["schema"] == "spectrum-forge/1");
  CHECK_FALSE(j.contains("timings_s"));
}

TEST_CASE("pipeline failures") {
  CHECK_THROWS_AS(pipeline::run_pipeline(target({2, 2}), 10.0, 1e-5), ValidationError);
  CHECK_THROWS_AS(pipeline::run_pipeline(target({1, 3}), 0.5, 1e-5), ValidationError);
  const auto r = pipeline::run_pipeline(target({1, 3}), 10.0, 0.2);
  CHECK_FALSE(r.passed);
  CHECK(r.failed_stage == "surface_prescription");
  CHECK(r.error_kind == 2);
  CHECK(pipeline::to_json(r)["status"] == "FAILED");
}

TEST_CASE("pipeline output is deterministic") {
  pipeline::PipelineConfig cfg;
  cfg.seed = 7;
  const auto a = pipeline::to_json(pipeline::run_pipeline(target({0.5, 1, 4}), 10.0, 1e-5, cfg)).dump(2);
  const auto b = pipeline::to_json(pipeline::run_pipeline(target({0.5, 1, 4}), 10.0, 1e-5, cfg)).dump(2);
  CHECK(a == b);
  cfg.timings = true;
  CHECK(pipeline::to_json(pipeline::run_pipeline(target({1, 3}), 10.0, 1e-5, cfg))
            .contains("timings_s"));
}
