#pragma once

// JSON and CSV serialization shared by the CLI and the pipeline.

#include "spectrum_forge/core.hpp"
#include "spectrum_forge/graph_core.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace spectrum_forge::io {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "spectrum-forge/1";

enum class Format { Json, Csv };

/// "json" or "csv"; anything else is a ValidationError (usage error).
Format parse_format(const std::string& name);

/// {"n", "mu", "theta_interior": [[i, j, w], ...], "theta_boundary"} with
/// 0-based vertex indices. Every pair i < j must appear exactly once.
graph::DirichletGraph graph_from_json(const Json& j);
Json graph_to_json(const graph::DirichletGraph& g);

Json report_to_json(const SpectralReport& r);
SpectralReport report_from_json(const Json& j);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// Numeric table for CSV output.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

/// '.' decimal point, '\n' line endings, header row, %.17g values.
std::string to_csv(const Table& t);
Table table_from_csv(const std::string& text);

/// Adds "schema" and "version" to an object.
Json with_schema(Json body);

/// Writes text to `path`; "-" or "" means stdout. IoError names the path.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

graph::DirichletGraph read_graph(const std::string& path);

/// Emits JSON (pretty, trailing newline) or CSV to `path`.
void emit_report(const Json& report, const std::string& path);
void emit_table(const Table& table, const std::string& path);

}  // namespace spectrum_forge::io
