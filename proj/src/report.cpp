#include "spectrum_forge/report.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace spectrum_forge::io {

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw ValidationError("unknown output format '" + name + "' (expected json or csv)");
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError("expected a JSON array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

graph::DirichletGraph graph_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ValidationError("graph spec must be a JSON object");
    const long long n = j.at("n").get<long long>();
    if (n < 1) throw ValidationError("graph spec: n must be positive");
    graph::DirichletGraph g;
    g.mu = vector_from_json(j.at("mu"));
    g.boundary = vector_from_json(j.at("theta_boundary"));
    if (g.mu.size() != n || g.boundary.size() != n)
      throw ValidationError("graph spec: mu and theta_boundary must have length n");
    g.interior = Matrix::Zero(n, n);
    std::set<std::pair<long long, long long>> seen;
    for (const Json& e : j.at("theta_interior")) {
      if (!e.is_array() || e.size() != 3)
        throw ValidationError("graph spec: theta_interior entries are [i, j, w]");
      long long a = e[0].get<long long>();
      long long b = e[1].get<long long>();
      const double w = e[2].get<double>();
      if (a > b) std::swap(a, b);
      if (a < 0 || b >= n || a == b)
        throw ValidationError("graph spec: interior edge index out of range");
      if (!seen.emplace(a, b).second)
        throw ValidationError("graph spec: interior edge listed twice");
      g.interior(a, b) = g.interior(b, a) = w;
    }
    if (static_cast<long long>(seen.size()) != n * (n - 1) / 2)
      throw ValidationError("graph spec: every pair i < j needs a weight");
    g.validate();
    return g;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("graph spec: ") + e.what());
  }
}

Json graph_to_json(const graph::DirichletGraph& g) {
  Json edges = Json::array();
  for (Eigen::Index i = 0; i < g.size(); ++i)
    for (Eigen::Index k = i + 1; k < g.size(); ++k)
      edges.push_back(Json::array({i, k, g.interior(i, k)}));
  return Json{{"n", g.size()},
              {"mu", vector_to_json(g.mu)},
              {"theta_interior", edges},
              {"theta_boundary", vector_to_json(g.boundary)}};
}

Json report_to_json(const SpectralReport& r) {
  Json j{{"eigenvalues", vector_to_json(r.eigenvalues)},
         {"residual_norms", vector_to_json(r.residual_norms)},
         {"iterations", r.iterations},
         {"tolerance", r.tolerance},
         {"warnings", r.warnings}};
  if (r.eigenvectors) {
    Json cols = Json::array();
    for (Eigen::Index c = 0; c < r.eigenvectors->cols(); ++c)
      cols.push_back(vector_to_json(r.eigenvectors->col(c)));
    j["eigenvectors"] = cols;
  } else {
    j["eigenvectors"] = nullptr;
  }
  return j;
}

SpectralReport report_from_json(const Json& j) {
  try {
    SpectralReport r;
    r.eigenvalues = vector_from_json(j.at("eigenvalues"));
    r.residual_norms = vector_from_json(j.at("residual_norms"));
    r.iterations = j.at("iterations").get<int>();
    r.tolerance = j.at("tolerance").get<double>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    const Json& v = j.at("eigenvectors");
    if (!v.is_null()) {
      const Eigen::Index cols = static_cast<Eigen::Index>(v.size());
      const Eigen::Index rows = cols ? static_cast<Eigen::Index>(v[0].size()) : 0;
      Matrix m(rows, cols);
      for (Eigen::Index c = 0; c < cols; ++c) {
        const Vector col = vector_from_json(v[c]);
        if (col.size() != rows) throw ValidationError("ragged eigenvector matrix");
        m.col(c) = col;
      }
      r.eigenvectors = m;
    }
    return r;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("spectral report: ") + e.what());
  }
}

void Table::add(std::vector<double> row) {
  if (row.size() != header.size()) throw std::logic_error("table row width mismatch");
  rows.push_back(std::move(row));
}

std::string to_csv(const Table& t) {
  std::string out;
  for (size_t c = 0; c < t.header.size(); ++c) {
    if (c) out += ',';
    out += t.header[c];
  }
  out += '\n';
  char buf[40];
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Table table_from_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("CSV is empty");
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream r(line);
    std::string cell;
    while (std::getline(r, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw ValidationError("CSV cell is not a number: " + cell);
      row.push_back(v);
    }
    if (row.size() != t.header.size()) throw ValidationError("CSV row width mismatch");
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json with_schema(Json body) {
  body["schema"] = kSchema;
  body["version"] = SPECTRUM_FORGE_VERSION;
  return body;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed to write to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  f << text;
  f.close();
  if (!f) throw IoError("failed to write '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading: " + std::strerror(errno));
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw IoError("failed to read '" + path + "'");
  return ss.str();
}

graph::DirichletGraph read_graph(const std::string& path) {
  const std::string text = read_text(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
  return graph_from_json(j);
}

void emit_report(const Json& report, const std::string& path) {
  write_text(path, report.dump(2) + "\n");
}

void emit_table(const Table& table, const std::string& path) { write_text(path, to_csv(table)); }

}  // namespace spectrum_forge::io
