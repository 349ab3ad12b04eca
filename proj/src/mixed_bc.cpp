#include "spectrum_forge/mixed_bc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>

namespace spectrum_forge::pde {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

int grid_count(double length, double h, const char* what) {
  const double r = length / h;
  const double n = std::round(r);
  if (!(n >= 1.0) || std::abs(r - n) > 1e-9 * std::max(1.0, r)) {
    std::ostringstream os;
    os << "grid spacing " << h << " does not divide " << what << " = " << length;
    throw ValidationError(os.str());
  }
  return static_cast<int>(n);
}

// Cellwise coefficients on an nx x ny grid; a cell with coeff 0 is absent.
struct CellGrid {
  int nx = 0, ny = 0;
  double h = 0.0;
  std::vector<double> coeff, mass;  // per cell, index j * nx + i
  std::vector<char> dirichlet;      // per node, index j * (nx + 1) + i

  CellGrid(int nx_, int ny_, double h_)
      : nx(nx_), ny(ny_), h(h_), coeff(nx_ * ny_, 1.0), mass(nx_ * ny_, 1.0),
        dirichlet((nx_ + 1) * (ny_ + 1), 0) {}

  int node(int i, int j) const { return j * (nx + 1) + i; }
};

SpectralReport solve_grid(const CellGrid& g, int k, const linalg::SparseEigenOptions& options) {
  const int nodes = (g.nx + 1) * (g.ny + 1);
  std::vector<char> active(nodes, 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.coeff[j * g.nx + i] > 0.0)
        for (int dj = 0; dj < 2; ++dj)
          for (int di = 0; di < 2; ++di) active[g.node(i + di, j + dj)] = 1;

  std::vector<int> index(nodes, -1);
  int free = 0;
  for (int p = 0; p < nodes; ++p)
    if (active[p] && !g.dirichlet[p]) index[p] = free++;
  if (free < k) throw ValidationError("grid has fewer free nodes than requested eigenvalues");

  std::vector<Eigen::Triplet<double>> trip;
  Vector mass = Vector::Zero(free);
  auto edge = [&](int p, int q, double w) {
    const int a = index[p];
    const int b = index[q];
    if (a >= 0) trip.emplace_back(a, a, w);
    if (b >= 0) trip.emplace_back(b, b, w);
    if (a >= 0 && b >= 0) {
      trip.emplace_back(a, b, -w);
      trip.emplace_back(b, a, -w);
    }
  };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = g.coeff[j * g.nx + i];
      if (c <= 0.0) continue;
      const int n00 = g.node(i, j), n10 = g.node(i + 1, j);
      const int n01 = g.node(i, j + 1), n11 = g.node(i + 1, j + 1);
      const double m = g.mass[j * g.nx + i] * g.h * g.h / 4.0;
      for (int p : {n00, n10, n01, n11})
        if (index[p] >= 0) mass[index[p]] += m;
      // Square cells: the h^2 of the difference quotient cancels the h^2 area.
      const double w = c / 2.0;
      edge(n00, n10, w);
      edge(n01, n11, w);
      edge(n00, n01, w);
      edge(n10, n11, w);
    }
  }
  SparseMatrix stiffness(free, free);
  stiffness.setFromTriplets(trip.begin(), trip.end());
  return linalg::smallest_eigenpairs(stiffness, mass, k, options);
}

double side_length(const RectangleProblem& p, Side s) {
  return (s == Side::Left || s == Side::Right) ? p.ly : p.lx;
}

}  // namespace

Vector cuboid_dirichlet_spectrum(const std::vector<double>& sides, int k) {
  if (sides.empty()) throw ValidationError("cuboid needs at least one side");
  for (double s : sides)
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("cuboid sides must be positive");
  if (k < 1) throw ValidationError("k must be positive");

  using Tuple = std::vector<int>;
  auto value = [&](const Tuple& m) {
    double v = 0.0;
    for (size_t i = 0; i < m.size(); ++i) v += kPi2 * m[i] * m[i] / (sides[i] * sides[i]);
    return v;
  };
  using Entry = std::pair<double, Tuple>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::set<Tuple> seen;
  Tuple start(sides.size(), 1);
  heap.emplace(value(start), start);
  seen.insert(start);
  Vector out(k);
  for (int found = 0; found < k; ++found) {
    const auto [v, m] = heap.top();
    heap.pop();
    out[found] = v;
    for (size_t i = 0; i < m.size(); ++i) {
      Tuple next = m;
      ++next[i];
      if (seen.insert(next).second) heap.emplace(value(next), next);
    }
  }
  return out;
}

void VolumeBudget::validate() const {
  if (n < 2) throw ValidationError("ambient dimension must be at least 2");
  if (!std::isfinite(v) || !std::isfinite(vol_m) || !(v > vol_m))
    throw ValidationError("target volume V must exceed the current volume");
  if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("spectral floor T must be positive");
}

CuboidSize volume_budget(const VolumeBudget& v) {
  v.validate();
  const double budget = v.v - v.vol_m;
  const double cap = v.a_max > 0.0 ? v.a_max : std::pow(budget, 1.0 / v.n);
  CuboidSize c;
  c.a = std::min(cap, std::numbers::pi * std::sqrt((v.n - 1) / (2.0 * v.t)));
  auto evaluate = [&] {
    c.b = budget / std::pow(c.a, v.n - 1);
    std::vector<double> sides(v.n - 1, c.a);
    sides.push_back(c.b);
    c.lambda1 = cuboid_dirichlet_spectrum(sides, 1)[0];
  };
  evaluate();
  // At a = pi sqrt((n-1)/(2T)) the floor is met with equality up to rounding;
  // step a down by ulps until it holds in floating point.
  for (int step = 0; step < 64 && c.lambda1 < 2.0 * v.t; ++step) {
    c.a = std::nextafter(c.a, 0.0);
    evaluate();
  }
  c.volume_error = std::pow(c.a, v.n - 1) * c.b - budget;
  c.floor_met = c.lambda1 >= 2.0 * v.t;
  return c;
}

void RectangleProblem::validate() const {
  if (!(lx > 0.0) || !(ly > 0.0) || !(h > 0.0))
    throw ValidationError("rectangle sides and h must be positive");
  cells_x();
  cells_y();
  if (std::none_of(sides.begin(), sides.end(),
                   [](Condition c) { return c == Condition::Dirichlet; }))
    throw ValidationError("at least one side must carry a Dirichlet condition");
  for (const NeumannWindow& w : windows) {
    const double len = side_length(*this, w.side);
    const double slack = 1e-12 * len;
    if (!(w.width >= 0.0)) throw ValidationError("window width must be nonnegative");
    if (w.center - 0.5 * w.width < -slack || w.center + 0.5 * w.width > len + slack)
      throw ValidationError("Neumann window does not fit inside its side");
  }
}

int RectangleProblem::cells_x() const { return grid_count(lx, h, "Lx"); }
int RectangleProblem::cells_y() const { return grid_count(ly, h, "Ly"); }

SpectralReport rectangle_mixed_fdm(const RectangleProblem& p, int k,
                                   const linalg::SparseEigenOptions& options) {
  p.validate();
  CellGrid g(p.cells_x(), p.cells_y(), p.h);
  std::vector<std::string> warnings;

  auto mark = [&](Side s, bool value, const std::function<bool(double)>& in_window) {
    const int count = (s == Side::Left || s == Side::Right) ? g.ny : g.nx;
    for (int t = 0; t <= count; ++t) {
      int i = 0, j = 0;
      switch (s) {
        case Side::Left: i = 0, j = t; break;
        case Side::Right: i = g.nx, j = t; break;
        case Side::Bottom: i = t, j = 0; break;
        case Side::Top: i = t, j = g.ny; break;
      }
      if (in_window(t * p.h)) g.dirichlet[g.node(i, j)] = value;
    }
  };
  const std::array<Side, 4> all{Side::Left, Side::Right, Side::Bottom, Side::Top};
  for (Side s : all)
    if (p.sides[static_cast<int>(s)] == Condition::Dirichlet)
      mark(s, true, [](double) { return true; });
  for (NeumannWindow w : p.windows) {
    if (w.width < p.h) {
      std::ostringstream os;
      os << "window width " << w.width << " is narrower than h = " << p.h << "; rounded up to h";
      warnings.push_back(os.str());
      w.width = p.h;
    }
    const double half = 0.5 * w.width;
    const double len = side_length(p, w.side);
    // Open window; the side's end points stay with the neighbouring sides.
    mark(w.side, false, [&, half, len](double t) {
      return std::abs(t - w.center) < half - 1e-9 * p.h && t > 0.0 && t < len;
    });
  }

  SpectralReport r = solve_grid(g, k, options);
  r.warnings.insert(r.warnings.end(), warnings.begin(), warnings.end());
  return r;
}

std::vector<WindowRow> window_sweep(const RectangleProblem& base, Side side,
                                    const std::vector<double>& widths, int k, Execution exec) {
  std::vector<WindowRow> rows(widths.size());
  const double center = 0.5 * side_length(base, side);
  kernels::for_each_index(
      static_cast<Eigen::Index>(widths.size()),
      [&](Eigen::Index r) {
        RectangleProblem p = base;
        p.windows = {NeumannWindow{side, center, widths[r]}};
        linalg::SparseEigenOptions opt;
        opt.exec = Execution::Serial;
        const SpectralReport rep = rectangle_mixed_fdm(p, k, opt);
        rows[r] = {widths[r], rep.eigenvalues, rep.warnings};
      },
      exec);
  return rows;
}

void PenalizedProblem::validate() const {
  if (!(lx > 0.0) || !(ly > 0.0) || !(h > 0.0))
    throw ValidationError("rectangle sides and h must be positive");
  grid_count(lx, h, "Lx");
  grid_count(ly, h, "Ly");
  if (!(0.0 <= x0 && x0 < x1 && x1 <= lx && 0.0 <= y0 && y0 < y1 && y1 <= ly))
    throw ValidationError("Omega_+ must be a nonempty sub-rectangle of M");
  for (double c : {x0, x1, y0, y1}) {
    const double r = c / h;
    if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r))
      throw ValidationError("Omega_+ corners must lie on the grid");
  }
  if (emulated_dimension < 2) throw ValidationError("emulated dimension must be at least 2");
}

namespace {

CellGrid penalized_grid(const PenalizedProblem& p, double eps, bool reference) {
  CellGrid g(grid_count(p.lx, p.h, "Lx"), grid_count(p.ly, p.h, "Ly"), p.h);
  const double half_n = 0.5 * p.emulated_dimension;
  const double coeff_minus = reference ? 0.0 : std::pow(eps, half_n - 1.0);
  const double mass_minus = reference ? 0.0 : std::pow(eps, half_n);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double cx = (i + 0.5) * p.h;
      const double cy = (j + 0.5) * p.h;
      const bool plus = cx > p.x0 && cx < p.x1 && cy > p.y0 && cy < p.y1;
      if (!plus) {
        g.coeff[j * g.nx + i] = coeff_minus;
        g.mass[j * g.nx + i] = mass_minus;
      }
    }
  }
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (i == 0 || j == 0 || i == g.nx || j == g.ny) g.dirichlet[g.node(i, j)] = 1;
  return g;
}

}  // namespace

SpectralReport penalized_reference(const PenalizedProblem& p, int k,
                                   const linalg::SparseEigenOptions& options) {
  p.validate();
  return solve_grid(penalized_grid(p, 1.0, true), k, options);
}

SpectralReport penalized_spectrum(const PenalizedProblem& p, double eps, int k,
                                  const linalg::SparseEigenOptions& options) {
  p.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps_pen must be positive");
  return solve_grid(penalized_grid(p, eps, false), k, options);
}

std::vector<PenalizedRow> penalized_domain_sweep(const PenalizedProblem& p,
                                                 const std::vector<double>& eps_list, int k,
                                                 Execution exec) {
  p.validate();
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ValidationError("eps_pen values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw ValidationError("eps_pen values must be decreasing");
  }
  linalg::SparseEigenOptions opt;
  opt.exec = Execution::Serial;
  const Vector reference = penalized_reference(p, k, opt).eigenvalues;
  std::vector<PenalizedRow> rows(eps_list.size());
  kernels::for_each_index(
      static_cast<Eigen::Index>(eps_list.size()),
      [&](Eigen::Index r) {
        const Vector ev = penalized_spectrum(p, eps_list[r], k, opt).eigenvalues;
        rows[r] = {eps_list[r], ev, reference, (ev - reference).cwiseAbs()};
      },
      exec);
  return rows;
}

}  // namespace spectrum_forge::pde
