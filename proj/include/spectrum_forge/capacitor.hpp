#pragma once

// Hyperbolic cylinder capacitors.
//
// A capacitor is the cylinder [-a, a] x R/Z (Full) or [-a, 0] x R/Z (Half)
// with metric dx^2 + (c cosh x)^2 dtheta^2 and a = arccosh(l / c). The
// equilibrium potential is 1 on the circle x = -a and 0 on the other
// boundary circle; it depends on x only and solves f'' + tanh(x) f' = 0,
// whose solutions are affine in gd(x) = arcsin(tanh x) = atan(sinh x).

#include "spectrum_forge/core.hpp"

#include <functional>
#include <vector>

namespace spectrum_forge::capacitor {

enum class Kind { Full, Half };

struct CapacitorSpec {
  Kind kind = Kind::Full;
  double coeff = 0.0;         // c, circumference coefficient of the metric
  double length_scale = 1.0;  // l

  /// Throws ValidationError unless 0 < c < l.
  void validate() const;

  /// a = arccosh(l / c).
  double half_width() const;
  /// gd(a) = arcsin(tanh a), computed as atan(sqrt((l/c)^2 - 1)).
  double gd_half_width() const;
  /// Left end and right end of the x-domain.
  double x_min() const { return -half_width(); }
  double x_max() const { return kind == Kind::Full ? half_width() : 0.0; }

  /// Cylinder with coefficient pi * eps * theta (Full) or (pi eps / 2) * theta
  /// (Half) and l = 1, as used for the collars of the thin surface.
  static CapacitorSpec collar(Kind kind, double eps, double theta);
};

/// f0(x); Half: gd(x) / gd(-a); Full: 1/2 - gd(x) / (2 gd(a)).
double equilibrium_potential(const CapacitorSpec& spec, double x);
/// f0'(x).
double equilibrium_derivative(const CapacitorSpec& spec, double x);

/// Closed form. Half: c / gd(a). Full: c / (2 gd(a)).
double capacity(const CapacitorSpec& spec);

/// Capacity by adaptive Gauss-Kronrod quadrature of (f0')^2 c cosh x in x.
double capacity_quadrature(const CapacitorSpec& spec);

/// Dirichlet energy int (f')^2 c cosh x dx of a rotationally symmetric
/// function on the capacitor, given its derivative.
double dirichlet_energy(const CapacitorSpec& spec, const std::function<double(double)>& derivative);

/// L^2 mass of f_ab = (a_val - b_val) f0 + b_val over the cylinder
/// (area element c cosh x dx dtheta). Half requires b_val == 0.
double potential_mass(const CapacitorSpec& spec, double a_val, double b_val);

/// Area of the cylinder: 2 c sinh a (Full) or c sinh a (Half).
double area(const CapacitorSpec& spec);

enum class Boundary { Plus, Minus };  // Plus: x = -a; Minus: x = a (Full) or 0 (Half)

/// || d f0 / d nu ||_{L^2} over one boundary circle: |f0'(x_b)| sqrt(c cosh x_b).
double normal_derivative_norm(const CapacitorSpec& spec, Boundary which = Boundary::Plus);

struct PotentialTrace {
  std::vector<double> x;
  std::vector<double> f0;
  std::vector<double> f_ab;
};

/// Samples f0 and f_ab on `samples` equispaced points of the x-domain.
PotentialTrace potential_trace(const CapacitorSpec& spec, double a_val, double b_val,
                               int samples);

}  // namespace spectrum_forge::capacitor
