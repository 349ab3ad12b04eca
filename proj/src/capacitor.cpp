#include "spectrum_forge/capacitor.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace spectrum_forge::capacitor {

namespace {

double gd(double x) { return std::atan(std::sinh(x)); }

void require_in_domain(const CapacitorSpec& spec, double x) {
  const double lo = spec.x_min();
  const double hi = spec.x_max();
  const double slack = 1e-12 * std::max(1.0, std::abs(lo));
  if (!(x >= lo - slack && x <= hi + slack)) {
    std::ostringstream os;
    os << "x = " << x << " outside capacitor domain [" << lo << ", " << hi << "]";
    throw std::out_of_range(os.str());
  }
}

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  const double value = gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, 1e-14, &error);
  // Absolute floor 1e-12 as documented for the collar integrals.
  if (!(error <= std::max(1e-12, 1e-10 * std::abs(value)))) {
    throw NumericalError("Gauss-Kronrod quadrature missed its tolerance", error);
  }
  return value;
}

}  // namespace

void CapacitorSpec::validate() const {
  if (!(coeff > 0.0) || !(length_scale > 0.0) || !std::isfinite(coeff) ||
      !std::isfinite(length_scale))
    throw ValidationError("capacitor coefficient and length scale must be positive");
  if (!(coeff < length_scale)) {
    std::ostringstream os;
    os << "degenerate collar: coefficient " << coeff << " must be below length scale "
       << length_scale;
    throw ValidationError(os.str());
  }
}

double CapacitorSpec::half_width() const {
  validate();
  const double r = length_scale / coeff;
  // ln(r + sqrt(r^2 - 1)); (r-1)(r+1) avoids cancellation near r = 1.
  return std::log(r + std::sqrt((r - 1.0) * (r + 1.0)));
}

double CapacitorSpec::gd_half_width() const {
  validate();
  const double r = length_scale / coeff;
  return std::atan(std::sqrt((r - 1.0) * (r + 1.0)));
}

CapacitorSpec CapacitorSpec::collar(Kind kind, double eps, double theta) {
  const double c = kind == Kind::Full ? std::numbers::pi * eps * theta
                                      : 0.5 * std::numbers::pi * eps * theta;
  return {kind, c, 1.0};
}

double equilibrium_potential(const CapacitorSpec& spec, double x) {
  require_in_domain(spec, x);
  const double s = spec.gd_half_width();
  if (spec.kind == Kind::Half) {
    if (x <= spec.x_min()) return 1.0;
    return -gd(x) / s;
  }
  if (x <= spec.x_min()) return 1.0;
  if (x >= spec.x_max()) return 0.0;
  return 0.5 - gd(x) / (2.0 * s);
}

double equilibrium_derivative(const CapacitorSpec& spec, double x) {
  require_in_domain(spec, x);
  const double s = spec.gd_half_width();
  const double factor = spec.kind == Kind::Half ? -1.0 / s : -0.5 / s;
  return factor / std::cosh(x);
}

double capacity(const CapacitorSpec& spec) {
  const double s = spec.gd_half_width();
  return spec.kind == Kind::Half ? spec.coeff / s : spec.coeff / (2.0 * s);
}

double dirichlet_energy(const CapacitorSpec& spec,
                        const std::function<double(double)>& derivative) {
  spec.validate();
  const double c = spec.coeff;
  return integrate(
      [&](double x) {
        const double d = derivative(x);
        return d * d * c * std::cosh(x);
      },
      spec.x_min(), spec.x_max());
}

double capacity_quadrature(const CapacitorSpec& spec) {
  return dirichlet_energy(spec, [&](double x) { return equilibrium_derivative(spec, x); });
}

double potential_mass(const CapacitorSpec& spec, double a_val, double b_val) {
  spec.validate();
  if (spec.kind == Kind::Half && b_val != 0.0)
    throw ValidationError("half capacitor potential mass requires b = 0");
  const double c = spec.coeff;
  return integrate(
      [&](double x) {
        const double f = (a_val - b_val) * equilibrium_potential(spec, x) + b_val;
        return f * f * c * std::cosh(x);
      },
      spec.x_min(), spec.x_max());
}

double area(const CapacitorSpec& spec) {
  spec.validate();
  // c sinh a = sqrt(l^2 - c^2) since cosh a = l / c.
  const double l = spec.length_scale;
  const double c = spec.coeff;
  const double half = std::sqrt((l - c) * (l + c));
  return spec.kind == Kind::Full ? 2.0 * half : half;
}

double normal_derivative_norm(const CapacitorSpec& spec, Boundary which) {
  spec.validate();
  const double x = which == Boundary::Plus ? spec.x_min() : spec.x_max();
  const double circle = spec.coeff * std::cosh(x);
  return std::abs(equilibrium_derivative(spec, x)) * std::sqrt(circle);
}

PotentialTrace potential_trace(const CapacitorSpec& spec, double a_val, double b_val,
                               int samples) {
  if (samples < 2) throw ValidationError("potential trace needs at least two samples");
  const double lo = spec.x_min();
  const double hi = spec.x_max();
  PotentialTrace t;
  t.x.reserve(samples);
  t.f0.reserve(samples);
  t.f_ab.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double x = i + 1 == samples ? hi : lo + (hi - lo) * i / (samples - 1);
    const double f = equilibrium_potential(spec, x);
    t.x.push_back(x);
    t.f0.push_back(f);
    t.f_ab.push_back((a_val - b_val) * f + b_val);
  }
  return t;
}

}  // namespace spectrum_forge::capacitor
