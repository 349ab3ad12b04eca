#include "oracles.hpp"

#include "spectrum_forge/capacitor.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace spectrum_forge;
using namespace spectrum_forge::capacitor;

namespace {

constexpr double kPi = std::numbers::pi;

CapacitorSpec spec(Kind k, double c, double l = 1.0) { return {k, c, l}; }

}  // namespace

TEST_CASE("potentials solve the boundary problem") {
  for (Kind k : {Kind::Full, Kind::Half}) {
    const auto s = spec(k, 0.3, 1.7);
    CHECK(equilibrium_potential(s, s.x_min()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(equilibrium_potential(s, s.x_max())) < 1e-14);
    // f'' + tanh(x) f' = 0 by central differences
    for (double t : {0.1, 0.4, 0.7}) {
      const double x = s.x_min() + t * (s.x_max() - s.x_min());
      const double h = 1e-4;
      const double d2 = (equilibrium_derivative(s, x + h) - equilibrium_derivative(s, x - h)) / (2 * h);
      CHECK(std::abs(d2 + std::tanh(x) * equilibrium_derivative(s, x)) < 1e-7);
    }
  }
}

TEST_CASE("potential is monotone from 1 to 0") {
  const auto s = spec(Kind::Full, 0.05);
  double prev = 2.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = s.x_min() + (s.x_max() - s.x_min()) * i / 400.0;
    const double f = equilibrium_potential(s, x);
    CHECK(f <= prev);
    CHECK(f >= -1e-15);
    prev = f;
  }
}

TEST_CASE("admissibility of the coefficient") {
  CHECK_THROWS_AS(spec(Kind::Full, 1.0).validate(), ValidationError);
  CHECK_THROWS_AS(spec(Kind::Half, 0.0).validate(), ValidationError);
  CHECK_THROWS_AS(capacity(spec(Kind::Full, 2.0)), ValidationError);
  CHECK_NOTHROW(spec(Kind::Full, 0.999).validate());
}

TEST_CASE("capacity checkpoints at cosh a = 2") {
  // c = pi eps with l = 1; cosh a = 2 means eps = 1 / (2 pi)
  const double eps = 1.0 / (2 * kPi);
  const auto full = spec(Kind::Full, kPi * eps);
  const auto half = spec(Kind::Half, kPi * eps);
  CHECK(std::cosh(full.half_width()) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(capacity(full) / eps == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(capacity(half) / eps == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(normal_derivative_norm(half) == doctest::Approx(3.0 / (2 * kPi)).epsilon(1e-12));
}

TEST_CASE("capacity small-coefficient limits") {
  const double c = 1e-7;
  CHECK(std::abs(capacity(spec(Kind::Full, c)) * kPi / c - 1.0) < 1e-4);
  CHECK(std::abs(capacity(spec(Kind::Half, c)) * kPi / c - 2.0) < 1e-4);
  CHECK(std::abs(capacity(spec(Kind::Full, c * 3, 3.0)) * kPi / (c * 3) - 1.0) < 1e-4);
}

TEST_CASE("closed form, adaptive quadrature and Simpson agree") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ul(0.5, 3.0), ur(0.02, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    const double l = ul(rng);
    const auto s = spec(trial % 2 ? Kind::Half : Kind::Full, ur(rng) * l, l);
    const double closed = capacity(s);
    CHECK(std::abs(capacity_quadrature(s) - closed) <= 1e-10 * closed);
    if (trial < 10) {
      const double simpson = oracle::simpson(
          [&](double x) {
            const double d = equilibrium_derivative(s, x);
            return d * d * s.coeff * std::cosh(x);
          },
          s.x_min(), s.x_max());
      CHECK(std::abs(simpson - closed) <= 1e-10 * closed);
    }
  }
}

TEST_CASE("potential minimizes energy among functions with its boundary values") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> amp(-0.5, 0.5);
  for (Kind k : {Kind::Full, Kind::Half}) {
    const auto s = spec(k, 0.2);
    const double x0 = s.x_min(), len = s.x_max() - s.x_min();
    const double cap = capacity(s);
    CHECK(dirichlet_energy(s, [&](double x) { return equilibrium_derivative(s, x); }) ==
          doctest::Approx(cap).epsilon(1e-10));
    for (int trial = 0; trial < 20; ++trial) {
      const double a = amp(rng);
      const int m = 1 + trial % 4;
      const auto d = [&](double x) {
        return equilibrium_derivative(s, x) + a * m * kPi / len * std::cos(m * kPi * (x - x0) / len);
      };
      CHECK(dirichlet_energy(s, d) >= cap * (1 - 1e-12));
    }
  }
}

TEST_CASE("mass limits") {
  const double eps = 1e-8;
  CHECK(std::abs(potential_mass(CapacitorSpec::collar(Kind::Half, eps, 1.0), 1.0, 0.0) - 1.0) <
        1e-3);
  CHECK(std::abs(potential_mass(CapacitorSpec::collar(Kind::Full, eps, 1.0), 1.0, 2.0) - 5.0) <
        1e-3);
  CHECK(std::abs(potential_mass(CapacitorSpec::collar(Kind::Full, eps, 2.0), 3.0, -1.0) - 10.0) <
        1e-3);
  CHECK(potential_mass(spec(Kind::Full, 0.3), 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(potential_mass(spec(Kind::Half, 0.3), 1.0, 1.0), ValidationError);
}

TEST_CASE("mass matches Simpson quadrature") {
  const auto s = spec(Kind::Full, 0.1, 1.3);
  const double ref = oracle::simpson(
      [&](double x) {
        const double f = -1.5 * equilibrium_potential(s, x) + 2.0;
        return f * f * s.coeff * std::cosh(x);
      },
      s.x_min(), s.x_max());
  CHECK(potential_mass(s, 0.5, 2.0) == doctest::Approx(ref).epsilon(1e-10));
  CHECK(area(s) == doctest::Approx(2 * std::sqrt(1.3 * 1.3 - 0.01)).epsilon(1e-14));
}

TEST_CASE("normal derivative norm stays bounded and matches on both circles") {
  for (double eps : {1e-1, 1e-2, 1e-4, 1e-6, 1e-8}) {
    const auto full = CapacitorSpec::collar(Kind::Full, eps, 1.0);
    const auto half = CapacitorSpec::collar(Kind::Half, eps, 1.0);
    CHECK(normal_derivative_norm(full) < 1.0);
    CHECK(normal_derivative_norm(half) < 1.0);
    CHECK(normal_derivative_norm(full, Boundary::Plus) ==
          doctest::Approx(normal_derivative_norm(full, Boundary::Minus)).epsilon(1e-13));
  }
}

TEST_CASE("potential trace sampling") {
  const auto s = spec(Kind::Full, 0.4);
  const auto tr = potential_trace(s, 2.0, -1.0, 11);
  REQUIRE(tr.x.size() == 11);
  CHECK(tr.f_ab.front() == doctest::Approx(2.0));
  CHECK(tr.f_ab.back() == doctest::Approx(-1.0));
  CHECK(tr.f0[5] == doctest::Approx(0.5).epsilon(1e-14));
}
