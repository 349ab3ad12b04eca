#pragma once

// Reference computations written independently of the library: no calls
// into spectrum_forge numerics, only plain loops over Eigen storage.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Cyclic Jacobi rotations on a symmetric matrix; eigenvalues ascending.
inline Vec jacobi_eigenvalues(Mat a, int sweeps = 100) {
  const int n = static_cast<int>(a.rows());
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  Vec d = a.diagonal();
  std::sort(d.data(), d.data() + n);
  return d;
}

// Spectrum of the weighted G_N Laplacian, assembled from the edge list.
inline Vec graph_spectrum(const Vec& mu, const Mat& interior, const Vec& boundary) {
  const int n = static_cast<int>(mu.size());
  Mat k = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) += boundary[i];
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      k(i, i) += interior(i, j);
      k(i, j) -= interior(i, j);
    }
  }
  Mat s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = k(i, j) / std::sqrt(mu[i] * mu[j]);
  return jacobi_eigenvalues(s);
}

// Generalized eigenvalues of (k, m) for SPD m via Cholesky by hand.
inline Vec pencil_eigenvalues(const Mat& k, const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Mat l = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (int p = 0; p < j; ++p) v -= l(i, p) * l(j, p);
      l(i, j) = v / l(j, j);
    }
  }
  const Mat li = l.triangularView<Eigen::Lower>().solve(Mat::Identity(n, n));
  return jacobi_eigenvalues(li * k * li.transpose());
}

// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 200000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// First k Dirichlet eigenvalues of a box by exhaustive enumeration.
inline std::vector<double> box_spectrum(const std::vector<double>& sides, int k, int mmax = 40) {
  std::vector<double> all;
  std::vector<int> m(sides.size(), 1);
  while (true) {
    double v = 0.0;
    for (size_t i = 0; i < m.size(); ++i)
      v += std::numbers::pi * std::numbers::pi * m[i] * m[i] / (sides[i] * sides[i]);
    all.push_back(v);
    size_t d = 0;
    while (d < m.size() && ++m[d] > mmax) m[d++] = 1;
    if (d == m.size()) break;
  }
  std::sort(all.begin(), all.end());
  all.resize(k);
  return all;
}

// sup of |x^T f x| over x^T g x = 1 by random sampling.
inline double sampled_sup(const Mat& f, const Mat& g, int samples, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const int n = static_cast<int>(f.rows());
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    best = std::max(best, std::abs(x.dot(f * x)) / x.dot(g * x));
  }
  return best;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vec tensor(const Vec& u, const Vec& v) {
  Vec out(u.size() * v.size());
  for (int i = 0; i < u.size(); ++i)
    for (int j = 0; j < v.size(); ++j) out[i * v.size() + j] = u[i] * v[j];
  return out;
}

}  // namespace oracle
