#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "cardinal/common.hpp"
#include "cardinal/util.hpp"

// Slow ground-truth routes for tests.  These deliberately share no code with
// the production paths: direct summation in shifted form instead of the
// windowed log-sum-exp, a hand-rolled factorization instead of the library
// solve, and plain trapezoid inversion instead of the fast transform.

namespace cardinal::oracles {

inline int default_oracle_radius(double h, double rel_tol = 1e-17) {
  const int prod = std::max(
      2, static_cast<int>(std::ceil(
             h / kPi * std::sqrt(std::log(1.0 / rel_tol)))) +
             1);
  return std::max(2 * prod, 20);
}

// log m_h(xi) by direct periodized-Gaussian summation: both sides of the
// quotient are rescaled by the distance to the nearest dual-lattice point,
// so the denominator terms lie in (0, 1].
inline double oracle_log_multiplier(double h, double xi, int radius = 0) {
  require(h > 0.0, "oracle: h must be > 0");
  require_finite(xi, "xi");
  if (radius <= 0) radius = default_oracle_radius(h);
  const double step = 2.0 * kPi / h;
  const long kc = std::lround(xi / step);
  const double dist = xi - step * kc;
  CompensatedSum denom;
  for (long k = kc - radius; k <= kc + radius; ++k) {
    const double d = xi - step * k;
    denom.add(std::exp(0.25 * (dist * dist - d * d)));
  }
  return 0.25 * (dist * dist - xi * xi) - std::log(denom.value());
}

inline double oracle_multiplier(double h, double xi, int radius = 0) {
  return std::exp(oracle_log_multiplier(h, xi, radius));
}

// d0 = 1/m in the same shifted form; overflows for large |xi| like the
// mathematical value does.
inline double oracle_theta_denominator(double h, double xi, int radius = 0) {
  return std::exp(-oracle_log_multiplier(h, xi, radius));
}

// sum_{|k| <= radius} exp(-lambda k^2) cos(k omega), compensated.
inline double oracle_symbol(double lambda, double omega, int radius) {
  CompensatedSum s;
  s.add(1.0);
  for (int k = 1; k <= radius; ++k)
    s.add(2.0 * std::exp(-lambda * k * k) * std::cos(k * omega));
  return s.value();
}

struct OracleSolve {
  std::vector<double> coeffs;                 // flat over (2N+1)^dim
  std::vector<double> refinement_residuals;   // max-norm per refinement pass
};

// Dense collocation solve A b = e0, A_{ij} = exp(-h^2 |i-j|^2), by an
// in-place LDL^T factorization with compensated iterative refinement.
inline OracleSolve oracle_lagrange_coeffs(double h, int dim, int n_radius,
                                          int refinement_steps = 3) {
  require(h > 0.0 && n_radius >= 1 && (dim == 1 || dim == 2),
          "oracle_lagrange_coeffs: bad arguments");
  const int w = 2 * n_radius + 1;
  const int n = dim == 1 ? w : w * w;
  require(n <= 10000, "oracle_lagrange_coeffs: system too large");

  auto coord = [&](int flat, int axis) {
    const int j = dim == 1 ? flat : (axis == 0 ? flat / w : flat % w);
    return j - n_radius;
  };
  auto entry = [&](int r, int c) {
    double q = 0.0;
    for (int axis = 0; axis < dim; ++axis) {
      const double d = coord(r, axis) - coord(c, axis);
      q += d * d;
    }
    return std::exp(-h * h * q);
  };

  std::vector<double> a(static_cast<size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a[static_cast<size_t>(r) * n + c] = entry(r, c);

  // LDL^T, lower triangle in place, diagonal in d.
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) {
    double dj = a[static_cast<size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      const double l = a[static_cast<size_t>(j) * n + k];
      dj -= l * l * d[k];
    }
    d[j] = dj;
    for (int i = j + 1; i < n; ++i) {
      double v = a[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        v -= a[static_cast<size_t>(i) * n + k] *
             a[static_cast<size_t>(j) * n + k] * d[k];
      a[static_cast<size_t>(i) * n + j] = v / dj;
    }
  }

  auto solve = [&](std::vector<double> rhs) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < i; ++k)
        rhs[i] -= a[static_cast<size_t>(i) * n + k] * rhs[k];
    for (int i = 0; i < n; ++i) rhs[i] /= d[i];
    for (int i = n - 1; i >= 0; --i)
      for (int k = i + 1; k < n; ++k)
        rhs[i] -= a[static_cast<size_t>(k) * n + i] * rhs[k];
    return rhs;
  };

  const int center = dim == 1 ? n_radius : n_radius * w + n_radius;
  std::vector<double> e0(n, 0.0);
  e0[center] = 1.0;

  OracleSolve out;
  out.coeffs = solve(e0);
  for (int pass = 0; pass < refinement_steps; ++pass) {
    std::vector<double> r(n);
    double rmax = 0.0;
    for (int i = 0; i < n; ++i) {
      CompensatedSum acc;
      acc.add(-e0[i]);
      for (int c = 0; c < n; ++c) acc.add(entry(i, c) * out.coeffs[c]);
      r[i] = -acc.value();  // e0 - A b
      rmax = std::max(rmax, std::abs(r[i]));
    }
    out.refinement_residuals.push_back(rmax);
    const auto delta = solve(r);
    for (int i = 0; i < n; ++i) out.coeffs[i] += delta[i];
  }
  return out;
}

// Plain composite trapezoid inversion of a symbol sampled uniformly on
// [-span, span]: (2 pi)^{-1} int s(xi) exp(i x xi) dxi.  Real part; the
// symbols we invert are real and even.
inline double oracle_quadrature_ft(std::span<const double> samples,
                                   double xi_spacing, double x) {
  require(samples.size() >= 3 && samples.size() % 2 == 1,
          "oracle_quadrature_ft: need an odd number of samples");
  const long half = static_cast<long>(samples.size() / 2);
  CompensatedSum re;
  for (size_t q = 0; q < samples.size(); ++q) {
    const double xi = (static_cast<long>(q) - half) * xi_spacing;
    const double wt = (q == 0 || q + 1 == samples.size()) ? 0.5 : 1.0;
    re.add(wt * samples[q] * std::cos(x * xi));
  }
  return re.value() * xi_spacing / (2.0 * kPi);
}

}  // namespace cardinal::oracles
