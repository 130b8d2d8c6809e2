#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cardinal/common.hpp"

namespace cardinal {

// Evaluator state for the lattice Gaussian symbol
//
//   m_h(xi) = exp(-xi^2/4) / sum_k exp(-(xi - 2 pi k/h)^2 / 4),
//
// the quotient of a Gaussian by its periodization over the dual lattice
// (2 pi / h) Z.  Everything is evaluated through the exponent form
//
//   d0(xi) = 1/m_h(xi) = sum_k exp(e_k),   e_k = pi k xi/h - pi^2 k^2/h^2,
//
// summed over a window of series_radius lattice shifts centred on the
// dominant index.  Max-exponent subtraction keeps the sums in range for
// every xi.
struct MultiplierContext {
  double h = 1.0;
  int dim = 1;
  int series_radius = 2;  // shifts retained on each side of the dominant one
  double rel_tol = 1e-17;
};

inline MultiplierContext make_multiplier_context(double h, int dim = 1,
                                                 double rel_tol = 1e-17) {
  require(std::isfinite(h) && h > 0.0, "multiplier context: h must be > 0");
  require(dim >= 1, "multiplier context: dim must be >= 1");
  require(rel_tol > 0.0 && rel_tol <= 1e-6,
          "multiplier context: rel_tol must lie in (0, 1e-6]");
  MultiplierContext ctx;
  ctx.h = h;
  ctx.dim = dim;
  ctx.rel_tol = rel_tol;
  const int k = static_cast<int>(
                    std::ceil(h / kPi * std::sqrt(std::log(1.0 / rel_tol)))) +
                1;
  ctx.series_radius = std::max(2, k);
  // First discarded term is relatively below rel_tol.
  const double tail = std::exp(-kPi * kPi * (ctx.series_radius + 1.0) *
                               (ctx.series_radius + 1.0) / (h * h));
  require(tail < rel_tol, "multiplier context: truncation radius too small");
  return ctx;
}

namespace detail {

struct ThetaSums {
  double log_d0;  // log of the reciprocal multiplier
  double mean1;   // sum (pi k/h) w_k / sum w_k
  double mean2;   // sum (pi k/h)^2 w_k / sum w_k
};

inline ThetaSums theta_sums(const MultiplierContext& ctx, double xi) {
  require_finite(xi, "xi");
  const double h = ctx.h;
  const double a = kPi / h;
  const long kc = std::lround(xi * h / (2.0 * kPi));
  const int K = ctx.series_radius;

  double emax = -std::numeric_limits<double>::infinity();
  for (long k = kc - K; k <= kc + K; ++k) {
    const double e = a * k * xi - a * a * k * k;
    if (e > emax) emax = e;
  }

  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  if (kc == 0) {
    // Symmetric window: pair +-k so odd sums cancel exactly at xi = 0.
    s0 = std::exp(-emax);  // k = 0 term
    for (long k = K; k >= 1; --k) {
      const double ep = a * k * xi - a * a * k * k;
      const double em = -a * k * xi - a * a * k * k;
      const double wp = std::exp(ep - emax);
      const double wm = std::exp(em - emax);
      s0 += wp + wm;
      s1 += (a * k) * (wp - wm);
      s2 += (a * k) * (a * k) * (wp + wm);
    }
  } else {
    for (long k = kc - K; k <= kc + K; ++k) {
      const double w = std::exp(a * k * xi - a * a * k * k - emax);
      s0 += w;
      s1 += (a * k) * w;
      s2 += (a * k) * (a * k) * w;
    }
  }
  return ThetaSums{emax + std::log(s0), s1 / s0, s2 / s0};
}

}  // namespace detail

// Reciprocal symbol d0(xi) = 1/m_h(xi) >= 1.  Overflows to +inf once the
// true value exceeds the double range; use log_multiplier for composition.
inline double theta_denominator(const MultiplierContext& ctx, double xi) {
  return std::exp(detail::theta_sums(ctx, xi).log_d0);
}

inline double log_multiplier(const MultiplierContext& ctx, double xi) {
  return -detail::theta_sums(ctx, xi).log_d0;
}

// m_h(xi) in (0, 1]; underflows to subnormal/0 only when log m is below the
// representable range.
inline double multiplier(const MultiplierContext& ctx, double xi) {
  return std::exp(log_multiplier(ctx, xi));
}

// m_h'(xi) = -m_h(xi)^2 d1(xi) evaluated as -m * r1 with r1 the weighted
// lattice mean of pi k/h; r1 is bounded, so no cancellation for large xi.
inline double multiplier_prime(const MultiplierContext& ctx, double xi) {
  const auto s = detail::theta_sums(ctx, xi);
  return -std::exp(-s.log_d0) * s.mean1;
}

// Ratio form of the second derivative: m'' = m (2 r1^2 - r2); both ratios
// are weighted means of lattice values, hence bounded.
inline double multiplier_second(const MultiplierContext& ctx, double xi) {
  const auto s = detail::theta_sums(ctx, xi);
  return std::exp(-s.log_d0) * (2.0 * s.mean1 * s.mean1 - s.mean2);
}

inline double log_multiplier_tensor(const MultiplierContext& ctx,
                                    std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != ctx.dim)
    throw std::domain_error("multiplier_tensor: vector length != dim");
  double acc = 0.0;
  for (double c : xi) acc += log_multiplier(ctx, c);
  return acc;
}

inline double multiplier_tensor(const MultiplierContext& ctx,
                                std::span<const double> xi) {
  return std::exp(log_multiplier_tensor(ctx, xi));
}

// sum_{|k| <= shift_radius} m_h(xi - 2 pi k/h); telescopes to 1 for the full
// bi-infinite sum because the shifted numerators are the denominator terms.
inline double alias_sum(const MultiplierContext& ctx, double xi,
                        int shift_radius) {
  require(shift_radius >= ctx.series_radius,
          "alias_sum: shift_radius must be >= series radius");
  const double step = 2.0 * kPi / ctx.h;
  double acc = 0.0;
  for (int k = -shift_radius; k <= shift_radius; ++k)
    acc += multiplier(ctx, xi - step * k);
  return acc;
}

}  // namespace cardinal
