#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "cardinal/bandlimited_quasi.hpp"
#include "cardinal/common.hpp"
#include "cardinal/fft.hpp"
#include "cardinal/interpolator.hpp"
#include "cardinal/theta_multiplier.hpp"
#include "cardinal/util.hpp"

namespace cardinal {

// Inverse-transform profile of the multiplier.  value_raw uses the
// (2 pi)^{-1} inversion convention, under which the L1 norm bounds the
// M_1/M_inf operator norms; value_normalized rescales by the value at
// zero, the convention in which the min(1, 2/|x|) envelope is stated.
struct DecayProfile {
  double h = 1.0;
  double dx = 0.0;
  std::vector<double> x;
  std::vector<double> value_raw;
  std::vector<double> value_normalized;
  double normalizer = 0.0;     // raw profile value at x = 0
  double fitted_c1 = 0.0;      // sup |M(x)| / min(1, 2/|x|)
  double fitted_c2 = 0.0;      // sup |M(x)| h^3 x^2 over the tail region
  double l1_norm = 0.0;        // int |m_vee| over the real line (raw)
  double l1_tail_bound = 0.0;  // bound on the truncated tail
};

inline DecayProfile inverse_transform_profile(const MultiplierContext& ctx,
                                              double x_max, int n_samples) {
  require(ctx.dim == 1, "inverse_transform_profile: univariate context");
  require(x_max > 0.0 && n_samples >= 16,
          "inverse_transform_profile: bad sampling parameters");
  const double dx = x_max / n_samples;
  // quadrature band [-pi/dx, pi/dx] must contain the decayed multiplier
  if (multiplier(ctx, kPi / dx) > 1e-16)
    throw AccuracyError(
        "inverse_transform_profile: multiplier not decayed at the cutoff; "
        "increase n_samples");

  const int nfft = next_pow2(4L * n_samples);
  const double dxi = 2.0 * kPi / (nfft * dx);
  const double span = 2.0 * kPi * (ctx.series_radius + 1.0) / ctx.h;
  const long q_max =
      std::min<long>(static_cast<long>(std::floor(span / dxi)), nfft / 2 - 1);
  std::vector<std::complex<double>> buf(nfft, 0.0);
  for (long q = -q_max; q <= q_max; ++q)
    buf[wrap_index(q, nfft)] = multiplier(ctx, q * dxi);
  fft_backward(buf);

  DecayProfile out;
  out.h = ctx.h;
  out.dx = dx;
  out.x.resize(n_samples + 1);
  out.value_raw.resize(n_samples + 1);
  const double scale = dxi / (2.0 * kPi);
  for (int l = 0; l <= n_samples; ++l) {
    out.x[l] = l * dx;
    out.value_raw[l] = scale * buf[wrap_index(l, nfft)].real();
  }
  out.normalizer = out.value_raw[0];
  out.value_normalized.resize(out.value_raw.size());
  for (size_t i = 0; i < out.value_raw.size(); ++i)
    out.value_normalized[i] = out.value_raw[i] / out.normalizer;

  for (size_t i = 0; i < out.x.size(); ++i) {
    const double xv = out.x[i];
    const double env1 = std::min(1.0, xv > 0.0 ? 2.0 / xv : 1.0);
    out.fitted_c1 =
        std::max(out.fitted_c1, std::abs(out.value_normalized[i]) / env1);
    if (xv >= 2.0)
      out.fitted_c2 = std::max(out.fitted_c2,
                               std::abs(out.value_normalized[i]) *
                                   ctx.h * ctx.h * ctx.h * xv * xv);
  }

  // trapezoid L1 norm of the raw profile over [-x_max, x_max] plus the
  // inverse-square tail bound
  double acc = 0.5 * std::abs(out.value_raw.front()) +
               0.5 * std::abs(out.value_raw.back());
  for (int l = 1; l < n_samples; ++l) acc += std::abs(out.value_raw[l]);
  double c2_raw = 0.0;
  for (size_t i = 0; i < out.x.size(); ++i)
    if (out.x[i] >= 0.5 * x_max)
      c2_raw = std::max(c2_raw, std::abs(out.value_raw[i]) * out.x[i] *
                                    out.x[i]);
  out.l1_tail_bound = 2.0 * c2_raw / x_max;
  out.l1_norm = 2.0 * acc * dx + out.l1_tail_bound;
  return out;
}

// Operator-norm estimate for f -> (f^ m)^v on L_p.
struct NormEstimate {
  double h = 1.0;
  double p = 2.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string family;  // test family achieving the lower bound
};

namespace detail {

struct MultiplierApplier {
  const MultiplierContext* ctx;
  int n;
  double dx;
  std::vector<double> axis_mult;

  MultiplierApplier(const MultiplierContext& c, int n_grid, double spacing)
      : ctx(&c), n(n_grid), dx(spacing), axis_mult(n_grid) {
    for (int q = 0; q < n; ++q)
      axis_mult[q] =
          multiplier(c, 2.0 * kPi * signed_bin(q, n) / (n * dx));
  }
  // ||(f^ m)^v||_p / ||f||_p on the periodic grid
  double ratio(const std::vector<double>& f, double p) const {
    std::vector<std::complex<double>> buf(f.begin(), f.end());
    fft_forward(buf);
    for (int q = 0; q < n; ++q) buf[q] *= axis_mult[q];
    fft_backward(buf);
    std::vector<double> out(n);
    for (int q = 0; q < n; ++q) out[q] = buf[q].real() / n;
    const double denom = lp_norm(f, p, dx, 1);
    if (denom == 0.0) return 0.0;
    return lp_norm(out, p, dx, 1) / denom;
  }
};

}  // namespace detail

// Upper bounds: Plancherel gives sup|m| = m(0) at p = 2; Young gives
// ||m_vee||_1 at p = 1, infinity; p = 4 interpolates the two.  Lower
// bounds come from a fixed, seeded search family applied on a periodic
// grid: one spectrum concentrated at zero, 16 deterministic sign patterns,
// and random band functions up to the application budget.
inline NormEstimate mp_norm_bounds(const MultiplierContext& ctx, double p,
                                   int budget = 200, uint64_t seed = 1) {
  require(p == 1.0 || p == 2.0 || p == 4.0 || std::isinf(p),
          "mp_norm_bounds: p must be 1, 2, 4 or inf");
  require(budget >= 20, "mp_norm_bounds: budget too small");
  NormEstimate est;
  est.h = ctx.h;
  est.p = p;

  const double m0 = multiplier(ctx, 0.0);
  double l1 = 0.0;
  if (p != 2.0) {
    const double x_max = 30.0 / ctx.h + 10.0;
    const int n_samples = static_cast<int>(std::ceil(x_max / (ctx.h / 4.0)));
    l1 = inverse_transform_profile(ctx, x_max, n_samples).l1_norm;
  }
  if (p == 2.0)
    est.upper = m0;
  else if (p == 4.0)
    est.upper = std::sqrt(m0 * l1);
  else
    est.upper = l1;

  const int n = 8192;
  const double dx = 1.0 / 128.0;
  detail::MultiplierApplier apply(ctx, n, dx);

  auto consider = [&](const std::vector<double>& f, const char* family) {
    const double r = apply.ratio(f, p);
    if (r > est.lower) {
      est.lower = r;
      est.family = family;
    }
  };

  // spectrum concentrated near xi = 0, where m is largest
  {
    std::vector<double> f(n);
    const double width = 64.0;  // physical width; band ~ 0.05
    for (int l = 0; l < n; ++l) {
      const double xv = (l - n / 2) * dx;
      f[l] = std::exp(-xv * xv / (2.0 * width * width));
    }
    consider(f, "concentrated");
  }

  // deterministic sign patterns
  for (int s = 1; s <= 16; ++s) {
    std::vector<double> f(n, 0.0);
    const int block = 4 * s;
    for (int l = n / 4; l < 3 * n / 4; ++l)
      f[l] = ((l / block) % 2 == 0) ? 1.0 : -1.0;
    consider(f, "sign_pattern");
  }

  // seeded random band functions
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n_random = std::min(64, budget - 17);
  for (int t = 0; t < n_random; ++t) {
    const double xi_max = kPi / dx;
    const double a = 0.8 * xi_max * unif(rng);
    const double b =
        std::min(xi_max, a + (0.02 + 0.2 * unif(rng)) * xi_max);
    std::vector<std::complex<double>> spec(n, 0.0);
    for (int q = 1; q < n / 2; ++q) {
      const double xi = 2.0 * kPi * q / (n * dx);
      if (xi < a || xi > b) continue;
      const std::complex<double> c(unif(rng) - 0.5, unif(rng) - 0.5);
      spec[q] = c;
      spec[n - q] = std::conj(c);
    }
    fft_backward(spec);
    std::vector<double> f(n);
    for (int l = 0; l < n; ++l) f[l] = spec[l].real() / n;
    consider(f, "random_band");
  }
  return est;
}

// L1 size of the second derivative of xi^k phi_hat(h xi - beta) m(xi),
// the quantity controlling the beta-shifted aliasing term.  The integrand
// is supported where the shifted cutoff lives; the derivative is taken by
// Richardson-refined central differences of the assembled product.
inline double aliasing_diagnostic(const MultiplierContext& ctx,
                                  const CutoffSpec& spec, int k, double beta) {
  require(ctx.dim == 1, "aliasing_diagnostic: univariate context");
  require(k >= 0 && k <= 6, "aliasing_diagnostic: k must be in 0..6");
  require(std::abs(beta) >= 2.0 * kPi - 1e-12,
          "aliasing_diagnostic: |beta| must be >= 2 pi");
  const double ratio = beta / (2.0 * kPi);
  require(std::abs(ratio - std::round(ratio)) < 1e-9,
          "aliasing_diagnostic: beta must be a multiple of 2 pi");

  const double h = ctx.h;
  auto integrand = [&](double xi) {
    const double cut = spec.phi_hat(h * xi - beta);
    if (cut == 0.0) return 0.0;
    double xik = 1.0;
    for (int r = 0; r < k; ++r) xik *= xi;
    return xik * cut * multiplier(ctx, xi);
  };
  const double b = kPi + spec.eps;
  const double lo = (beta - b) / h;
  const double hi = (beta + b) / h;
  const double step = 1e-3 * h * h / std::abs(ratio);

  auto second = [&](double xi) {
    auto fd = [&](double s) {
      return (integrand(xi + s) - 2.0 * integrand(xi) + integrand(xi - s)) /
             (s * s);
    };
    return (4.0 * fd(0.5 * step) - fd(step)) / 3.0;
  };

  // composite Simpson over the support
  const int cells = 2000;
  const double width = (hi - lo) / cells;
  double acc = std::abs(second(lo)) + std::abs(second(hi));
  for (int i = 1; i < cells; ++i) {
    const double xi = lo + i * width;
    acc += (i % 2 == 1 ? 4.0 : 2.0) * std::abs(second(xi));
  }
  return acc * width / 3.0;
}

}  // namespace cardinal
