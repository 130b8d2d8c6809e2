#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cardinal/common.hpp"
#include "cardinal/interpolator.hpp"
#include "cardinal/util.hpp"

namespace cardinal {

// Test-target library.  Every target is a tensor product of one univariate
// factor, with exactly known Sobolev membership so rate claims are
// falsifiable: a degree-d B-spline is certified in W_p^d (D^d is piecewise
// constant and bounded, D^{d+1} is not a function), the Gaussian is C^inf.
struct TargetFunction {
  std::string id;
  int dim = 1;
  int certified_k = 0;
  double band_limit = 0.0;  // 0: not band-limited
  std::function<double(double)> axis_eval;
  std::function<double(double, int)> axis_deriv;  // order r, a.e. for r = k

  double eval(std::span<const double> x) const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= axis_eval(x[a]);
    return v;
  }
};

namespace detail {

inline double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// Centered cardinal B-spline of degree d via the truncated-power form.
inline double bspline_value(int degree, double x) {
  const double t = x + 0.5 * (degree + 1);
  if (t <= 0.0 || t >= degree + 1) return 0.0;
  double fact = 1.0;
  for (int i = 2; i <= degree; ++i) fact *= i;
  double acc = 0.0;
  for (int i = 0; i <= degree + 1; ++i) {
    const double u = t - i;
    if (u <= 0.0) break;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(degree + 1, i) * std::pow(u, degree);
  }
  return acc / fact;
}

// D^r B_d(x) = sum_s (-1)^s C(r,s) B_{d-r}(x + (r - 2s)/2).
inline double bspline_derivative(int degree, double x, int order) {
  if (order == 0) return bspline_value(degree, x);
  double acc = 0.0;
  for (int s = 0; s <= order; ++s) {
    const double sign = (s % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(order, s) *
           bspline_value(degree - order, x + 0.5 * (order - 2.0 * s));
  }
  return acc;
}

}  // namespace detail

inline TargetFunction make_bspline_target(int degree, int dim = 1) {
  require(degree >= 1 && degree <= 5, "bspline target: degree must be 1..5");
  TargetFunction t;
  t.id = "bspline" + std::to_string(degree) + (dim == 2 ? "_2d" : "");
  t.dim = dim;
  t.certified_k = degree;
  t.axis_eval = [degree](double x) { return detail::bspline_value(degree, x); };
  t.axis_deriv = [degree](double x, int order) {
    require(order <= degree, "bspline target: derivative order exceeds k");
    return detail::bspline_derivative(degree, x, order);
  };
  return t;
}

// Gaussian bump exp(-(x/width)^2).  Note width = 1 coincides with the
// interpolation kernel and is reproduced exactly by the cardinal
// interpolant; rate measurements need a width != 1.
inline TargetFunction make_gaussian_target(int dim = 1, double width = 1.0) {
  require(width > 0.0, "gaussian target: width must be > 0");
  TargetFunction t;
  t.id = dim == 2 ? "gauss_2d" : "gauss";
  if (width != 1.0) t.id += "_w" + format_g17(width);
  t.dim = dim;
  t.certified_k = 8;  // C-infinity; any finite order is certified
  t.axis_eval = [width](double x) {
    const double u = x / width;
    return std::exp(-u * u);
  };
  t.axis_deriv = [width](double x, int order) {
    // D^r exp(-u^2) = (-1)^r H_r(u) exp(-u^2) / width^r, physicists' Hermite
    const double u = x / width;
    double hm = 0.0, hc = 1.0;
    for (int r = 1; r <= order; ++r) {
      const double hn = 2.0 * u * hc - 2.0 * (r - 1) * hm;
      hm = hc;
      hc = hn;
    }
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * hc * std::exp(-u * u) / std::pow(width, order);
  };
  return t;
}

// Gaussian-windowed cosine: spectrum concentrated in |xi - omega0| <~ 6 sigma,
// effectively band-limited to omega0 + 6 sigma.
inline TargetFunction make_packet_target(double omega0, double sigma) {
  require(omega0 > 0.0 && sigma > 0.0, "packet target: bad parameters");
  TargetFunction t;
  t.id = "packet";
  t.dim = 1;
  t.certified_k = 8;
  t.band_limit = omega0 + 6.0 * sigma;
  t.axis_eval = [omega0, sigma](double x) {
    return std::cos(omega0 * x) * std::exp(-0.5 * sigma * sigma * x * x);
  };
  t.axis_deriv = [omega0, sigma](double x, int order) {
    // g = exp(i w0 x - s^2 x^2/2); D g = (i w0 - s^2 x) g; track the
    // polynomial factor of D^r g and take the real part
    std::vector<std::complex<double>> poly{1.0};
    for (int r = 0; r < order; ++r) {
      std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
      for (size_t c = 0; c < poly.size(); ++c) {
        if (c >= 1) next[c - 1] += poly[c] * static_cast<double>(c);
        next[c + 1] += poly[c] * (-sigma * sigma);
        next[c] += poly[c] * std::complex<double>(0.0, omega0);
      }
      poly = std::move(next);
    }
    std::complex<double> val = 0.0;
    double xp = 1.0;
    for (size_t c = 0; c < poly.size(); ++c) {
      val += poly[c] * xp;
      xp *= x;
    }
    const std::complex<double> g(
        std::cos(omega0 * x) * std::exp(-0.5 * sigma * sigma * x * x),
        std::sin(omega0 * x) * std::exp(-0.5 * sigma * sigma * x * x));
    return (val * g).real();
  };
  return t;
}

struct WpkNorm {
  double lp = 0.0;        // ||f||_p
  double seminorm = 0.0;  // sup_{|alpha|=k} ||D^alpha f||_p
  double total = 0.0;     // ||f||_{W_p^k}
};

// Norms from exact derivative evaluations on a fine grid.  Tensor targets
// factor: ||D^(a1,a2) f||_p = ||u^(a1)||_p ||u^(a2)||_p.
inline WpkNorm wpk_norm(const TargetFunction& target, double p, int k,
                        double box_radius, double spacing) {
  require(k <= target.certified_k, "wpk_norm: order beyond certified k");
  const int radius = static_cast<int>(std::floor(box_radius / spacing));
  std::vector<double> buf(2 * radius + 1);
  std::vector<double> per_order(k + 1);
  for (int r = 0; r <= k; ++r) {
    for (int l = -radius; l <= radius; ++l)
      buf[l + radius] = target.axis_deriv(l * spacing, r);
    per_order[r] = lp_norm(buf, p, spacing, 1);
  }
  WpkNorm out;
  if (target.dim == 1) {
    out.lp = per_order[0];
    out.seminorm = per_order[k];
  } else {
    out.lp = per_order[0] * per_order[0];
    double best = 0.0;
    for (int a1 = 0; a1 <= k; ++a1)
      best = std::max(best, per_order[a1] * per_order[k - a1]);
    out.seminorm = best;
  }
  out.total = out.lp + out.seminorm;
  return out;
}

inline SampledField sample_target(const TargetFunction& target, double h,
                                  int radius, bool decay_flag = true) {
  return sample_field(
      h, target.dim, radius,
      [&](std::span<const double> x) { return target.eval(x); }, decay_flag);
}

}  // namespace cardinal
