#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "cardinal/common.hpp"
#include "cardinal/fft.hpp"
#include "cardinal/lagrange_kernel.hpp"
#include "cardinal/theta_multiplier.hpp"

namespace cardinal {

// Lattice samples f(hj) on ||j||_inf <= radius, flat row-major.
struct SampledField {
  double h = 1.0;
  int dim = 1;
  int radius = 0;
  std::vector<double> values;
  bool decay_flag = false;

  int width() const { return 2 * radius + 1; }
  double value(std::span<const int> j) const {
    size_t idx = 0;
    for (int a = 0; a < dim; ++a)
      idx = idx * width() + static_cast<size_t>(j[a] + radius);
    return values[idx];
  }
};

inline SampledField make_field(double h, int dim, int radius,
                               std::vector<double> values, bool decay_flag) {
  require(h > 0.0 && (dim == 1 || dim == 2) && radius >= 1,
          "field: bad lattice parameters");
  const size_t expect = detail::flat_size(dim, radius);
  require(values.size() == expect, "field: value count does not match box");
  for (double v : values) require_finite(v, "field value");
  if (decay_flag) {
    const int w = 2 * radius + 1;
    double shell = 0.0;
    if (dim == 1) {
      shell = std::max(std::abs(values.front()), std::abs(values.back()));
    } else {
      for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j)
          if (i == 0 || j == 0 || i == w - 1 || j == w - 1)
            shell = std::max(shell,
                             std::abs(values[static_cast<size_t>(i) * w + j]));
    }
    require(shell < 1e-12,
            "field: decay_flag set but boundary shell is not negligible");
  }
  SampledField f;
  f.h = h;
  f.dim = dim;
  f.radius = radius;
  f.values = std::move(values);
  f.decay_flag = decay_flag;
  return f;
}

inline SampledField sample_field(
    double h, int dim, int radius,
    const std::function<double(std::span<const double>)>& fn,
    bool decay_flag = true) {
  std::vector<double> vals(detail::flat_size(dim, radius));
  const int w = 2 * radius + 1;
  if (dim == 1) {
    for (int j = -radius; j <= radius; ++j) {
      const double x = h * j;
      vals[j + radius] = fn(std::span<const double>(&x, 1));
    }
  } else {
    for (int j1 = -radius; j1 <= radius; ++j1)
      for (int j2 = -radius; j2 <= radius; ++j2) {
        const double x[2] = {h * j1, h * j2};
        vals[static_cast<size_t>(j1 + radius) * w + (j2 + radius)] =
            fn(std::span<const double>(x, 2));
      }
  }
  return make_field(h, dim, radius, std::move(vals), decay_flag);
}

// I_h f(x) = sum_j f(hj) chi_h(x - hj) over the stored indices.
inline double interpolate_point(const SampledField& field,
                                const LagrangeTable& table,
                                std::span<const double> x) {
  require(std::abs(field.h - table.grid.h) < 1e-14 * field.h &&
              field.dim == table.grid.dim,
          "interpolate_point: field and table lattices differ");
  const double margin =
      field.h * field.radius - field.h * table.grid.coeff_radius / 2.0;
  for (int a = 0; a < field.dim; ++a)
    if (std::abs(x[a]) > margin)
      throw ExtrapolationError("interpolate_point: outside trusted region");

  const double h = field.h;
  double acc = 0.0;
  if (field.dim == 1) {
    for (int j = -field.radius; j <= field.radius; ++j) {
      const double fj = field.values[j + field.radius];
      if (fj == 0.0) continue;
      acc += fj * table.eval_axis_raw(x[0] - h * j);
    }
  } else {
    const int w = field.width();
    for (int j1 = -field.radius; j1 <= field.radius; ++j1) {
      const double c1 = table.eval_axis_raw(x[0] - h * j1);
      if (c1 == 0.0) continue;
      double row = 0.0;
      for (int j2 = -field.radius; j2 <= field.radius; ++j2) {
        const double fj =
            field.values[static_cast<size_t>(j1 + field.radius) * w +
                         (j2 + field.radius)];
        if (fj == 0.0) continue;
        row += fj * table.eval_axis_raw(x[1] - h * j2);
      }
      acc += c1 * row;
    }
  }
  return acc;
}

// Uniform fine grid: values at spacing * l for ||l||_inf <= radius.
struct FineGrid {
  double spacing = 0.0;
  int dim = 1;
  int radius = 0;
  std::vector<double> values;
  double aliasing_bound = 0.0;
  bool aliasing_warning = false;

  int width() const { return 2 * radius + 1; }
  double value(std::span<const int> l) const {
    size_t idx = 0;
    for (int a = 0; a < dim; ++a)
      idx = idx * width() + static_cast<size_t>(l[a] + radius);
    return values[idx];
  }
};

// Fourier route: the discrete-time transform of the samples is the
// periodization sum over beta in 2 pi Z^n of f^(xi - beta/h); multiply by
// the tensor multiplier, truncate at |xi| <= (2B+1) pi/h per axis, and
// invert onto the (h/fine_factor) grid.
inline FineGrid interpolate_grid_spectral(const SampledField& field,
                                          const MultiplierContext& ctx,
                                          int fine_factor, int beta_radius,
                                          int pad_cells = -1) {
  require(field.decay_flag,
          "interpolate_grid_spectral: field must be compactly supported "
          "(decay_flag)");
  require(fine_factor >= 2, "interpolate_grid_spectral: fine_factor >= 2");
  require(beta_radius >= 1, "interpolate_grid_spectral: beta_radius >= 1");
  require(std::abs(ctx.h - field.h) < 1e-14 * field.h && ctx.dim == field.dim,
          "interpolate_grid_spectral: context does not match field");

  const double h = field.h;
  const int m = fine_factor;
  int b_eff = beta_radius;
  bool warn = false;
  if (2 * beta_radius + 1 > m) {
    b_eff = (m - 1) / 2;
    warn = true;
  }
  if (pad_cells < 0)
    pad_cells = field.dim == 1 ? field.radius + 8 : field.radius / 2 + 8;
  const int p = field.radius + pad_cells;
  const int nd = 2 * p + 1;
  const int nf = m * nd;
  const double cutoff = (2.0 * b_eff + 1.0) * kPi / h;
  const double dxi = 2.0 * kPi / (nd * h);

  FineGrid out;
  out.spacing = h / m;
  out.dim = field.dim;
  out.radius = m * p;
  out.aliasing_bound = multiplier(ctx, cutoff);
  out.aliasing_warning = warn;

  if (field.dim == 1) {
    std::vector<std::complex<double>> data(nd, 0.0);
    for (int j = -field.radius; j <= field.radius; ++j)
      data[wrap_index(j, nd)] = field.values[j + field.radius];
    fft_forward(data);

    std::vector<std::complex<double>> spec(nf, 0.0);
    for (int q = 0; q < nf; ++q) {
      const long qs = signed_bin(q, nf);
      const double xi = qs * dxi;
      if (std::abs(xi) > cutoff) continue;
      spec[q] = data[wrap_index(qs, nd)] * multiplier(ctx, xi);
    }
    fft_backward(spec);

    out.values.resize(2 * out.radius + 1);
    for (int l = -out.radius; l <= out.radius; ++l)
      out.values[l + out.radius] = spec[wrap_index(l, nf)].real() / nd;
    return out;
  }

  // dim == 2
  std::vector<std::complex<double>> data(static_cast<size_t>(nd) * nd, 0.0);
  const int w = field.width();
  for (int j1 = -field.radius; j1 <= field.radius; ++j1)
    for (int j2 = -field.radius; j2 <= field.radius; ++j2)
      data[static_cast<size_t>(wrap_index(j1, nd)) * nd + wrap_index(j2, nd)] =
          field.values[static_cast<size_t>(j1 + field.radius) * w +
                       (j2 + field.radius)];
  fft_2d(data, nd, nd, FFTW_FORWARD);

  std::vector<double> axis_mult(nf);
  for (int q = 0; q < nf; ++q) {
    const double xi = signed_bin(q, nf) * dxi;
    axis_mult[q] = std::abs(xi) <= cutoff ? multiplier(ctx, xi) : 0.0;
  }

  std::vector<std::complex<double>> spec(static_cast<size_t>(nf) * nf, 0.0);
  for (int q1 = 0; q1 < nf; ++q1) {
    if (axis_mult[q1] == 0.0) continue;
    const int d1 = wrap_index(signed_bin(q1, nf), nd);
    for (int q2 = 0; q2 < nf; ++q2) {
      if (axis_mult[q2] == 0.0) continue;
      spec[static_cast<size_t>(q1) * nf + q2] =
          data[static_cast<size_t>(d1) * nd + wrap_index(signed_bin(q2, nf), nd)] *
          (axis_mult[q1] * axis_mult[q2]);
    }
  }
  data.clear();
  data.shrink_to_fit();
  fft_2d(spec, nf, nf, FFTW_BACKWARD);

  const double scale = 1.0 / (static_cast<double>(nd) * nd);
  out.values.resize(static_cast<size_t>(2 * out.radius + 1) *
                    (2 * out.radius + 1));
  for (int l1 = -out.radius; l1 <= out.radius; ++l1)
    for (int l2 = -out.radius; l2 <= out.radius; ++l2)
      out.values[static_cast<size_t>(l1 + out.radius) * (2 * out.radius + 1) +
                 (l2 + out.radius)] =
          spec[static_cast<size_t>(wrap_index(l1, nf)) * nf +
               wrap_index(l2, nf)]
              .real() *
          scale;
  return out;
}

// Riemann-sum L_p norm on a uniform grid; p = infinity takes the max.
inline double lp_norm(std::span<const double> values, double p, double spacing,
                      int dim) {
  require(p >= 1.0, "lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (double v : values) acc += std::pow(std::abs(v), p);
  return std::pow(acc * std::pow(spacing, dim), 1.0 / p);
}

namespace detail {

inline std::vector<double> spectral_derivative_1d(
    std::span<const double> values, int order, double spacing) {
  const int n = static_cast<int>(values.size());
  std::vector<std::complex<double>> buf(values.begin(), values.end());
  fft_forward(buf);
  for (int q = 0; q < n; ++q) {
    const double xi = 2.0 * kPi * signed_bin(q, n) / (n * spacing);
    std::complex<double> factor(1.0, 0.0);
    for (int r = 0; r < order; ++r) factor *= std::complex<double>(0.0, xi);
    buf[q] *= factor;
  }
  fft_backward(buf);
  std::vector<double> out(n);
  for (int q = 0; q < n; ++q) out[q] = buf[q].real() / n;
  return out;
}

inline std::vector<double> spectral_derivative_2d(
    std::span<const double> values, int n, int order1, int order2,
    double spacing) {
  std::vector<std::complex<double>> buf(values.begin(), values.end());
  fft_2d(buf, n, n, FFTW_FORWARD);
  std::vector<std::complex<double>> ax1(n), ax2(n);
  for (int q = 0; q < n; ++q) {
    const double xi = 2.0 * kPi * signed_bin(q, n) / (n * spacing);
    std::complex<double> f1(1.0, 0.0), f2(1.0, 0.0);
    for (int r = 0; r < order1; ++r) f1 *= std::complex<double>(0.0, xi);
    for (int r = 0; r < order2; ++r) f2 *= std::complex<double>(0.0, xi);
    ax1[q] = f1;
    ax2[q] = f2;
  }
  for (int q1 = 0; q1 < n; ++q1)
    for (int q2 = 0; q2 < n; ++q2)
      buf[static_cast<size_t>(q1) * n + q2] *= ax1[q1] * ax2[q2];
  fft_2d(buf, n, n, FFTW_BACKWARD);
  std::vector<double> out(values.size());
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real() * scale;
  return out;
}

}  // namespace detail

// |f|_{W_p^k} = sup over |alpha| = k of ||D^alpha f||_p, derivatives by
// spectral differentiation of the periodized grid.  Data must be near zero
// at the box edges; otherwise the warning flag is raised.
inline double sobolev_seminorm(std::span<const double> values, int k, double p,
                               double spacing, int dim,
                               bool* boundary_warning = nullptr) {
  require(k >= 0, "sobolev_seminorm: k must be >= 0");
  if (k == 0) return lp_norm(values, p, spacing, dim);

  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  double edge = 0.0;
  if (dim == 1) {
    edge = std::max(std::abs(values.front()), std::abs(values.back()));
  } else {
    const int n = static_cast<int>(std::lround(std::sqrt(
        static_cast<double>(values.size()))));
    for (int i = 0; i < n; ++i) {
      edge = std::max({edge, std::abs(values[i]),
                       std::abs(values[static_cast<size_t>(n - 1) * n + i]),
                       std::abs(values[static_cast<size_t>(i) * n]),
                       std::abs(values[static_cast<size_t>(i) * n + n - 1])});
    }
  }
  if (boundary_warning) *boundary_warning = edge > 1e-8 * std::max(vmax, 1e-300);

  if (dim == 1) {
    const auto d = detail::spectral_derivative_1d(values, k, spacing);
    return lp_norm(d, p, spacing, 1);
  }
  const int n = static_cast<int>(
      std::lround(std::sqrt(static_cast<double>(values.size()))));
  require(static_cast<size_t>(n) * n == values.size(),
          "sobolev_seminorm: 2-D grid must be square");
  double best = 0.0;
  for (int a1 = 0; a1 <= k; ++a1) {
    const auto d =
        detail::spectral_derivative_2d(values, n, a1, k - a1, spacing);
    best = std::max(best, lp_norm(d, p, spacing, 2));
  }
  return best;
}

}  // namespace cardinal
