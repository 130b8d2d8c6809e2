#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "cardinal/common.hpp"
#include "cardinal/fft.hpp"
#include "cardinal/theta_multiplier.hpp"

namespace cardinal {

// Interpolation lattice h Z^dim with truncation radii: coefficients are kept
// for ||j||_inf <= coeff_radius, the Lagrange function is tabulated on
// [-eval_radius, eval_radius]^dim.
struct GridSpec {
  double h = 1.0;
  int dim = 1;
  int coeff_radius = 32;
  double eval_radius = 8.0;
};

inline GridSpec make_grid(double h, int dim, int coeff_radius,
                          double eval_radius) {
  require(std::isfinite(h) && h > 0.0, "grid: h must be > 0");
  require(dim == 1 || dim == 2, "grid: dim must be 1 or 2");
  require(coeff_radius >= 8, "grid: coeff_radius must be >= 8");
  require(eval_radius >= 4.0 * h, "grid: eval_radius must be >= 4h");
  return GridSpec{h, dim, coeff_radius, eval_radius};
}

// Periodic symbol of the lattice Gaussian collocation system:
// sigma(omega) = sum_k exp(-h^2 k^2) exp(-i k omega).  Evaluated through the
// Poisson-transformed periodization (sqrt(pi)/h) sum_j exp(-(omega-2 pi j)^2
// / (4 h^2)): every term is positive, so sigma stays positive in floating
// point even where it is exponentially small (the cosine form cancels
// catastrophically below h ~ 1/4).  Truncation keeps the relative tail
// under 1e-17.
inline int symbol_radius(double h) {
  const int j = static_cast<int>(
      std::ceil(0.5 + std::sqrt(0.25 + 3.97 * h * h))) + 1;
  return std::max(3, j);
}

inline double collocation_symbol(double h, double omega) {
  const int radius = symbol_radius(h);
  const long jc = std::lround(omega / (2.0 * kPi));
  double s = 0.0;
  for (long j = jc - radius; j <= jc + radius; ++j) {
    const double d = omega - 2.0 * kPi * j;
    s += std::exp(-d * d / (4.0 * h * h));
  }
  return std::sqrt(kPi) / h * s;
}

namespace detail {

inline size_t flat_size(int dim, int radius) {
  const size_t w = 2 * static_cast<size_t>(radius) + 1;
  return dim == 1 ? w : w * w;
}

inline int flat_index(int dim, int radius, std::span<const int> j) {
  const int w = 2 * radius + 1;
  if (dim == 1) return j[0] + radius;
  return (j[0] + radius) * w + (j[1] + radius);
}

}  // namespace detail

// Desk-scale route: solve the symmetric positive-definite collocation system
// A b = e0, A_{ij} = exp(-h^2 |i-j|^2), over ||j||_inf <= coeff_radius.
// Returns the flat (row-major) coefficient tensor.
inline std::vector<double> coefficients_dense(const GridSpec& grid) {
  const size_t n = detail::flat_size(grid.dim, grid.coeff_radius);
  require(n <= 10000,
          "coefficients_dense: system larger than the desk-scale cap; "
          "use coefficients_spectral");
  const int w = 2 * grid.coeff_radius + 1;
  auto coord = [&](size_t flat, int axis) {
    const int j = grid.dim == 1
                      ? static_cast<int>(flat)
                      : (axis == 0 ? static_cast<int>(flat) / w
                                   : static_cast<int>(flat) % w);
    return j - grid.coeff_radius;
  };
  Eigen::MatrixXd a(n, n);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < n; ++c) {
      double q = 0.0;
      for (int axis = 0; axis < grid.dim; ++axis) {
        const double d = coord(r, axis) - coord(c, axis);
        q += d * d;
      }
      a(r, c) = std::exp(-grid.h * grid.h * q);
    }
  }
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(n);
  e0[grid.dim == 1 ? grid.coeff_radius
                   : grid.coeff_radius * w + grid.coeff_radius] = 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::logic_error("coefficients_dense: collocation matrix not SPD");
  Eigen::VectorXd b = llt.solve(e0);
  return std::vector<double>(b.data(), b.data() + n);
}

// Production route, one axis: b_j are the Fourier coefficients of the
// reciprocal symbol, computed by a length-M DFT of 1/sigma on a fine
// omega-grid.  M is chosen so the coefficient aliasing (images at distance
// M - coeff_radius, decaying like exp(-h^2 |j|)) is below 1e-15 relatively.
inline std::vector<double> coefficients_spectral_axis(double h,
                                                      int coeff_radius) {
  const long guard = static_cast<long>(std::ceil(35.0 / (h * h)));
  const int m_omega =
      next_pow2(std::max<long>(512, coeff_radius + guard + 64));
  std::vector<std::complex<double>> buf(m_omega);
  for (int t = 0; t < m_omega; ++t) {
    const double sigma = collocation_symbol(h, 2.0 * kPi * t / m_omega);
    if (!(sigma > 0.0))
      throw std::logic_error("coefficients_spectral: symbol must be positive");
    buf[t] = 1.0 / sigma;
  }
  fft_forward(buf);
  std::vector<double> out(2 * coeff_radius + 1);
  for (int j = -coeff_radius; j <= coeff_radius; ++j)
    out[j + coeff_radius] = buf[wrap_index(j, m_omega)].real() / m_omega;
  return out;
}

// Flat tensor assembled from the per-axis coefficients (the collocation
// matrix is a tensor product, so the solution factors).
inline std::vector<double> coefficients_spectral(const GridSpec& grid) {
  const auto axis = coefficients_spectral_axis(grid.h, grid.coeff_radius);
  if (grid.dim == 1) return axis;
  const size_t w = axis.size();
  std::vector<double> out(w * w);
  for (size_t r = 0; r < w; ++r)
    for (size_t c = 0; c < w; ++c) out[r * w + c] = axis[r] * axis[c];
  return out;
}

// Lagrange function chi_h: spectral coefficients plus fine-grid samples of
// the inverse transform of h * m_h.
struct LagrangeTable {
  GridSpec grid;
  int fine_factor = 8;
  std::vector<double> axis_coeffs;   // b_j, |j| <= coeff_radius
  std::vector<double> axis_samples;  // chi on (h/fine_factor) Z, |s| <= radius
  int sample_radius = 0;
  double coeff_tail_cut = 1e-14;

  double coeff_axis(int j) const { return axis_coeffs[j + grid.coeff_radius]; }
  double coeff(std::span<const int> j) const {
    double v = 1.0;
    for (int a = 0; a < grid.dim; ++a) v *= coeff_axis(j[a]);
    return v;
  }
  double sample_axis(int s) const { return axis_samples[s + sample_radius]; }
  double sample(std::span<const int> s) const {
    double v = 1.0;
    for (int a = 0; a < grid.dim; ++a) v *= sample_axis(s[a]);
    return v;
  }

  // Truncated Gaussian expansion along one axis.
  double eval_axis_raw(double x) const {
    double acc = 0.0;
    for (int j = -grid.coeff_radius; j <= grid.coeff_radius; ++j) {
      const double b = coeff_axis(j);
      if (std::abs(b) < coeff_tail_cut) continue;
      const double d = x - grid.h * j;
      acc += b * std::exp(-d * d);
    }
    return acc;
  }

  // chi_h(x) = sum_j b_j exp(-||x - h j||^2); trust region excludes the
  // outer shell where the truncated expansion degrades.
  double eval_raw(std::span<const double> x) const {
    double v = 1.0;
    for (int a = 0; a < grid.dim; ++a) v *= eval_axis_raw(x[a]);
    return v;
  }
  double eval(std::span<const double> x) const {
    for (int a = 0; a < grid.dim; ++a)
      if (std::abs(x[a]) > grid.eval_radius - grid.h)
        throw ExtrapolationError("chi_eval: point outside trusted radius");
    return eval_raw(x);
  }
};

namespace detail {

struct AxisSamples {
  std::vector<double> values;
  int radius;
};

// Samples of chi_h on (h/fine_factor) Z by inverse DFT of h * m_h.  The
// frequency grid covers |xi| <= 2 pi (K+1)/h; its spacing is tied to the
// eval radius plus an aliasing pad that accounts for the exp(-h|x|)-scale
// spatial decay of chi_h.
inline AxisSamples chi_axis_samples(double h, double eval_radius,
                                    int fine_factor) {
  const auto ctx = make_multiplier_context(h);
  const int K = ctx.series_radius;
  const int upsample = (2 * (K + 1) + fine_factor - 1) / fine_factor;
  const int m_int = fine_factor * upsample;
  const double dx = h / m_int;
  const double pad = std::max({64.0, 30.0 / h + 32.0, 8.0 * h + 8.0});
  const int nfft = next_pow2(
      static_cast<long>(std::ceil((eval_radius + pad) / dx)));
  const double dxi = 2.0 * kPi / (nfft * dx);
  require(dxi <= kPi / (eval_radius + 4.0 * h),
          "chi_table: frequency grid too coarse for requested eval radius");
  const double span = 2.0 * kPi * (K + 1) / h;
  // cap below the Nyquist bin; the dropped edge samples are ~exp(-pi^2 K^2/h^2)
  const long q_max = std::min<long>(
      static_cast<long>(std::floor(span / dxi)), nfft / 2 - 1);

  std::vector<std::complex<double>> buf(nfft, 0.0);
  for (long q = -q_max; q <= q_max; ++q)
    buf[wrap_index(q, nfft)] = h * std::exp(log_multiplier(ctx, q * dxi));
  fft_backward(buf);

  const int stride = upsample;
  const int radius =
      static_cast<int>(std::floor(eval_radius * fine_factor / h));
  AxisSamples out;
  out.radius = radius;
  out.values.resize(2 * radius + 1);
  const double scale = dxi / (2.0 * kPi);
  for (int s = -radius; s <= radius; ++s) {
    const auto v = buf[wrap_index(static_cast<long>(s) * stride, nfft)];
    if (std::abs(v.imag()) * scale > 1e-10)
      throw std::logic_error("chi_table: inverse transform not real");
    out.values[s + radius] = scale * v.real();
  }
  return out;
}

}  // namespace detail

inline LagrangeTable chi_table(const GridSpec& grid, int fine_factor) {
  require(fine_factor >= 2, "chi_table: fine_factor must be >= 2");
  LagrangeTable table;
  table.grid = grid;
  table.fine_factor = fine_factor;
  table.axis_coeffs = coefficients_spectral_axis(grid.h, grid.coeff_radius);
  auto axis = detail::chi_axis_samples(grid.h, grid.eval_radius, fine_factor);
  table.axis_samples = std::move(axis.values);
  table.sample_radius = axis.radius;
  return table;
}

}  // namespace cardinal
