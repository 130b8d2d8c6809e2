#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "cardinal/common.hpp"
#include "cardinal/fft.hpp"
#include "cardinal/interpolator.hpp"
#include "cardinal/report.hpp"
#include "cardinal/targets.hpp"
#include "cardinal/util.hpp"

namespace cardinal {

// Smooth frequency cutoff: phi_hat is 1 on [-pi+eps, pi-eps], falls to 0
// over a width-2eps transition, and is supported in [-pi-eps, pi+eps];
// rho_hat = phi_hat / sum_j phi_hat(. - 2 pi j) is an exact partition of
// unity under 2 pi shifts.  phi = inverse transform of rho_hat, tabulated
// on a fine grid out to the empirically determined decay radius.
struct CutoffSpec {
  double eps = 0.3;
  double decay_cap = 1e-12;
  double band = 0.0;          // declared band: pi + 2 eps
  double r_phi = 0.0;         // |phi| < achieved_cap beyond this radius
  double achieved_cap = 0.0;  // largest |phi| seen beyond r_phi
  double phi_dt = 0.0;
  std::vector<double> phi_half;  // phi on t >= 0 (even function)
  std::vector<double> freq_grid, rho_samples;

  double phi_hat(double xi) const {
    const double a = std::abs(xi);
    if (a <= kPi - eps) return 1.0;
    if (a >= kPi + eps) return 0.0;
    return smooth_step_down((a - (kPi - eps)) / (2.0 * eps));
  }
  double rho_hat(double xi) const {
    const double num = phi_hat(xi);
    if (num == 0.0) return 0.0;
    return num / (phi_hat(xi - 2.0 * kPi) + num + phi_hat(xi + 2.0 * kPi));
  }
};

// phi(t) by quintic interpolation of the tabulated inverse transform;
// returns 0 beyond r_phi, where |phi| is below the recorded cap.
inline double phi_eval(const CutoffSpec& spec, double t) {
  const double a = std::abs(t);
  if (a > spec.r_phi) return 0.0;
  const double u = a / spec.phi_dt;
  long base = std::lround(std::floor(u)) - 2;
  const long last = static_cast<long>(spec.phi_half.size()) - 1;
  if (base < -2) base = -2;
  if (base > last - 5) base = last - 5;
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    const long node = base + i;
    double weight = 1.0;
    for (int j = 0; j < 6; ++j) {
      if (j == i) continue;
      weight *= (u - (base + j)) / static_cast<double>(i - j);
    }
    acc += weight * spec.phi_half[node < 0 ? -node : node];  // even reflection
  }
  return acc;
}

inline CutoffSpec build_cutoff(double eps, double decay_cap = 1e-12) {
  require(std::isfinite(eps) && eps > 0.0 && eps < kPi / 2.0,
          "build_cutoff: eps must lie in (0, pi/2)");
  CutoffSpec spec;
  spec.eps = eps;
  spec.decay_cap = decay_cap;
  spec.band = kPi + 2.0 * eps;

  // inverse transform on a fine grid by one large FFT
  const double dt = 1.0 / 128.0;
  const int nfft = 1 << 19;  // alias period nfft*dt = 4096 lattice units
  const double dxi = 2.0 * kPi / (nfft * dt);
  const long q_max = static_cast<long>(std::ceil((kPi + eps) / dxi));
  std::vector<std::complex<double>> buf(nfft, 0.0);
  for (long q = -q_max; q <= q_max; ++q)
    buf[wrap_index(q, nfft)] = spec.rho_hat(q * dxi);
  fft_backward(buf);

  const double scale = dxi / (2.0 * kPi);
  const long scan = static_cast<long>(std::lround(2000.0 / dt));
  std::vector<double> half(scan + 8);
  for (long i = 0; i < static_cast<long>(half.size()); ++i)
    half[i] = scale * buf[wrap_index(i, nfft)].real();

  // suffix maxima locate the decay radius for the requested cap
  std::vector<double> suffix(half.size());
  double running = 0.0;
  for (long i = static_cast<long>(half.size()) - 1; i >= 0; --i) {
    running = std::max(running, std::abs(half[i]));
    suffix[i] = running;
  }
  long cut = scan;
  for (long i = static_cast<long>(20.0 / dt); i < scan; ++i) {
    if (suffix[i] < decay_cap) {
      cut = i;
      break;
    }
  }
  spec.phi_dt = dt;
  spec.r_phi = cut * dt;
  spec.achieved_cap = cut < scan ? suffix[cut] : suffix[scan - 1];
  half.resize(cut + 8);
  spec.phi_half = std::move(half);

  // sampled rho_hat for emission and partition checks
  const int n_grid = 2048;
  spec.freq_grid.resize(n_grid + 1);
  spec.rho_samples.resize(n_grid + 1);
  for (int i = 0; i <= n_grid; ++i) {
    const double xi = -spec.band + 2.0 * spec.band * i / n_grid;
    spec.freq_grid[i] = xi;
    spec.rho_samples[i] = spec.rho_hat(xi);
  }
  return spec;
}

// g(x) = sum_j f(hj) phi(x/h - j), tensor phi in dim 2.
inline double quasi_eval_point(const SampledField& field,
                               const CutoffSpec& spec,
                               std::span<const double> x) {
  const double h = field.h;
  if (field.dim == 1) {
    double acc = 0.0;
    const double t0 = x[0] / h;
    const int lo = std::max(-field.radius,
                            static_cast<int>(std::ceil(t0 - spec.r_phi)));
    const int hi = std::min(field.radius,
                            static_cast<int>(std::floor(t0 + spec.r_phi)));
    for (int j = lo; j <= hi; ++j)
      acc += field.values[j + field.radius] * phi_eval(spec, t0 - j);
    return acc;
  }
  const int w = field.width();
  const double t0 = x[0] / h, t1 = x[1] / h;
  double acc = 0.0;
  for (int j1 = -field.radius; j1 <= field.radius; ++j1) {
    const double c1 = phi_eval(spec, t0 - j1);
    if (c1 == 0.0) continue;
    double row = 0.0;
    for (int j2 = -field.radius; j2 <= field.radius; ++j2) {
      const double fj = field.values[static_cast<size_t>(j1 + field.radius) * w +
                                     (j2 + field.radius)];
      if (fj == 0.0) continue;
      row += fj * phi_eval(spec, t1 - j2);
    }
    acc += c1 * row;
  }
  return acc;
}

// Fourier route: g^(xi) = h^n [sum_j f_j e^{-i h<j,xi>}] rho_hat(h xi),
// band-limited to ||xi||_inf <= (pi + eps)/h by construction.
inline FineGrid quasi_eval_fine(const SampledField& field,
                                const CutoffSpec& spec, int fine_factor,
                                int pad_cells = -1) {
  require(field.decay_flag,
          "quasi_eval_fine: field must be compactly supported (decay_flag)");
  require(fine_factor >= 2, "quasi_eval_fine: fine_factor >= 2");
  const double h = field.h;
  const int m = fine_factor;
  if (pad_cells < 0)
    pad_cells = static_cast<int>(std::ceil(spec.r_phi)) + 8;
  const int p = field.radius + pad_cells;
  const int nd = 2 * p + 1;
  const int nf = m * nd;
  const double dxi = 2.0 * kPi / (nd * h);
  const double cutoff = (kPi + spec.eps) / h;

  FineGrid out;
  out.spacing = h / m;
  out.dim = field.dim;
  out.radius = m * p;

  if (field.dim == 1) {
    std::vector<std::complex<double>> data(nd, 0.0);
    for (int j = -field.radius; j <= field.radius; ++j)
      data[wrap_index(j, nd)] = field.values[j + field.radius];
    fft_forward(data);
    std::vector<std::complex<double>> spectrum(nf, 0.0);
    for (int q = 0; q < nf; ++q) {
      const long qs = signed_bin(q, nf);
      const double xi = qs * dxi;
      if (std::abs(xi) > cutoff) continue;
      spectrum[q] = data[wrap_index(qs, nd)] * spec.rho_hat(h * xi);
    }
    fft_backward(spectrum);
    out.values.resize(2 * out.radius + 1);
    for (int l = -out.radius; l <= out.radius; ++l)
      out.values[l + out.radius] = spectrum[wrap_index(l, nf)].real() / nd;
    return out;
  }

  std::vector<std::complex<double>> data(static_cast<size_t>(nd) * nd, 0.0);
  const int w = field.width();
  for (int j1 = -field.radius; j1 <= field.radius; ++j1)
    for (int j2 = -field.radius; j2 <= field.radius; ++j2)
      data[static_cast<size_t>(wrap_index(j1, nd)) * nd + wrap_index(j2, nd)] =
          field.values[static_cast<size_t>(j1 + field.radius) * w +
                       (j2 + field.radius)];
  fft_2d(data, nd, nd, FFTW_FORWARD);

  std::vector<double> axis(nf);
  for (int q = 0; q < nf; ++q) {
    const double xi = signed_bin(q, nf) * dxi;
    axis[q] = std::abs(xi) <= cutoff ? spec.rho_hat(h * xi) : 0.0;
  }
  std::vector<std::complex<double>> spectrum(static_cast<size_t>(nf) * nf,
                                             0.0);
  for (int q1 = 0; q1 < nf; ++q1) {
    if (axis[q1] == 0.0) continue;
    const int d1 = wrap_index(signed_bin(q1, nf), nd);
    for (int q2 = 0; q2 < nf; ++q2) {
      if (axis[q2] == 0.0) continue;
      spectrum[static_cast<size_t>(q1) * nf + q2] =
          data[static_cast<size_t>(d1) * nd +
               wrap_index(signed_bin(q2, nf), nd)] *
          (axis[q1] * axis[q2]);
    }
  }
  data.clear();
  data.shrink_to_fit();
  fft_2d(spectrum, nf, nf, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(nd) * nd);
  const int width_out = 2 * out.radius + 1;
  out.values.resize(static_cast<size_t>(width_out) * width_out);
  for (int l1 = -out.radius; l1 <= out.radius; ++l1)
    for (int l2 = -out.radius; l2 <= out.radius; ++l2)
      out.values[static_cast<size_t>(l1 + out.radius) * width_out +
                 (l2 + out.radius)] =
          spectrum[static_cast<size_t>(wrap_index(l1, nf)) * nf +
                   wrap_index(l2, nf)]
              .real() *
          scale;
  return out;
}

struct QuasiRateConfig {
  double box_radius = 12.0;
  int fine_factor = 8;
};

// Empirical order of ||f - g||_p against h for a certified target.
inline ErrorReport quasi_error_rate(const TargetFunction& target,
                                    const CutoffSpec& spec,
                                    std::span<const double> h_list, double p,
                                    int k, QuasiRateConfig config = {}) {
  require(h_list.size() >= 3, "quasi_error_rate: need at least 3 h values");
  require(target.dim == 1, "quasi_error_rate: one-dimensional targets");
  if (!(k > target.dim / p))
    throw HypothesisError("quasi_error_rate: requires k > n/p");
  require(k <= target.certified_k,
          "quasi_error_rate: target not certified at this k");

  ErrorReport report;
  report.target_id = target.id;
  report.p = p;
  report.k = k;
  report.config_echo.push_back({"eps", format_g17(spec.eps)});
  report.config_echo.push_back({"box_radius", format_g17(config.box_radius)});
  report.config_echo.push_back(
      {"fine_factor", std::to_string(config.fine_factor)});

  const auto norm = wpk_norm(target, p, k, config.box_radius + 8.0, 1.0 / 64.0);
  for (double h : h_list) {
    const int radius = static_cast<int>(std::ceil(config.box_radius / h));
    const auto field = sample_target(target, h, radius);
    const auto fine = quasi_eval_fine(field, spec, config.fine_factor);
    std::vector<double> err(fine.values.size());
    for (int l = -fine.radius; l <= fine.radius; ++l) {
      const double x = l * fine.spacing;
      err[l + fine.radius] =
          target.axis_eval(x) - fine.values[l + fine.radius];
    }
    const double e = lp_norm(err, p, fine.spacing, 1);
    report.rows.push_back(
        {h, e, norm.total, e / (std::pow(h, k) * norm.total)});
  }
  report.fitted_order = fit_order(report.rows, &report.degenerate);
  return report;
}

}  // namespace cardinal
