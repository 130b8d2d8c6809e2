#pragma once

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cardinal/bandlimited_quasi.hpp"
#include "cardinal/interpolator.hpp"
#include "cardinal/lagrange_kernel.hpp"
#include "cardinal/multiplier_analysis.hpp"
#include "cardinal/reference_oracles.hpp"
#include "cardinal/report.hpp"
#include "cardinal/targets.hpp"
#include "cardinal/theta_multiplier.hpp"
#include "cardinal/util.hpp"

namespace cardinal {

struct SweepConfig {
  double box_radius = 12.0;
  int fine_factor = 8;
  int beta_radius = 3;
  uint64_t seed = 1;
  int threads = 1;
};

// Rate hypotheses: k > n/p for 1 < p < inf, k >= n at p = 1 (equality
// admitted), k >= 1 at p = inf.
inline void check_hypothesis(double p, int k, int dim) {
  if (p == 1.0) {
    if (k < dim)
      throw HypothesisError(
          "convergence rate requires k >= n when p = 1; the estimate does "
          "not apply");
    return;
  }
  if (std::isinf(p)) {
    if (k < 1)
      throw HypothesisError(
          "convergence rate requires k > 0 when p = inf; the estimate does "
          "not apply");
    return;
  }
  if (!(k > dim / p))
    throw HypothesisError(
        "convergence rate requires k > n/p; the estimate does not apply");
}

// ||f - I_h f||_p across a mesh sweep, interpolating through the spectral
// route and measuring on the fine-factor-refined grid.
inline ErrorReport run_convergence(const TargetFunction& target, double p,
                                   int k, std::span<const double> h_list,
                                   SweepConfig config = {}) {
  check_hypothesis(p, k, target.dim);
  require(k <= target.certified_k,
          "run_convergence: target is not certified in W_p^k at this k");
  require(h_list.size() >= 4, "run_convergence: need at least 4 h values");
  for (size_t i = 1; i < h_list.size(); ++i)
    require(h_list[i] < h_list[i - 1],
            "run_convergence: h_list must decrease");

  ErrorReport report;
  report.target_id = target.id;
  report.p = p;
  report.k = k;
  report.seed = config.seed;
  report.config_echo.push_back({"box_radius", format_g17(config.box_radius)});
  report.config_echo.push_back(
      {"fine_factor", std::to_string(config.fine_factor)});
  report.config_echo.push_back(
      {"beta_radius", std::to_string(config.beta_radius)});
  report.config_echo.push_back({"dim", std::to_string(target.dim)});
  if (p == 1.0 && k == target.dim)
    report.config_echo.push_back(
        {"hypothesis_boundary", "k equals n at p = 1"});

  const auto norm = wpk_norm(target, p, k, config.box_radius + 8.0, 1.0 / 64.0);
  for (double h : h_list) {
    const int radius = static_cast<int>(std::ceil(config.box_radius / h));
    const auto field = sample_target(target, h, radius);
    const auto ctx = make_multiplier_context(h, target.dim);
    const auto fine = interpolate_grid_spectral(field, ctx, config.fine_factor,
                                                config.beta_radius);
    double e = 0.0;
    if (target.dim == 1) {
      std::vector<double> diff(fine.values.size());
      for (int l = -fine.radius; l <= fine.radius; ++l)
        diff[l + fine.radius] =
            target.axis_eval(l * fine.spacing) - fine.values[l + fine.radius];
      e = lp_norm(diff, p, fine.spacing, 1);
    } else {
      const int w = fine.width();
      std::vector<double> axis_vals(w);
      for (int l = -fine.radius; l <= fine.radius; ++l)
        axis_vals[l + fine.radius] = target.axis_eval(l * fine.spacing);
      std::vector<double> diff(fine.values.size());
      for (int l1 = 0; l1 < w; ++l1)
        for (int l2 = 0; l2 < w; ++l2)
          diff[static_cast<size_t>(l1) * w + l2] =
              axis_vals[l1] * axis_vals[l2] -
              fine.values[static_cast<size_t>(l1) * w + l2];
      e = lp_norm(diff, p, fine.spacing, 2);
    }
    const double denom = std::pow(h, k) * norm.total;
    report.rows.push_back({h, e, norm.total, denom > 0 ? e / denom : 0.0});
  }
  report.fitted_order = fit_order(report.rows, &report.degenerate);
  return report;
}

// Trend of the normalized ratios against 1 + |log h|.
struct RatioTrend {
  double slope = 0.0;         // of ratio/mean against ell = 1 + |log h|
  double intercept = 0.0;
  double r2 = 0.0;
  double max_residual = 0.0;  // largest |residual| relative to the mean
};

inline RatioTrend ratio_trend(const std::vector<ReportRow>& rows) {
  require(rows.size() >= 3, "ratio_trend: need at least 3 rows");
  std::vector<double> ell, ratio;
  for (const auto& r : rows) {
    ell.push_back(1.0 + std::abs(std::log(r.h)));
    ratio.push_back(r.ratio);
  }
  double mean = 0.0;
  for (double r : ratio) mean += r;
  mean /= ratio.size();
  require(mean > 0.0, "ratio_trend: degenerate ratios");
  for (double& r : ratio) r /= mean;
  const auto fit = linear_fit(ell, ratio);
  RatioTrend out;
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.r2 = fit.r2;
  for (size_t i = 0; i < ell.size(); ++i) {
    const double res = ratio[i] - (fit.intercept + fit.slope * ell[i]);
    out.max_residual = std::max(out.max_residual, std::abs(res));
  }
  return out;
}

struct LogFactorReport {
  ErrorReport base;
  RatioTrend trend;
};

// One-sided consistency probe for the (1 + |log h|)^n factor at p = 1, inf:
// the normalized ratios must be admissible under an affine envelope in
// |log h|.  This checks an upper bound only, as the estimate itself is
// one-sided.
inline LogFactorReport run_logfactor_probe(const TargetFunction& target,
                                           std::span<const double> h_list,
                                           double p, int k,
                                           SweepConfig config = {}) {
  require(p == 1.0 || std::isinf(p),
          "run_logfactor_probe: p must be 1 or inf");
  require(target.dim == 1, "run_logfactor_probe: one-dimensional targets");
  require(h_list.size() >= 3, "run_logfactor_probe: need >= 3 h values");
  LogFactorReport out;
  out.base = run_convergence(target, p, k, h_list, config);
  out.trend = ratio_trend(out.base.rows);
  return out;
}

// Stability factors Q_p(h): synthesize seeded band-limited functions in
// PW((pi+eps)/h) as sums of phi-atoms (their lattice samples are the atom
// coefficients, by the cardinality of phi), interpolate, and take the worst
// ratio |I_h f|_{W_p^k} / ||f||_{W_p^k}.
inline ErrorReport run_stability(double eps, double p, int k,
                                 std::span<const double> h_list, int trials,
                                 SweepConfig config = {}) {
  check_hypothesis(p, k, 1);
  require(trials >= 1, "run_stability: need at least one trial");
  const auto spec = build_cutoff(eps);

  ErrorReport report;
  report.target_id = "phi_atoms";
  report.p = p;
  report.k = k;
  report.seed = config.seed;
  report.config_echo.push_back({"eps", format_g17(eps)});
  report.config_echo.push_back({"trials", std::to_string(trials)});
  report.config_echo.push_back(
      {"fine_factor", std::to_string(config.fine_factor)});

  const int synth_radius = 16;
  for (size_t hi = 0; hi < h_list.size(); ++hi) {
    const double h = h_list[hi];
    const auto ctx = make_multiplier_context(h);
    const int interp_pad =
        static_cast<int>(std::ceil(30.0 / (h * h))) + 8;
    std::vector<double> ratios(trials, 0.0);
    parallel_for(trials, config.threads, [&](size_t trial) {
      std::vector<double> coeffs(2 * synth_radius + 1, 0.0);
      if (trial == 0) {
        coeffs[synth_radius] = 1.0;  // single phi-atom
      } else {
        std::mt19937_64 rng(splitmix64(config.seed + 1000003ull * hi) +
                            splitmix64(trial));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int m = -synth_radius + 2; m <= synth_radius - 2; ++m)
          coeffs[m + synth_radius] = unif(rng);
      }
      const auto field = make_field(h, 1, synth_radius, coeffs, true);

      const auto f_fine = quasi_eval_fine(field, spec, config.fine_factor);
      const double f_lp = lp_norm(f_fine.values, p, f_fine.spacing, 1);
      const double f_semi =
          sobolev_seminorm(f_fine.values, k, p, f_fine.spacing, 1);

      const auto i_fine = interpolate_grid_spectral(
          field, ctx, config.fine_factor, config.beta_radius, interp_pad);
      const double i_semi =
          sobolev_seminorm(i_fine.values, k, p, i_fine.spacing, 1);
      ratios[trial] = i_semi / (f_lp + f_semi);
    });
    double q = 0.0;
    for (double r : ratios) q = std::max(q, r);
    report.q_factors.push_back({h, q});
  }
  return report;
}

}  // namespace cardinal
