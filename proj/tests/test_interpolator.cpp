#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "cardinal/interpolator.hpp"

using namespace cardinal;
using Catch::Approx;

namespace {

SampledField delta_field(double h, int radius) {
  std::vector<double> vals(2 * radius + 1, 0.0);
  vals[radius] = 1.0;
  return make_field(h, 1, radius, std::move(vals), true);
}

double gauss(std::span<const double> x) {
  double q = 0.0;
  for (double c : x) q += c * c;
  return std::exp(-q);
}

}  // namespace

TEST_CASE("field validation", "[interpolator]") {
  CHECK_THROWS_AS(make_field(1.0, 1, 4, std::vector<double>(3, 0.0), false),
                  ParameterError);
  std::vector<double> bad(9, 0.0);
  bad[0] = 1.0;  // boundary value with decay_flag set
  CHECK_THROWS_AS(make_field(1.0, 1, 4, bad, true), ParameterError);
  std::vector<double> nonfinite(9, 0.0);
  nonfinite[4] = std::nan("");
  CHECK_THROWS_AS(make_field(1.0, 1, 4, nonfinite, false), std::domain_error);
}

TEST_CASE("delta data reproduces the Lagrange function", "[interpolator]") {
  const double h = 1.0;
  const auto table = chi_table(make_grid(h, 1, 32, 20.0), 8);
  const auto field = delta_field(h, 18);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    const double x = dist(rng);
    const std::vector<double> pt{x};
    CHECK(interpolate_point(field, table, pt) ==
          Approx(table.eval_raw(pt)).margin(1e-10));
  }

  // spectral route against the table samples (cross-module consistency)
  const auto ctx = make_multiplier_context(h);
  const auto fine = interpolate_grid_spectral(field, ctx, 8, 3);
  for (int s = -80; s <= 80; ++s) {
    const std::vector<int> l{s};
    CHECK(fine.value(l) == Approx(table.sample_axis(s)).margin(1e-7));
  }
}

TEST_CASE("interpolation property at the nodes", "[interpolator]") {
  const double h = 0.5;
  const auto field = sample_field(h, 1, 30, gauss);
  const auto table = chi_table(make_grid(h, 1, 32, 16.0 * h), 8);
  const auto ctx = make_multiplier_context(h);
  const auto fine = interpolate_grid_spectral(field, ctx, 8, 3);
  for (int j = -12; j <= 12; ++j) {
    const double expected = std::exp(-h * h * j * j);
    const std::vector<double> pt{h * j};
    CHECK(interpolate_point(field, table, pt) ==
          Approx(expected).margin(1e-8));
    const std::vector<int> l{8 * j};
    CHECK(fine.value(l) == Approx(expected).margin(1e-8));
  }
  const std::vector<double> outside{h * 30.0};
  CHECK_THROWS_AS(interpolate_point(field, table, outside),
                  ExtrapolationError);
}

TEST_CASE("constants are reproduced away from the boundary",
          "[interpolator]") {
  // The lattice sum of chi is exactly 1 at the nodes; between nodes it
  // carries a ripple of size 4 exp(-pi^2/h^2), so the 1e-6 reproduction
  // needs h below ~0.8.
  const double h = 0.75;
  std::vector<double> ones(2 * 36 + 1, 1.0);
  const auto field = make_field(h, 1, 36, std::move(ones), false);
  const auto table = chi_table(make_grid(h, 1, 32, 20.0 * h), 8);
  for (double x : {0.0, 0.4, 1.1, -1.6}) {
    const std::vector<double> pt{x};
    CHECK(interpolate_point(field, table, pt) == Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("pointwise and spectral routes agree", "[interpolator]") {
  const double h = 0.5;
  const auto field = sample_field(h, 1, 30, gauss);
  const auto table = chi_table(make_grid(h, 1, 32, 16.0 * h), 8);
  const auto ctx = make_multiplier_context(h);
  const auto fine = interpolate_grid_spectral(field, ctx, 8, 3);
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> pick(-6 * 8, 6 * 8);
  for (int t = 0; t < 50; ++t) {
    const int l = pick(rng);
    const double x = l * fine.spacing;
    const std::vector<double> pt{x};
    const std::vector<int> idx{l};
    CHECK(fine.value(idx) ==
          Approx(interpolate_point(field, table, pt)).margin(1e-6));
  }
}

TEST_CASE("beta truncation is already converged at B=3", "[interpolator]") {
  const double h = 1.0;
  const auto field = sample_field(h, 1, 12, gauss);
  const auto ctx = make_multiplier_context(h);
  const auto f3 = interpolate_grid_spectral(field, ctx, 8, 3);
  CHECK_FALSE(f3.aliasing_warning);
  CHECK(f3.aliasing_bound < 1e-15);

  // same fine factor, B = 3 vs 4
  const auto b3 = interpolate_grid_spectral(field, ctx, 10, 3);
  const auto b4 = interpolate_grid_spectral(field, ctx, 10, 4);
  double dmax = 0.0;
  for (size_t i = 0; i < b3.values.size(); ++i)
    dmax = std::max(dmax, std::abs(b3.values[i] - b4.values[i]));
  CHECK(dmax < 1e-10);

  // fine factor too small for the requested B raises the warning channel
  const auto coarse = interpolate_grid_spectral(field, ctx, 4, 3);
  CHECK(coarse.aliasing_warning);
  CHECK(coarse.aliasing_bound > 0.0);
}

TEST_CASE("linearity and lattice shift equivariance", "[interpolator]") {
  const double h = 0.5;
  const auto ctx = make_multiplier_context(h);
  const auto fa = sample_field(h, 1, 20, gauss);
  const auto fb = sample_field(h, 1, 20, [](std::span<const double> x) {
    return std::exp(-(x[0] - 1.0) * (x[0] - 1.0) / 2.0) * 0.7;
  });
  std::vector<double> combo(fa.values.size());
  for (size_t i = 0; i < combo.size(); ++i)
    combo[i] = 2.0 * fa.values[i] - 3.0 * fb.values[i];
  const auto fc = make_field(h, 1, 20, std::move(combo), true);

  const auto ia = interpolate_grid_spectral(fa, ctx, 4, 3);
  const auto ib = interpolate_grid_spectral(fb, ctx, 4, 3);
  const auto ic = interpolate_grid_spectral(fc, ctx, 4, 3);
  for (size_t i = 0; i < ic.values.size(); ++i)
    CHECK(ic.values[i] ==
          Approx(2.0 * ia.values[i] - 3.0 * ib.values[i]).margin(1e-12));

  // shift data by one lattice step
  std::vector<double> shifted(fa.values.size(), 0.0);
  for (size_t i = 1; i < shifted.size(); ++i) shifted[i] = fa.values[i - 1];
  shifted[0] = 0.0;
  const auto fs = make_field(h, 1, 20, std::move(shifted), true);
  const auto is = interpolate_grid_spectral(fs, ctx, 4, 3);
  for (int l = -40; l <= 40; ++l) {
    const std::vector<int> at{l + 4}, base{l};
    CHECK(is.value(at) == Approx(ia.value(base)).margin(1e-10));
  }
}

TEST_CASE("lp norms", "[interpolator]") {
  // Gaussian on [-12, 12] at spacing 1/64: closed form (pi/2)^(1/4)
  const double spacing = 1.0 / 64.0;
  const int radius = 12 * 64;
  std::vector<double> vals(2 * radius + 1);
  for (int l = -radius; l <= radius; ++l)
    vals[l + radius] = std::exp(-(l * spacing) * (l * spacing));
  CHECK(lp_norm(vals, 2.0, spacing, 1) ==
        Approx(1.1195151349202476).epsilon(1e-6));

  std::vector<double> zeros(101, 0.0);
  for (double p : {1.0, 2.0, 4.0}) CHECK(lp_norm(zeros, p, 0.1, 1) == 0.0);
  CHECK(lp_norm(zeros, std::numeric_limits<double>::infinity(), 0.1, 1) ==
        0.0);
  CHECK(lp_norm(vals, std::numeric_limits<double>::infinity(), spacing, 1) ==
        1.0);
  CHECK_THROWS_AS(lp_norm(vals, 0.5, spacing, 1), ParameterError);
}

TEST_CASE("spectral Sobolev seminorm", "[interpolator]") {
  // band-limited test field sin(1.3 x) windowed far below the box edge
  const double spacing = 1.0 / 32.0;
  const int radius = 30 * 32;
  std::vector<double> vals(2 * radius + 1), dvals(2 * radius + 1);
  for (int l = -radius; l <= radius; ++l) {
    const double x = l * spacing;
    const double w = std::exp(-x * x / 36.0);
    vals[l + radius] = std::sin(1.3 * x) * w;
    dvals[l + radius] = (1.3 * std::cos(1.3 * x) -
                         std::sin(1.3 * x) * (2.0 * x / 36.0)) *
                        w;
  }
  bool warn = true;
  const double spectral = sobolev_seminorm(vals, 1, 2.0, spacing, 1, &warn);
  CHECK_FALSE(warn);
  const double analytic = lp_norm(dvals, 2.0, spacing, 1);
  CHECK(spectral == Approx(analytic).epsilon(1e-4));

  // constant zero field
  std::vector<double> zeros(513, 0.0);
  for (int k : {0, 1, 2})
    CHECK(sobolev_seminorm(zeros, k, 2.0, 0.01, 1) == 0.0);

  // non-negligible boundary raises the accuracy warning
  std::vector<double> ramp(257);
  for (int i = 0; i < 257; ++i) ramp[i] = i / 256.0;
  bool warn2 = false;
  sobolev_seminorm(ramp, 1, 2.0, 0.01, 1, &warn2);
  CHECK(warn2);
}
