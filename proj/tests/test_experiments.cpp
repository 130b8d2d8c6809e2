#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "cardinal/experiments.hpp"
#include "cardinal/verify.hpp"

using namespace cardinal;
using Catch::Approx;

TEST_CASE("hypothesis gating", "[experiments]") {
  const auto spline = make_bspline_target(3);
  const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625};
  // p = 2, k = 0 violates k > n/p
  CHECK_THROWS_AS(run_convergence(spline, 2.0, 0, hs), HypothesisError);
  // p = 1 requires k >= n
  CHECK_THROWS_AS(run_convergence(spline, 1.0, 0, hs), HypothesisError);
  // p = inf requires k >= 1
  CHECK_THROWS_AS(
      run_convergence(spline, std::numeric_limits<double>::infinity(), 0, hs),
      HypothesisError);
  // beyond the certified order of the target
  CHECK_THROWS_AS(run_convergence(spline, 2.0, 5, hs), ParameterError);
  // not enough sweep points
  CHECK_THROWS_AS(
      run_convergence(spline, 2.0, 3, std::vector<double>{0.5, 0.25, 0.125}),
      ParameterError);
  // p = 1 with k = n (equality) is admitted
  const auto hat = make_bspline_target(1);
  SweepConfig cfg;
  cfg.box_radius = 6.0;
  cfg.fine_factor = 4;
  CHECK_NOTHROW(run_convergence(hat, 1.0, 1, hs, cfg));
}

TEST_CASE("degenerate zero target is flagged", "[experiments]") {
  TargetFunction zero;
  zero.id = "zero";
  zero.dim = 1;
  zero.certified_k = 4;
  zero.axis_eval = [](double) { return 0.0; };
  zero.axis_deriv = [](double, int) { return 0.0; };
  const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625};
  const auto report = run_convergence(zero, 2.0, 2, hs);
  CHECK(report.degenerate);
  for (const auto& r : report.rows) CHECK(r.error == 0.0);
}

TEST_CASE("cubic spline converges at third order", "[experiments]") {
  const auto spline = make_bspline_target(3);
  const std::vector<double> hs{0.25, 0.125, 0.0625, 0.03125};
  SweepConfig cfg;
  cfg.box_radius = 8.0;
  const auto report = run_convergence(spline, 2.0, 3, hs, cfg);
  CHECK_FALSE(report.degenerate);
  CHECK(report.fitted_order >= 2.7);
  // errors decrease monotonically
  for (size_t i = 1; i < report.rows.size(); ++i)
    CHECK(report.rows[i].error < report.rows[i - 1].error);
}

namespace {

// closed-form transform of the centered cubic B-spline: sinc(xi/2)^4
double bspline3_hat(double xi) {
  if (std::abs(xi) < 1e-8) {
    const double u = xi / 2.0;
    return 1.0 - 4.0 * u * u / 6.0;
  }
  const double s = std::sin(xi / 2.0) / (xi / 2.0);
  return s * s * s * s;
}

}  // namespace

TEST_CASE("measured error matches the analytic Fourier-side value",
          "[experiments]") {
  // independent route: the squared error is the L2 mass of
  // P(xi) m(xi) 1_{|xi| <= (2B+1)pi/h} - f_hat(xi), with P the dual-lattice
  // periodization of the closed-form spline transform
  const double h = 0.25;
  const auto ctx = make_multiplier_context(h);
  const double span = 7.0 * kPi / h;
  const int n = 200000;
  const double dxi = 2.0 * span / n;
  double acc = 0.0;
  for (int q = 0; q <= n; ++q) {
    const double xi = -span + q * dxi;
    double period = 0.0;
    for (int b = -4; b <= 4; ++b)
      period += bspline3_hat(xi - 2.0 * kPi * b / h);
    const double err = period * multiplier(ctx, xi) - bspline3_hat(xi);
    acc += ((q == 0 || q == n) ? 0.5 : 1.0) * err * err;
  }
  const double semi_analytic = std::sqrt(acc * dxi / (2.0 * kPi));

  const auto spline = make_bspline_target(3);
  const std::vector<double> hs{2 * h, h, h / 2, h / 4};
  const auto rep = run_convergence(spline, 2.0, 3, hs);
  CHECK(rep.rows[1].error == Approx(semi_analytic).epsilon(1e-2));
}

TEST_CASE("error norm stabilizes under fine-factor refinement",
          "[experiments]") {
  const auto spline = make_bspline_target(3);
  const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> errs;
  for (int m : {4, 8, 16}) {
    SweepConfig cfg;
    cfg.box_radius = 6.0;
    cfg.fine_factor = m;
    const auto rep = run_convergence(spline, 2.0, 3, hs, cfg);
    errs.push_back(rep.rows.back().error);
  }
  CHECK(std::abs(errs[1] - errs[0]) / errs[1] < 1e-2);
  CHECK(std::abs(errs[2] - errs[1]) / errs[2] < 1e-3);
}

TEST_CASE("logfactor probe contracts", "[experiments]") {
  const auto spline = make_bspline_target(3);
  CHECK_THROWS_AS(run_logfactor_probe(spline, std::vector<double>{0.5, 0.25},
                                      2.0, 3),
                  ParameterError);  // p must be 1 or inf
  CHECK_THROWS_AS(
      run_logfactor_probe(spline, std::vector<double>{0.5},
                          std::numeric_limits<double>::infinity(), 3),
      ParameterError);  // single h cannot be fitted

  const std::vector<double> hs{0.25, 0.125, 0.0625, 0.03125, 0.015625};
  SweepConfig cfg;
  cfg.box_radius = 8.0;
  const auto probe = run_logfactor_probe(
      spline, hs, std::numeric_limits<double>::infinity(), 3, cfg);
  CHECK(probe.base.rows.size() == hs.size());
  // ratios stay under the fitted affine envelope
  CHECK(probe.trend.max_residual < 0.5);
}

TEST_CASE("stability factors are reproducible and bounded", "[experiments]") {
  const std::vector<double> hs{0.5, 0.25};
  SweepConfig cfg;
  cfg.seed = 42;
  const auto a = run_stability(0.4, 2.0, 1, hs, 6, cfg);
  SweepConfig cfg2 = cfg;
  cfg2.threads = 2;  // reduction order is fixed by trial index
  const auto b = run_stability(0.4, 2.0, 1, hs, 6, cfg2);
  REQUIRE(a.q_factors.size() == 2);
  for (size_t i = 0; i < a.q_factors.size(); ++i) {
    CHECK(a.q_factors[i].q == b.q_factors[i].q);  // bit-for-bit
    CHECK(a.q_factors[i].q > 0.0);
    CHECK(std::isfinite(a.q_factors[i].q));
  }
  CHECK_THROWS_AS(run_stability(0.4, 2.0, 0, hs, 4, cfg), HypothesisError);
  CHECK_THROWS_AS(run_stability(2.0, 2.0, 1, hs, 4, cfg), ParameterError);
}

TEST_CASE("report emission round trip", "[experiments]") {
  ErrorReport rep;
  rep.target_id = "demo";
  rep.p = 2.0;
  rep.k = 3;
  rep.seed = 7;
  rep.rows = {{0.5, 1.25e-3, 2.5, 0.004}, {0.25, 1.5625e-4, 2.5, 0.004}};
  rep.q_factors = {{0.5, 1.7}};
  rep.fitted_order = 3.0;
  rep.config_echo = {{"box_radius", "12"}, {"fine_factor", "8"}};

  std::stringstream csv;
  emit_report_csv(rep, csv);
  const auto rows = read_csv(csv);
  // find the error rows and recover the values exactly
  int found = 0;
  for (const auto& cells : rows) {
    if (cells.size() == 3 && cells[0] == "error") {
      ++found;
      const double h = std::stod(cells[1]);
      const double e = std::stod(cells[2]);
      if (h == 0.5) CHECK(e == 1.25e-3);
      if (h == 0.25) CHECK(e == 1.5625e-4);
    }
  }
  CHECK(found == 2);

  std::stringstream js;
  emit_report_json(rep, js);
  const auto parsed = nlohmann::json::parse(js.str());
  CHECK(parsed["config"]["box_radius"] == "12");
  CHECK(parsed["seed"] == 7);
  CHECK(parsed["rows"].size() == 2);
  CHECK(parsed["rows"][0]["error"] == 1.25e-3);

  CHECK_THROWS_AS(
      emit_report(rep, "csv", "/nonexistent-dir/report.csv"), IoError);
  CHECK_THROWS_AS(emit_report(rep, "yaml", "/tmp/r.yaml"), ParameterError);
}

TEST_CASE("verify suite is deterministic", "[experiments][verify]") {
  const auto a = verify_suite(7);
  const auto b = verify_suite(7);
  REQUIRE(a.checks.size() == b.checks.size());
  std::stringstream sa, sb;
  emit_verify_csv(a, sa);
  emit_verify_csv(b, sb);
  CHECK(sa.str() == sb.str());  // byte-identical
  CHECK(a.all_pass);
}
