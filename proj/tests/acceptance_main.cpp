// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cardinal/experiments.hpp"
#include "cardinal/verify.hpp"

using namespace cardinal;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string title)
      : number_(number), title_(std::move(title)),
        start_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& detail) {
    all_ok_ = all_ok_ && ok;
    if (!ok) details_ += "    [fail] " + detail + "\n";
  }
  void note(const std::string& s) { notes_ += "    " + s + "\n"; }

  ~Criterion() {
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start_)
            .count();
    std::printf("[%s] criterion %d: %s (%.1f s)\n", all_ok_ ? "PASS" : "FAIL",
                number_, title_.c_str(), elapsed / 1000.0);
    if (!notes_.empty()) std::fputs(notes_.c_str(), stdout);
    if (!details_.empty()) std::fputs(details_.c_str(), stdout);
    std::fflush(stdout);
    if (!all_ok_) ++g_failures;
  }

 private:
  int number_;
  std::string title_;
  bool all_ok_ = true;
  std::string details_;
  std::string notes_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) { return format_g17(v); }

void criterion1_cardinality() {
  Criterion c(1, "cardinality of the Lagrange function");
  for (double h : {1.0, 0.5, 0.25}) {
    const auto table = chi_table(make_grid(h, 1, 32, 20.0 * h), 8);
    double worst = 0.0;
    for (int j = -16; j <= 16; ++j)
      worst = std::max(worst, std::abs(table.sample_axis(8 * j) -
                                       (j == 0 ? 1.0 : 0.0)));
    c.check(worst < 1e-8,
            "h=" + fmt(h) + " cardinality defect " + fmt(worst));
    c.note("h=" + fmt(h) + ": max |chi(hj) - delta| = " + fmt(worst));
  }
}

void criterion2_route_equivalence() {
  Criterion c(2, "dense vs spectral Lagrange coefficients");
  {
    const auto dense = coefficients_dense(make_grid(1.0, 1, 40, 8.0));
    const auto spectral = coefficients_spectral_axis(1.0, 40);
    double worst = 0.0;
    for (int j = -20; j <= 20; ++j)
      worst = std::max(worst, std::abs(dense[j + 40] - spectral[j + 40]));
    c.check(worst < 1e-8, "1-D interior disagreement " + fmt(worst));
    c.note("1-D h=1, N=40, |j|<=20: max diff = " + fmt(worst));
  }
  {
    const auto grid2 = make_grid(1.0, 2, 14, 8.0);
    const auto dense2 = coefficients_dense(grid2);
    const auto spec2 = coefficients_spectral(grid2);
    const auto axis = coefficients_dense(make_grid(1.0, 1, 14, 8.0));
    const int w = 29, off = 14;
    double worst = 0.0, tensor_worst = 0.0;
    for (int j1 = -7; j1 <= 7; ++j1)
      for (int j2 = -7; j2 <= 7; ++j2) {
        const double d = dense2[(j1 + off) * w + (j2 + off)];
        worst = std::max(worst,
                         std::abs(d - spec2[(j1 + off) * w + (j2 + off)]));
        tensor_worst = std::max(
            tensor_worst, std::abs(d - axis[j1 + off] * axis[j2 + off]));
      }
    c.check(worst < 1e-8, "2-D interior disagreement " + fmt(worst));
    c.check(tensor_worst < 1e-8, "2-D tensor defect " + fmt(tensor_worst));
    c.note("2-D h=1, N=14: route diff = " + fmt(worst) +
           ", tensor defect = " + fmt(tensor_worst));
  }
}

void criterion3_multiplier_identities() {
  Criterion c(3, "multiplier identities");
  std::mt19937_64 rng(0xacce97ull);
  for (double h : {1.0, 0.5, 0.25}) {
    const auto ctx = make_multiplier_context(h);
    std::uniform_real_distribution<double> dist(-10.0 * kPi / h,
                                                10.0 * kPi / h);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const double xi = dist(rng);
      const int radius =
          static_cast<int>(std::ceil(std::abs(xi) * h / (2.0 * kPi))) +
          ctx.series_radius + 2;
      worst = std::max(worst, std::abs(alias_sum(ctx, xi, radius) - 1.0));
    }
    c.check(worst < 1e-10, "h=" + fmt(h) + " partition defect " + fmt(worst));

    const double integral =
        2.0 * adaptive_simpson(
                  [&](double xi) {
                    return std::abs(multiplier_prime(ctx, xi));
                  },
                  0.0, kPi / h + 13.0, 1e-11);
    const double expected = 2.0 * multiplier(ctx, 0.0);
    const double rel = std::abs(integral - expected) / expected;
    c.check(rel < 1e-6,
            "h=" + fmt(h) + " ||m'||_1 relative defect " + fmt(rel));
    c.check(expected <= 2.0, "h=" + fmt(h) + " 2 m(0) exceeds 2");

    // monotone decrease on a 10^4-point grid (non-strict across the
    // double-resolution plateau near 0, strict once 1 - m is representable)
    double prev = log_multiplier(ctx, 0.0);
    bool monotone = true, past_plateau = false;
    for (int i = 1; i <= 10000; ++i) {
      const double cur = log_multiplier(ctx, 4.0 * kPi / h * i / 10000.0);
      if (past_plateau ? (cur >= prev) : (cur > prev)) monotone = false;
      if (cur < -1e-12) past_plateau = true;
      prev = cur;
    }
    c.check(monotone, "h=" + fmt(h) + " monotone decrease violated");
    c.note("h=" + fmt(h) + ": partition defect " + fmt(worst) +
           ", ||m'||_1 rel " + fmt(rel));
  }
}

void criterion4_decay_envelopes() {
  Criterion c(4, "decay envelopes of the inverse transform");
  std::vector<DecayProfile> profiles;
  for (double h : {1.0, 0.5, 0.25}) {
    const auto ctx = make_multiplier_context(h);
    const double x_max = 30.0 / h + 10.0;
    profiles.push_back(inverse_transform_profile(
        ctx, x_max, static_cast<int>(std::ceil(x_max / (h / 4.0)))));
  }
  for (const auto& prof : profiles) {
    double worst = 0.0;
    for (size_t i = 0; i < prof.x.size(); ++i) {
      const double env = std::min(1.0, prof.x[i] > 0 ? 2.0 / prof.x[i] : 1.0);
      worst = std::max(worst, std::abs(prof.value_normalized[i]) / env);
    }
    c.check(worst <= 1.0 + 1e-6, "h=" + fmt(prof.h) +
                                     " envelope min(1,2/|x|) factor " +
                                     fmt(worst));
  }
  // one C, fitted on the h=1 run, must cover all three spacings
  const double c2 = profiles.front().fitted_c2 * (1.0 + 1e-6);
  for (const auto& prof : profiles) {
    double worst = 0.0;
    for (size_t i = 0; i < prof.x.size(); ++i) {
      if (prof.x[i] < 2.0) continue;
      const double env =
          c2 / (prof.h * prof.h * prof.h * prof.x[i] * prof.x[i]);
      worst = std::max(worst, std::abs(prof.value_normalized[i]) / env);
    }
    c.check(worst <= 1.0 + 1e-9,
            "h=" + fmt(prof.h) + " envelope C/(h^3 x^2) factor " + fmt(worst));
    c.note("h=" + fmt(prof.h) + ": fitted c2 = " + fmt(prof.fitted_c2));
  }
}

void criterion5_norm_dichotomy() {
  Criterion c(5, "multiplier norm dichotomy");
  std::vector<double> hs{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  std::vector<double> ell, linf, l2;
  for (double h : hs) {
    const auto ctx = make_multiplier_context(h);
    l2.push_back(mp_norm_bounds(ctx, 2.0, 20, 7).upper);
    linf.push_back(
        mp_norm_bounds(ctx, std::numeric_limits<double>::infinity(), 20, 7)
            .upper);
    ell.push_back(1.0 + std::abs(std::log(h)));
  }
  const double lo = *std::min_element(l2.begin(), l2.end());
  const double hi = *std::max_element(l2.begin(), l2.end());
  c.check((hi - lo) / lo < 0.01,
          "p=2 upper bound varies by " + fmt((hi - lo) / lo));
  const auto fit = linear_fit(ell, linf);
  c.check(fit.slope > 0.0, "p=inf slope " + fmt(fit.slope) + " not positive");
  c.check(fit.r2 > 0.95, "p=inf affine fit R^2 " + fmt(fit.r2));
  c.note("p=2 spread " + fmt((hi - lo) / lo) + "; p=inf fit slope " +
         fmt(fit.slope) + ", R^2 " + fmt(fit.r2));
}

void criterion6_convergence_orders() {
  Criterion c(6, "Sobolev convergence orders");
  {
    const auto spline = make_bspline_target(3);
    const std::vector<double> hs{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    const auto rep = run_convergence(spline, 2.0, 3, hs);
    c.check(!rep.degenerate && rep.fitted_order >= 2.7,
            "cubic B-spline order " + fmt(rep.fitted_order));
    c.note("1-D cubic B-spline, p=2, k=3: order " + fmt(rep.fitted_order));
  }
  {
    // width-2 Gaussian: the unit-width bump is the kernel itself and is
    // reproduced to machine precision, so rates are measured on a bump
    // that is not in the shifted-kernel span, over spacings where the
    // spectral-scale errors sit above the floor
    const auto gauss = make_gaussian_target(1, 2.0);
    const std::vector<double> hs{1.2, 1.0, 0.8409, 0.70711, 0.5946};
    SweepConfig cfg;
    cfg.box_radius = 14.0;
    for (int k : {1, 2, 3, 4}) {
      const auto rep = run_convergence(gauss, 2.0, k, hs, cfg);
      c.check(!rep.degenerate && rep.fitted_order >= k - 0.3,
              "gaussian k=" + std::to_string(k) + " order " +
                  fmt(rep.fitted_order));
      if (k == 4)
        c.note("1-D Gaussian (width 2), p=2: order " +
               fmt(rep.fitted_order) + " for every k in 1..4");
    }
  }
  {
    const auto spline2 = make_bspline_target(2, 2);
    const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625};
    SweepConfig cfg;
    cfg.box_radius = 10.0;
    const auto rep = run_convergence(spline2, 2.0, 2, hs, cfg);
    c.check(!rep.degenerate && rep.fitted_order >= 1.7,
            "2-D tensor B-spline order " + fmt(rep.fitted_order));
    c.note("2-D quadratic tensor B-spline, p=2, k=2: order " +
           fmt(rep.fitted_order));
  }
}

void criterion7_logfactor() {
  Criterion c(7, "log-factor consistency at p = inf");
  const auto spline = make_bspline_target(3);
  const std::vector<double> hs{0.25,     0.125,     0.0625,
                               0.03125,  0.015625,  0.0078125};
  SweepConfig cfg;
  cfg.box_radius = 8.0;
  const auto probe = run_logfactor_probe(
      spline, hs, std::numeric_limits<double>::infinity(), 3, cfg);
  // one-sided: ratios admissible under an affine envelope in |log h|,
  // no super-logarithmic growth
  c.check(probe.trend.slope >= -0.05,
          "p=inf trend slope " + fmt(probe.trend.slope) +
              " (strongly decreasing would be fine; growth must be "
              "at most affine)");
  c.check(probe.trend.max_residual <= 0.25,
          "p=inf affine residual " + fmt(probe.trend.max_residual));
  c.note("p=inf: slope " + fmt(probe.trend.slope) + ", max residual " +
         fmt(probe.trend.max_residual));

  // p = 2 control: no log growth (the sharp L_2 rate of the spline target
  // exceeds k, so the ratio may decrease; it must not grow)
  const auto control = run_convergence(spline, 2.0, 3, hs, cfg);
  const auto trend2 = ratio_trend(control.rows);
  c.check(trend2.slope <= 0.05,
          "p=2 control slope " + fmt(trend2.slope) + " grows");
  c.note("p=2 control: slope " + fmt(trend2.slope) +
         " (one-sided: growth bound)");
}

void criterion8_stability() {
  Criterion c(8, "stable interpolation factors Q_p(h)");
  const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625, 0.03125};
  SweepConfig cfg;
  cfg.seed = 7;
  {
    const auto rep = run_stability(0.4, 2.0, 1, hs, 32, cfg);
    double lo = 1e300, hi = 0.0;
    for (const auto& q : rep.q_factors) {
      lo = std::min(lo, q.q);
      hi = std::max(hi, q.q);
    }
    c.check(hi / lo < 2.0, "Q_2 spread " + fmt(hi / lo));
    c.note("Q_2 over the sweep: spread factor " + fmt(hi / lo));
  }
  {
    const auto rep = run_stability(0.4, std::numeric_limits<double>::infinity(),
                                   1, hs, 32, cfg);
    std::vector<double> ell, q;
    for (const auto& row : rep.q_factors) {
      ell.push_back(1.0 + std::abs(std::log(row.h)));
      q.push_back(row.q);
    }
    const auto fit = linear_fit(ell, q);
    double mean = 0.0;
    for (double v : q) mean += v;
    mean /= q.size();
    double max_res = 0.0;
    for (size_t i = 0; i < q.size(); ++i)
      max_res = std::max(
          max_res, std::abs(q[i] - (fit.intercept + fit.slope * ell[i])));
    c.check(max_res <= 0.15 * mean,
            "Q_inf affine envelope residual " + fmt(max_res / mean));
    c.note("Q_inf: affine fit slope " + fmt(fit.slope) + ", residual/mean " +
           fmt(max_res / mean));
  }
}

void criterion9_quasi() {
  Criterion c(9, "band-limited quasi-interpolant");
  const auto spec = build_cutoff(0.3);
  {
    const auto target = make_gaussian_target();
    const auto field = sample_target(target, 0.5, 24);
    const auto fine = quasi_eval_fine(field, spec, 8);
    double defect = 0.0;
    for (int j = -20; j <= 20; ++j) {
      const std::vector<int> l{8 * j};
      defect = std::max(defect, std::abs(fine.value(l) -
                                         field.values[j + field.radius]));
    }
    c.check(defect < 1e-8, "lattice interpolation defect " + fmt(defect));
    c.note("lattice interpolation defect " + fmt(defect));

    // out-of-band spectral mass of the pointwise-assembled interpolant
    const int pad = static_cast<int>(std::ceil(spec.r_phi)) + 8;
    const int radius = field.radius + pad;
    const int m = 8, n = m * (2 * radius + 1);
    const double dx = 0.5 / m;
    std::vector<std::complex<double>> buf(n, 0.0);
    for (int l = 0; l < n; ++l) {
      const double x = (l - n / 2) * dx;
      if (std::abs(x / 0.5) > field.radius + spec.r_phi + 1) continue;
      const std::vector<double> pt{x};
      buf[l] = quasi_eval_point(field, spec, pt);
    }
    fft_forward(buf);
    const double band = (kPi + 2.0 * spec.eps) / 0.5;
    double inside = 0.0, outside = 0.0;
    for (int q = 0; q < n; ++q) {
      const double xi = 2.0 * kPi * signed_bin(q, n) / (n * dx);
      (std::abs(xi) <= band ? inside : outside) += std::norm(buf[q]);
    }
    const double mass = outside / (inside + outside);
    c.check(mass < 1e-10, "out-of-band mass " + fmt(mass));
    c.note("out-of-band relative spectral mass " + fmt(mass));
  }
  {
    const auto spline = make_bspline_target(3);
    const std::vector<double> hs{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    const auto rep = quasi_error_rate(spline, spec, hs, 2.0, 3);
    c.check(!rep.degenerate && rep.fitted_order >= 2.7,
            "quasi error order " + fmt(rep.fitted_order));
    c.note("||f - g||_2 order for the cubic B-spline: " +
           fmt(rep.fitted_order));
  }
}

void criterion10_determinism() {
  Criterion c(10, "determinism of the verify suite");
  const std::string a_path = "acceptance_verify_a.csv";
  const std::string b_path = "acceptance_verify_b.csv";
  const auto a = verify_suite(7);
  const auto b = verify_suite(7);
  emit_verify(a, "csv", a_path);
  emit_verify(b, "csv", b_path);
  std::ifstream fa(a_path, std::ios::binary), fb(b_path, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  c.check(!sa.str().empty() && sa.str() == sb.str(),
          "verify reports differ between runs");
  c.check(a.all_pass, "verify suite reported failures");
  std::remove(a_path.c_str());
  std::remove(b_path.c_str());
  c.note("verify --seed 7 twice: " + std::to_string(sa.str().size()) +
         " identical bytes, all checks pass");
}

}  // namespace

int main() {
  std::printf("cardinal acceptance suite\n");
  criterion1_cardinality();
  criterion2_route_equivalence();
  criterion3_multiplier_identities();
  criterion4_decay_envelopes();
  criterion5_norm_dichotomy();
  criterion6_convergence_orders();
  criterion7_logfactor();
  criterion8_stability();
  criterion9_quasi();
  criterion10_determinism();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
